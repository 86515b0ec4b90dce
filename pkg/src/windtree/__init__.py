"""Exact computations for wind-tree billiards and their renormalization."""

__version__ = "0.1.0"

from .errors import WindtreeError
from .exact import IntervalScalar, Quadratic, as_scalar, compare, parse_scalar

__all__ = ["IntervalScalar", "Quadratic", "WindtreeError", "as_scalar", "compare", "parse_scalar"]
