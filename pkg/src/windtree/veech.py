"""Veech parameters of ``L(a, b)`` and the expansion of renormalizable slopes.

A multi-twist ``(m_h, n_h, m_v, n_v)`` fixes ``(a, b)`` through

    m_h b = n_h (1 - a)(1 - b),    m_v a = n_v (1 - a)(1 - b).

With ``mu_h = n_h / m_h``, ``mu_v = n_v / m_v`` and
``Delta = 1 + (mu_h - mu_v)^2 + 2 (mu_h + mu_v)`` the solution is

    1 / (1 - a) = (1 + mu_v - mu_h + sqrt(Delta)) / 2
    1 / (1 - b) = (1 + mu_h - mu_v + sqrt(Delta)) / 2

and the parabolic widths are ``s_h = m_h / (1 - b)``, ``s_v = m_v / (1 - a)``.

Slopes are described by the cotangent ``x = cot(theta)`` written as the
continued fraction ``x = a_0 s_h + 1/(a_1 s_v + 1/(a_2 s_h + ...))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import (
    DegenerateError,
    InternalError,
    MixedFieldError,
    NotPeriodicError,
    NotQuadraticError,
    OutOfDomainError,
)
from .exact import (
    IntervalScalar,
    Quadratic,
    Scalar,
    as_scalar,
    compare,
    floor_ratio,
    sign,
    to_json,
)

Pair = Tuple[int, int]


@dataclass(frozen=True)
class MultiTwist:
    m_h: int
    n_h: int
    m_v: int
    n_v: int

    def __post_init__(self):
        for name in ("m_h", "n_h", "m_v", "n_v"):
            if getattr(self, name) < 1:
                raise ValueError("%s must be a positive integer" % name)
        if math.gcd(self.m_h, self.n_h) != 1 or math.gcd(self.m_v, self.n_v) != 1:
            raise ValueError("multi-twist pairs must be coprime")

    @property
    def mu_h(self) -> Fraction:
        return Fraction(self.n_h, self.m_h)

    @property
    def mu_v(self) -> Fraction:
        return Fraction(self.n_v, self.m_v)

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.m_h, self.n_h, self.m_v, self.n_v)


@dataclass(frozen=True)
class VeechSurfaceParams:
    a: Quadratic
    b: Quadratic
    mt: MultiTwist
    s_h: Quadratic
    s_v: Quadratic

    @property
    def D(self) -> int:
        return max(self.a.D, self.b.D)

    def to_json(self) -> dict:
        return {
            "a": to_json(self.a),
            "b": to_json(self.b),
            "s_h": to_json(self.s_h),
            "s_v": to_json(self.s_v),
            "D": self.D,
            "multitwist": list(self.mt.as_tuple()),
        }


def check_multitwist_identities(a, b, mt: MultiTwist) -> bool:
    prod = (1 - a) * (1 - b)
    return compare(mt.m_h * b, mt.n_h * prod) == 0 and compare(mt.m_v * a, mt.n_v * prod) == 0


def params_from_multitwist(mt: MultiTwist) -> VeechSurfaceParams:
    mu_h, mu_v = mt.mu_h, mt.mu_v
    root = Quadratic.sqrt(1 + (mu_h - mu_v) ** 2 + 2 * (mu_h + mu_v))
    u = (1 + mu_v - mu_h + root) / 2  # 1 / (1 - a)
    v = (1 + mu_h - mu_v + root) / 2  # 1 / (1 - b)
    a, b = 1 - u.inverse(), 1 - v.inverse()
    if not check_multitwist_identities(a, b, mt):
        raise InternalError("multi-twist identities failed for %r" % (mt,))
    if not (0 < a < 1 and 0 < b < 1):
        raise InternalError("parameters outside (0, 1) for %r" % (mt,))
    s_h, s_v = mt.m_h * v, mt.m_v * u
    if compare(s_h, mt.n_h * (1 - a) / b) != 0 or compare(s_v, mt.n_v * (1 - b) / a) != 0:
        raise InternalError("width identities failed for %r" % (mt,))
    return VeechSurfaceParams(a, b, mt, s_h, s_v)


def multitwist_from_ab(a, b) -> Optional[MultiTwist]:
    """The multi-twist of ``L(a, b)``, or ``None`` when the ratios are irrational."""
    a, b = as_scalar(a), as_scalar(b)
    if isinstance(a, IntervalScalar) or isinstance(b, IntervalScalar):
        raise TypeError("multitwist_from_ab needs exact parameters")
    prod = (1 - a) * (1 - b)
    mu_h, mu_v = b / prod, a / prod
    if not (mu_h.is_rational and mu_v.is_rational):
        return None
    return MultiTwist(mu_h.x.denominator, mu_h.x.numerator, mu_v.x.denominator, mu_v.x.numerator)


def multitwist_grid(bound: int) -> List[MultiTwist]:
    """Every multi-twist with entries in ``1..bound``."""
    pairs = [(m, n) for m in range(1, bound + 1) for n in range(1, bound + 1) if math.gcd(m, n) == 1]
    return [MultiTwist(mh, nh, mv, nv) for mh, nh in pairs for mv, nv in pairs]


# -- slope expansions -----------------------------------------------------------

FINITE = "finite"
PERIODIC = "periodic"
APERIODIC = "aperiodic"


@dataclass(frozen=True)
class SlopeExpansion:
    """Coefficients ``a_k`` with widths ``(s_h, s_v)``.

    ``period`` repeats forever after ``prefix``; ``generator(k)`` describes an
    infinite aperiodic expansion; with neither, the expansion is finite.
    """

    prefix: Tuple[int, ...]
    widths: Tuple[Scalar, Scalar]
    period: Tuple[int, ...] = ()
    generator: Optional[Callable[[int], int]] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.prefix and not self.period and self.generator is None:
            raise ValueError("empty expansion")
        if self.prefix and self.prefix[0] < 0:
            raise ValueError("a_0 must be non-negative")
        # period entries recur at indices >= 1
        if any(c < 1 for c in self.prefix[1:] + self.period):
            raise ValueError("a_k must be positive for k >= 1")
        if self.period and self.generator is not None:
            raise ValueError("give either a period or a generator")
        w = (as_scalar(self.widths[0]), as_scalar(self.widths[1]))
        if not all(isinstance(v, Quadratic) and v.sign() > 0 for v in w):
            raise ValueError("widths must be exact positive numbers")
        if w[0].D != w[1].D and not (w[0].is_rational or w[1].is_rational):
            # multi-twist widths always share the field Q(sqrt(Delta))
            raise MixedFieldError("widths %s and %s lie in different quadratic fields" % w)
        object.__setattr__(self, "widths", w)

    @classmethod
    def periodic(cls, period: Sequence[int], widths, prefix: Sequence[int] = ()) -> "SlopeExpansion":
        return cls(tuple(prefix), widths, tuple(period))

    @classmethod
    def finite(cls, coeffs: Sequence[int], widths) -> "SlopeExpansion":
        return cls(tuple(coeffs), widths)

    @property
    def kind(self) -> str:
        if self.period:
            return PERIODIC
        if self.generator is not None:
            return APERIODIC
        return FINITE

    def __len__(self) -> int:
        if self.kind != FINITE:
            raise TypeError("infinite expansion has no length")
        return len(self.prefix)

    def coefficient(self, k: int) -> int:
        if k < len(self.prefix):
            return self.prefix[k]
        if self.period:
            return self.period[(k - len(self.prefix)) % len(self.period)]
        if self.generator is not None:
            c = int(self.generator(k))
            if c < (0 if k == 0 else 1):
                raise ValueError("generator produced invalid a_%d = %d" % (k, c))
            return c
        raise IndexError("finite expansion has only %d coefficients" % len(self.prefix))

    def coefficients(self, count: int) -> List[int]:
        return [self.coefficient(k) for k in range(count)]

    def available(self, count: int) -> int:
        return min(count, len(self.prefix)) if self.kind == FINITE else count

    def width(self, k: int) -> Scalar:
        return self.widths[k % 2]

    def to_json(self) -> dict:
        return {
            "prefix": list(self.prefix),
            "period": list(self.period),
            "kind": self.kind,
            "widths": [to_json(w) for w in self.widths],
        }


def s_convergents(se: SlopeExpansion, count: int) -> List[Tuple[Scalar, Scalar]]:
    """``(p_k, q_k)`` for ``k < count`` with alternating multipliers.

    ``p_k = w_k a_k p_{k-1} + p_{k-2}`` and likewise for ``q``, where
    ``w_k`` is ``s_h`` for even ``k`` and ``s_v`` for odd ``k``.
    """
    p_prev, q_prev = Quadratic(1), Quadratic(0)
    p, q = se.width(0) * se.coefficient(0), Quadratic(1)
    out = [(p, q)]
    for k in range(1, se.available(count)):
        c = se.width(k) * se.coefficient(k)
        p, p_prev = c * p + p_prev, p
        q, q_prev = c * q + q_prev, q
        out.append((p, q))
    return out


def _exact_finite(se: SlopeExpansion, coeffs: Sequence[int], start: int, tail=None):
    # evaluate [c_start w; ..., tail] from the back
    value = tail
    for k in range(start + len(coeffs) - 1, start - 1, -1):
        term = se.width(k) * coeffs[k - start]
        value = term if value is None else term + value.inverse()
    return value


def _mobius(se: SlopeExpansion, coeffs: Sequence[int], start: int):
    a00, a01, a10, a11 = Quadratic(1), Quadratic(0), Quadratic(0), Quadratic(1)
    for i, c in enumerate(coeffs):
        t = se.width(start + i) * c
        a00, a01, a10, a11 = a00 * t + a01, a00, a10 * t + a11, a10
    return a00, a01, a10, a11


def _sqrt_exact(d: Quadratic) -> Optional[Quadratic]:
    """Square root of ``d`` when it lies in Q or in the field of ``d``."""
    if d.is_rational:
        return Quadratic.sqrt(d.x)
    # (u + v sqrt D)^2 = d: u^2 + D v^2 = x, 2 u v = y
    n = d.norm()
    if n < 0:
        return None
    rn = Quadratic.sqrt(n)
    if not rn.is_rational:
        return None
    for s in (rn.x, -rn.x):
        u2 = (d.x + s) / 2
        if u2 <= 0:
            continue
        u = Quadratic.sqrt(u2)
        if not u.is_rational:
            continue
        v = d.y / (2 * u.x)
        cand = Quadratic(u.x, v, d.D)
        if cand * cand == d and cand.sign() > 0:
            return cand
    return None


def _periodic_exact(se: SlopeExpansion) -> Quadratic:
    r = len(se.prefix)
    p = len(se.period)
    full = p if (p % 2 == 0) else 2 * p  # widths alternate, so the cycle needs even length
    cycle = [se.coefficient(r + i) for i in range(full)]
    m00, m01, m10, m11 = _mobius(se, cycle, r)
    # y = (m00 y + m01) / (m10 y + m11)  <=>  m10 y^2 + (m11 - m00) y - m01 = 0
    A, B, C = m10, m11 - m00, -m01
    disc = B * B - 4 * A * C
    root = _sqrt_exact(disc)
    if root is None:
        raise NotQuadraticError("the periodic tail is not a quadratic irrational over the width field")
    try:
        y = (-B + root) / (2 * A)
        if y.sign() <= 0:
            y = (-B - root) / (2 * A)
    except MixedFieldError:
        raise NotQuadraticError("the periodic tail has degree four over Q") from None
    if r == 0:
        return y
    return _exact_finite(se, list(se.prefix), 0, tail=y)


def enclosure_at_depth(se: SlopeExpansion, k: int) -> Tuple[Fraction, Fraction]:
    """Rational bounds on ``x`` from the convergents of index ``k - 1`` and ``k``."""
    conv = s_convergents(se, k + 1)
    if len(conv) < k + 1:
        raise ValueError("expansion has fewer than %d coefficients" % (k + 1))
    (p0, q0), (p1, q1) = conv[k - 1], conv[k]
    v0, v1 = p0 / q0, p1 / q1
    bits = 64 + 4 * k
    lo0, hi0 = v0.enclosure(bits)
    lo1, hi1 = v1.enclosure(bits)
    return min(lo0, lo1), max(hi0, hi1)


def _interval_cotangent(se: SlopeExpansion) -> IntervalScalar:
    def enclose(bits: int):
        target = Fraction(1, 1 << bits)
        p_prev, q_prev = Quadratic(1), Quadratic(0)
        p, q = se.width(0) * se.coefficient(0), Quadratic(1)
        k = 0
        while True:
            k += 1
            c = se.width(k) * se.coefficient(k)
            p, p_prev = c * p + p_prev, p
            q, q_prev = c * q + q_prev, q
            # |p/q - p'/q'| = 1 / (q q')
            if q_prev.sign() > 0 and compare(q * q_prev, 1 / target) >= 0:
                break
        a, b = (p_prev / q_prev).enclosure(bits + 4), (p / q).enclosure(bits + 4)
        return min(a[0], b[0]), max(a[1], b[1])

    return IntervalScalar(enclose)


def cotangent_from_expansion(se: SlopeExpansion, exact: Optional[bool] = None, precision=None) -> Scalar:
    """``x = cot(theta)`` for the expansion.

    ``exact=True`` insists on an exact quadratic value, ``exact=False`` asks
    for an interval, and ``None`` picks exact when possible.  ``precision``
    bounds the width of a returned interval.
    """
    value = None
    if se.kind == FINITE:
        value = _exact_finite(se, list(se.prefix), 0)
    elif se.kind == PERIODIC:
        try:
            value = _periodic_exact(se)
        except NotQuadraticError:
            if exact:
                raise
    elif exact:
        raise NotPeriodicError("an aperiodic expansion has no exact quadratic value")
    if value is not None and exact is not False:
        return value
    if value is not None:
        iv = IntervalScalar.from_exact(value)
    else:
        iv = _interval_cotangent(se)
    if precision is not None:
        from .exact import refine

        iv = refine(iv, Fraction(precision))
    return iv


def slope_from_expansion(se: SlopeExpansion, exact: Optional[bool] = None, precision=None) -> Scalar:
    """``tan(theta) = 1 / x`` for the expansion."""
    x = cotangent_from_expansion(se, exact=exact)
    t = 1 / x
    if precision is not None:
        from .exact import refine

        return refine(t, Fraction(precision))
    return t


def psi_step(x, s_h, s_v) -> Tuple[Scalar, Tuple[str, int]]:
    """One step of the expansion map; returns ``(x', (branch, multiplicity))``."""
    x, s_h, s_v = as_scalar(x), as_scalar(s_h), as_scalar(s_v)
    if sign(x) <= 0:
        raise OutOfDomainError("x must be positive")
    if compare(x, s_h) > 0:
        mult = floor_ratio(x, s_h)
        rest = x - mult * s_h
        if sign(rest) == 0:
            raise DegenerateError("x is an exact multiple of s_h")
        return rest, ("r", mult)
    if compare(x * s_v, 1) < 0:
        y = 1 / x
        mult = floor_ratio(y, s_v)
        rest = y - mult * s_v
        if sign(rest) == 0:
            raise DegenerateError("1/x is an exact multiple of s_v")
        return 1 / rest, ("l", mult)
    raise OutOfDomainError("x = %s lies in the gap [1/s_v, s_h]" % (x,))


def psi_expansion(x, s_h, s_v, depth: int) -> List[int]:
    """Recover ``a_0, ..., a_{depth-1}`` by iterating :func:`psi_step`."""
    coeffs: List[int] = []
    expected = "r"
    while len(coeffs) < depth:
        x, (branch, mult) = psi_step(x, s_h, s_v)
        if branch != expected:
            if not coeffs and branch == "l":
                coeffs.append(0)
            else:
                raise InternalError("branches did not alternate")
        coeffs.append(mult)
        expected = "l" if branch == "r" else "r"
    return coeffs[:depth]


def convergents_from_expansion(se: SlopeExpansion, mt: MultiTwist, depth: int) -> List[Pair]:
    """Predicted F-convergents: ``a_k (m_h, n_h)`` at even k, ``a_k (m_v, n_v)`` at odd k."""
    out = []
    for k in range(se.available(depth)):
        c = se.coefficient(k)
        out.append((c * mt.m_h, c * mt.n_h) if k % 2 == 0 else (c * mt.m_v, c * mt.n_v))
    return out


def length_quadruple(a, b, slope) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
    """``(1 - b, b, (1 - a) t, a t)`` for the slope ``t``."""
    a, b, t = as_scalar(a), as_scalar(b), as_scalar(slope)
    return (1 - b, b, (1 - a) * t, a * t)
