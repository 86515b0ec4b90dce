"""Exact scalars: rationals, real quadratic irrationals and refinable intervals.

Three kinds of real numbers are used throughout the package:

* ``rational``  -- a :class:`Quadratic` with ``y == 0`` (``D`` is then 1),
* ``quadratic`` -- a :class:`Quadratic` ``x + y*sqrt(D)`` with ``D`` square-free,
* ``interval``  -- an :class:`IntervalScalar`, a real number known through a
  function returning shrinking rational enclosures.

Quadratic numbers over different fields never mix implicitly; use
:func:`promote` to turn one of them into an interval first.
"""

from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Callable, Optional, Tuple, Union

from .errors import (
    BudgetExceededError,
    MixedFieldError,
    ScalarDivisionByZero,
    UndecidedError,
)

#: number of refinement rounds allowed before a comparison gives up
DEFAULT_BUDGET = 64
#: precision gained (in bits) at every refinement round
BITS_PER_ROUND = 32

Enclosure = Tuple[Fraction, Fraction]
RationalLike = Union[int, Fraction]


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@lru_cache(maxsize=4096)
def squarefree_decomposition(n: int) -> Tuple[int, int]:
    """Return ``(f, d)`` with ``n == f*f*d`` and ``d`` square-free."""
    if n <= 0:
        raise ValueError("expected a positive integer, got %r" % n)
    f, d = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return f, d * n


def _sign(q) -> int:
    return (q > 0) - (q < 0)


class Quadratic:
    """The exact real number ``x + y*sqrt(D)`` with ``x, y`` rational.

    ``D`` is square-free; rationals are stored with ``y == 0`` and ``D == 1``.
    """

    __slots__ = ("x", "y", "D")

    def __init__(self, x: RationalLike = 0, y: RationalLike = 0, D: int = 1):
        x = Fraction(x)
        y = Fraction(y)
        D = int(D)
        if D < 1:
            raise ValueError("D must be a positive integer")
        if y and D > 1:
            f, D = squarefree_decomposition(D)
            y *= f
        if D == 1:
            x, y = x + y, Fraction(0)
        if not y:
            D = 1
        self.x = x
        self.y = y
        self.D = D

    @classmethod
    def _make(cls, x: Fraction, y: Fraction, D: int) -> "Quadratic":
        # x, y already Fractions and D already square-free
        q = object.__new__(cls)
        if not y:
            D = 1
        q.x = x
        q.y = y
        q.D = D
        return q

    @classmethod
    def sqrt(cls, r: RationalLike) -> "Quadratic":
        """Exact square root of a non-negative rational."""
        r = Fraction(r)
        if r < 0:
            raise ValueError("square root of a negative number")
        p, q = r.numerator, r.denominator
        f, d = squarefree_decomposition(p * q) if p else (0, 1)
        return cls(0, Fraction(f, q), d) if d > 1 else cls(Fraction(f, q))

    # -- basic properties ------------------------------------------------

    @property
    def kind(self) -> str:
        return "quadratic" if self.y else "rational"

    @property
    def is_rational(self) -> bool:
        return not self.y

    def conjugate(self) -> "Quadratic":
        return Quadratic._make(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        return self.x * self.x - self.y * self.y * self.D

    def sign(self) -> int:
        sx, sy = _sign(self.x), _sign(self.y)
        if sy == 0 or sx == sy:
            return sx if sx else sy
        if sx == 0:
            return sy
        # opposite signs: compare x^2 with y^2 D (never equal, D square-free)
        return sx if self.x * self.x > self.y * self.y * self.D else sy

    def __float__(self) -> float:
        if not self.y:
            return float(self.x)
        return float(self.x) + float(self.y) * math.sqrt(self.D)

    def __bool__(self) -> bool:
        return bool(self.x) or bool(self.y)

    def __repr__(self) -> str:
        if not self.y:
            return "Quadratic(%s)" % self.x
        return "Quadratic(%s, %s, %d)" % (self.x, self.y, self.D)

    def __str__(self) -> str:
        if not self.y:
            return str(self.x)
        ys = "sqrt(%d)" % self.D if self.y == 1 else "%s*sqrt(%d)" % (abs(self.y), self.D)
        if self.y == -1:
            ys = "sqrt(%d)" % self.D
        if not self.x:
            return ("-" if self.y < 0 else "") + ys
        return "%s%s%s" % (self.x, "-" if self.y < 0 else "+", ys)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Optional["Quadratic"]:
        if isinstance(other, Quadratic):
            if other.D != self.D and other.y and self.y:
                raise MixedFieldError(
                    "cannot combine values of Q(sqrt(%d)) and Q(sqrt(%d))" % (self.D, other.D)
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Quadratic._make(Fraction(other), Fraction(0), 1)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quadratic._make(self.x + o.x, self.y + o.y, max(self.D, o.D))

    __radd__ = __add__

    def __neg__(self) -> "Quadratic":
        return Quadratic._make(-self.x, -self.y, self.D)

    def __pos__(self) -> "Quadratic":
        return self

    def __abs__(self) -> "Quadratic":
        return -self if self.sign() < 0 else self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quadratic._make(self.x - o.x, self.y - o.y, max(self.D, o.D))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        D = max(self.D, o.D)
        return Quadratic._make(
            self.x * o.x + self.y * o.y * D, self.x * o.y + self.y * o.x, D
        )

    __rmul__ = __mul__

    def inverse(self) -> "Quadratic":
        if not self:
            raise ScalarDivisionByZero("division by zero")
        if not self.y:
            return Quadratic._make(1 / self.x, Fraction(0), 1)
        n = self.norm()
        return Quadratic._make(self.x / n, -self.y / n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> "Quadratic":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Quadratic(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Quadratic):
            return self.x == other.x and self.y == other.y and self.D == other.D
        if isinstance(other, (int, Fraction)):
            return not self.y and self.x == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.y:
            return hash(self.x)
        return hash((self.x, self.y, self.D))

    def _cmp(self, other) -> Optional[int]:
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __floor__(self) -> int:
        if not self.y:
            return math.floor(self.x)
        p, q = self.y.numerator, self.y.denominator
        s = isqrt(p * p * self.D)  # floor(|p| sqrt(D)), never exact
        n = math.floor(self.x + (Fraction(s, q) if p > 0 else Fraction(-s - 1, q)))
        while (self - n).sign() < 0:
            n -= 1
        while (self - (n + 1)).sign() >= 0:
            n += 1
        return n

    def __ceil__(self) -> int:
        return -math.floor(-self)

    def enclosure(self, bits: int) -> Enclosure:
        """Rational lower/upper bounds of width at most ``2**-bits * |y|``."""
        if not self.y:
            return self.x, self.x
        scale = 1 << bits
        s = isqrt(self.D * scale * scale)
        lo_r, hi_r = Fraction(s, scale), Fraction(s + 1, scale)
        if self.y > 0:
            return self.x + self.y * lo_r, self.x + self.y * hi_r
        return self.x + self.y * hi_r, self.x + self.y * lo_r


def _dyadic_outward(lo: Fraction, hi: Fraction, bits: int) -> Enclosure:
    """Round an enclosure outward to ``bits`` fractional bits when that shrinks it."""
    scale = 1 << bits
    if lo.denominator > scale:
        lo = Fraction(math.floor(lo * scale), scale)
    if hi.denominator > scale:
        hi = Fraction(math.ceil(hi * scale), scale)
    return lo, hi


class _Imprecise(Exception):
    """Raised inside an enclosure function that needs more precision."""


class IntervalScalar:
    """A real number known through rational enclosures of increasing precision.

    ``enclose(bits)`` must return ``(lo, hi)`` containing the number, with
    ``hi - lo -> 0`` as ``bits`` grows.  ``exact`` optionally carries an exact
    :class:`Quadratic` equal to the number (an equality witness).
    """

    __slots__ = ("_enclose", "exact", "_best", "_best_bits")

    def __init__(
        self,
        enclose: Callable[[int], Enclosure],
        exact: Optional[Quadratic] = None,
        initial: Optional[Enclosure] = None,
        initial_bits: int = 0,
    ):
        self._enclose = enclose
        self.exact = exact
        self._best: Optional[Enclosure] = None
        self._best_bits = -1
        if initial is not None:
            self._best = (Fraction(initial[0]), Fraction(initial[1]))
            self._best_bits = initial_bits

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_exact(cls, q) -> "IntervalScalar":
        q = as_scalar(q)
        if isinstance(q, IntervalScalar):
            return q
        if q.is_rational:
            v = q.x
            return cls(lambda bits: (v, v), exact=q)
        return cls(q.enclosure, exact=q)

    @classmethod
    def from_bounds(cls, lo: RationalLike, hi: RationalLike) -> "IntervalScalar":
        """A fixed enclosure with no way to refine it further."""
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("empty enclosure")

        def enclose(bits: int) -> Enclosure:
            return lo, hi

        exact = Quadratic(lo) if lo == hi else None
        return cls(enclose, exact=exact, initial=(lo, hi))

    # -- enclosures --------------------------------------------------------

    def at(self, bits: int) -> Enclosure:
        """Enclosure computed at the given working precision (cached when tighter)."""
        if self._best is not None and bits <= self._best_bits:
            return self._best
        lo, hi = self._enclose(bits)
        lo, hi = _dyadic_outward(Fraction(lo), Fraction(hi), bits)
        if self._best is not None:
            lo, hi = max(lo, self._best[0]), min(hi, self._best[1])
        self._best, self._best_bits = (lo, hi), bits
        return lo, hi

    @property
    def lo(self) -> Fraction:
        return self.enclosure[0]

    @property
    def hi(self) -> Fraction:
        return self.enclosure[1]

    @property
    def enclosure(self) -> Enclosure:
        if self._best is None:
            for bits in _schedule(DEFAULT_BUDGET):
                try:
                    return self.at(bits)
                except _Imprecise:
                    continue
            raise UndecidedError("no finite enclosure within budget")
        return self._best

    @property
    def width(self) -> Fraction:
        lo, hi = self.enclosure
        return hi - lo

    @property
    def kind(self) -> str:
        return "interval"

    def __float__(self) -> float:
        lo, hi = self.enclosure
        return float((lo + hi) / 2)

    def __repr__(self) -> str:
        lo, hi = self.enclosure
        return "IntervalScalar([%.17g, %.17g])" % (float(lo), float(hi))

    # -- arithmetic --------------------------------------------------------

    def _binary(self, other, op: str, swap: bool = False):
        o = _to_interval(other)
        if o is None:
            return NotImplemented
        a, b = (o, self) if swap else (self, o)
        exact = None
        if a.exact is not None and b.exact is not None:
            try:
                exact = _EXACT_OPS[op](a.exact, b.exact)
            except (MixedFieldError, ScalarDivisionByZero):
                exact = None
        return IntervalScalar(_compose(a, b, op), exact=exact)

    def __add__(self, other):
        return self._binary(other, "+")

    def __radd__(self, other):
        return self._binary(other, "+", swap=True)

    def __sub__(self, other):
        return self._binary(other, "-")

    def __rsub__(self, other):
        return self._binary(other, "-", swap=True)

    def __mul__(self, other):
        return self._binary(other, "*")

    def __rmul__(self, other):
        return self._binary(other, "*", swap=True)

    def __truediv__(self, other):
        return self._binary(other, "/")

    def __rtruediv__(self, other):
        return self._binary(other, "/", swap=True)

    def __neg__(self) -> "IntervalScalar":
        src = self

        def enclose(bits: int) -> Enclosure:
            lo, hi = src.at(bits)
            return -hi, -lo

        return IntervalScalar(enclose, exact=None if self.exact is None else -self.exact)

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __eq__(self, other):
        if _to_interval(other) is None:
            return NotImplemented
        return compare(self, other) == 0

    __hash__ = None  # type: ignore[assignment]

    def __floor__(self) -> int:
        for bits in _schedule(DEFAULT_BUDGET):
            try:
                lo, hi = self.at(bits)
            except _Imprecise:
                continue
            if math.floor(lo) == math.floor(hi):
                return math.floor(lo)
        if self.exact is not None:
            return math.floor(self.exact)
        raise UndecidedError("floor not decided within budget", enclosure=self._best)

    def sign(self) -> int:
        return int(compare(self, 0))


_EXACT_OPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
}


def _magnitude_bits(enc: Enclosure) -> int:
    m = max(abs(enc[0]), abs(enc[1]))
    return max(0, math.ceil(m).bit_length()) + 2


def _compose(a: IntervalScalar, b: IntervalScalar, op: str) -> Callable[[int], Enclosure]:
    if op in "+-":

        def enclose(bits: int) -> Enclosure:
            alo, ahi = a.at(bits + 2)
            blo, bhi = b.at(bits + 2)
            if op == "+":
                return alo + blo, ahi + bhi
            return alo - bhi, ahi - blo

        return enclose

    if op == "*":

        def enclose(bits: int) -> Enclosure:
            extra = max(_magnitude_bits(a.at(bits)), _magnitude_bits(b.at(bits)))
            alo, ahi = a.at(bits + extra)
            blo, bhi = b.at(bits + extra)
            ps = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
            return min(ps), max(ps)

        return enclose

    def enclose(bits: int) -> Enclosure:
        blo, bhi = b.at(bits)
        if blo <= 0 <= bhi:
            raise _Imprecise()
        # 1/b has derivative 1/b^2; pad precision accordingly
        small = min(abs(blo), abs(bhi))
        extra = max(0, math.ceil(1 / small).bit_length() * 2) + _magnitude_bits(a.at(bits)) + 2
        blo, bhi = b.at(bits + extra)
        alo, ahi = a.at(bits + extra)
        inv = (1 / bhi, 1 / blo)
        ps = (alo * inv[0], alo * inv[1], ahi * inv[0], ahi * inv[1])
        return min(ps), max(ps)

    return enclose


def _schedule(budget: int):
    for i in range(budget):
        yield BITS_PER_ROUND * (i + 1)


Scalar = Union[Quadratic, IntervalScalar]


def as_scalar(v) -> Scalar:
    """Coerce ints, Fractions, strings and scalars to an exact scalar."""
    if isinstance(v, (Quadratic, IntervalScalar)):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(v, (int, Fraction)):
        return Quadratic(v)
    if isinstance(v, str):
        return parse_scalar(v)
    if isinstance(v, float):
        # floats are exact dyadic rationals; convert them without rounding
        return Quadratic(Fraction(v))
    raise TypeError("cannot interpret %r as an exact scalar" % (v,))


def _to_interval(v) -> Optional[IntervalScalar]:
    if isinstance(v, IntervalScalar):
        return v
    if isinstance(v, (Quadratic, int, Fraction)):
        return IntervalScalar.from_exact(v)
    return None


def promote(v) -> IntervalScalar:
    """Explicitly turn an exact scalar into an interval scalar."""
    return IntervalScalar.from_exact(as_scalar(v))


def exact_value(v) -> Optional[Quadratic]:
    v = as_scalar(v)
    if isinstance(v, Quadratic):
        return v
    return v.exact


def compare(u, v, budget: Optional[int] = None) -> Ordering:
    """Exact ordering of ``u`` and ``v``.

    Intervals are refined until the enclosures separate; equality between
    intervals is only certified through their exact witnesses.
    """
    u, v = as_scalar(u), as_scalar(v)
    if isinstance(u, Quadratic) and isinstance(v, Quadratic):
        return Ordering((u - v).sign())
    eu, ev = exact_value(u), exact_value(v)
    if eu is not None and ev is not None:
        try:
            return Ordering((eu - ev).sign())
        except MixedFieldError:
            pass
    diff = _to_interval(u) - _to_interval(v)
    enc = None
    for bits in _schedule(DEFAULT_BUDGET if budget is None else budget):
        try:
            enc = diff.at(bits)
        except _Imprecise:
            continue
        if enc[0] > 0:
            return Ordering.GREATER
        if enc[1] < 0:
            return Ordering.LESS
    raise UndecidedError("comparison not decided within budget", enclosure=enc)


def sign(u, budget: Optional[int] = None) -> int:
    return int(compare(u, 0, budget))


def floor_ratio(u, v, budget: Optional[int] = None) -> int:
    """The integer ``n`` with ``n*v <= u < (n+1)*v`` (``u >= 0``, ``v > 0``)."""
    u, v = as_scalar(u), as_scalar(v)
    if isinstance(v, Quadratic) and not v:
        raise ScalarDivisionByZero("floor_ratio by zero")
    if isinstance(u, Quadratic) and isinstance(v, Quadratic):
        if v.sign() < 0 or u.sign() < 0:
            raise ValueError("floor_ratio expects u >= 0 and v > 0")
        return math.floor(u / v)
    eu, ev = exact_value(u), exact_value(v)
    if eu is not None and ev is not None:
        try:
            if not ev:
                raise ScalarDivisionByZero("floor_ratio by zero")
            return math.floor(eu / ev)
        except MixedFieldError:
            pass
    ratio = _to_interval(u) / _to_interval(v)
    enc = None
    for bits in _schedule(DEFAULT_BUDGET if budget is None else budget):
        try:
            enc = ratio.at(bits)
        except _Imprecise:
            continue
        if enc[1] < 0:
            raise ValueError("floor_ratio expects u >= 0 and v > 0")
        if math.floor(enc[0]) == math.floor(enc[1]):
            return math.floor(enc[0])
    raise UndecidedError("floor of ratio not decided within budget", enclosure=enc)


def refine(u, target_width: RationalLike, budget: Optional[int] = None) -> IntervalScalar:
    """Return an interval for ``u`` of width at most ``target_width``."""
    target = Fraction(target_width)
    iv = _to_interval(as_scalar(u))
    if iv._best is not None and iv.width <= target:
        return iv
    enc = None
    for bits in _schedule(DEFAULT_BUDGET if budget is None else budget):
        try:
            enc = iv.at(bits)
        except _Imprecise:
            continue
        if enc[1] - enc[0] <= target:
            out = IntervalScalar(iv._enclose, exact=iv.exact, initial=enc, initial_bits=bits)
            return out
    raise BudgetExceededError(
        "could not reach width %s (best enclosure %r)" % (target, enc)
    )


# -- parsing and serialization --------------------------------------------

_RATIONAL = r"(?:\d+(?:/\d+)?|\d*\.\d+|\d+\.\d*)"
_SQRT_TERM = re.compile(
    r"^(?:(?P<c>%s)\*?)?sqrt\((?P<D>\d+)\)(?:\*(?P<c2>%s))?(?:/(?P<q>\d+))?$" % (_RATIONAL, _RATIONAL)
)


def _parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError("not a rational number: %r" % s) from exc


def parse_scalar(text: str) -> Quadratic:
    """Parse ``"p/q"``, decimals, or ``"x+y*sqrt(D)"``-style expressions.

    A whole expression may be wrapped as ``"(...)/q"``.
    """
    s = text.replace(" ", "").replace("√", "sqrt")
    if not s:
        raise ValueError("empty scalar")
    m = re.fullmatch(r"\((.*)\)/(\d+)", s)
    if m:
        return parse_scalar(m.group(1)) / int(m.group(2))
    if "sqrt" not in s:
        return Quadratic(_parse_rational(s))
    total = Quadratic(0)
    for sgn, term in re.findall(r"([+-]?)([^+-]+)", s):
        sg = -1 if sgn == "-" else 1
        tm = _SQRT_TERM.match(term)
        if tm:
            coef = Fraction(1)
            if tm.group("c"):
                coef *= _parse_rational(tm.group("c"))
            if tm.group("c2"):
                coef *= _parse_rational(tm.group("c2"))
            if tm.group("q"):
                coef /= int(tm.group("q"))
            value = Quadratic.sqrt(int(tm.group("D"))) * coef
        else:
            value = Quadratic(_parse_rational(term))
        total = total + value * sg
    return total


def _frac_str(q: Fraction) -> str:
    return str(q)


def to_json(v) -> dict:
    v = as_scalar(v)
    if isinstance(v, IntervalScalar):
        lo, hi = v.enclosure
        return {"kind": "interval", "lo": _frac_str(lo), "hi": _frac_str(hi)}
    if v.is_rational:
        return {"kind": "rational", "x": _frac_str(v.x), "decimal": "%.17g" % float(v)}
    return {
        "kind": "quadratic",
        "x": _frac_str(v.x),
        "y": _frac_str(v.y),
        "D": v.D,
        "decimal": "%.17g" % float(v),
    }


def from_json(obj: dict) -> Scalar:
    kind = obj.get("kind")
    if kind == "rational":
        return Quadratic(Fraction(obj["x"]))
    if kind == "quadratic":
        return Quadratic(Fraction(obj["x"]), Fraction(obj["y"]), int(obj["D"]))
    if kind == "interval":
        return IntervalScalar.from_bounds(Fraction(obj["lo"]), Fraction(obj["hi"]))
    raise ValueError("unknown scalar kind %r" % kind)
