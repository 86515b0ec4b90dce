"""The renormalization map F on length quadruples and its convergents.

For ``Z = (x1, x2, y1, y2)`` with positive entries::

    m = floor(x1 / (y1 + y2)),  n = floor(x2 / y1)
    F(Z) = (y1, y2, x1 - m (y1 + y2), x2 - n y1)

The pair ``(m, n)`` is the convergent emitted by the step.  ``Z`` is a
2-cycle of ``F`` exactly when ``x1 + x2 > y1 > x2`` and ``y1 + y2 > x1 > y2``.
A variant dividing ``x2`` by ``y2`` instead of ``y1`` is available through
``variant="intro"`` for comparison runs; it does not have the 2-cycle
property and nothing else in the package uses it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import DegenerateError, EmptyCellError, NotAdmissibleError
from .exact import Quadratic, Scalar, as_scalar, compare, floor_ratio, sign, to_json

Pair = Tuple[int, int]

TRUNCATED = "truncated"
TWO_CYCLE = "two_cycle"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class LengthQuadruple:
    x1: Scalar
    x2: Scalar
    y1: Scalar
    y2: Scalar

    @classmethod
    def of(cls, *values) -> "LengthQuadruple":
        if len(values) == 1:
            values = tuple(values[0])
        if len(values) != 4:
            raise ValueError("a length quadruple has four entries")
        z = cls(*(as_scalar(v) for v in values))
        if any(sign(v) <= 0 for v in z):
            raise ValueError("length quadruple entries must be positive")
        return z

    def __iter__(self):
        return iter((self.x1, self.x2, self.y1, self.y2))

    def scaled(self, factor) -> "LengthQuadruple":
        f = as_scalar(factor)
        return LengthQuadruple(*(v * f for v in self))

    def proportional(self, other: "LengthQuadruple") -> bool:
        """Projective equality, decided by cross-multiplication."""
        a, b = tuple(self), tuple(other)
        return all(compare(a[i] * b[0], b[i] * a[0]) == 0 for i in range(1, 4))

    def total(self) -> Scalar:
        return self.x1 + self.x2 + self.y1 + self.y2

    def to_json(self) -> list:
        return [to_json(v) for v in self]


def f_step(z: LengthQuadruple, variant: str = "corrected") -> Tuple[LengthQuadruple, int, int]:
    """One application of F; returns ``(F(Z), m, n)``."""
    x1, x2, y1, y2 = z
    m = floor_ratio(x1, y1 + y2)
    if variant == "corrected":
        n = floor_ratio(x2, y1)
        r2 = x2 - n * y1
    elif variant == "intro":
        n = floor_ratio(x2, y2)
        r2 = x2 - n * y2
    else:
        raise ValueError("unknown variant %r" % variant)
    r1 = x1 - m * (y1 + y2)
    if sign(r1) == 0 or sign(r2) == 0:
        raise DegenerateError("zero remainder at convergent (%d, %d): saddle connection" % (m, n))
    return LengthQuadruple(y1, y2, r1, r2), m, n


def is_two_cycle(z: LengthQuadruple) -> bool:
    x1, x2, y1, y2 = z
    return (
        compare(x1 + x2, y1) > 0
        and compare(y1, x2) > 0
        and compare(y1 + y2, x1) > 0
        and compare(x1, y2) > 0
    )


@dataclass(frozen=True)
class ConvergentSequence:
    entries: Tuple[Pair, ...]
    status: str
    final: Optional[LengthQuadruple] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {"entries": [list(p) for p in self.entries], "status": self.status}


def convergents(z: LengthQuadruple, max_steps: int, variant: str = "corrected") -> ConvergentSequence:
    """Iterate F, stopping at a 2-cycle, a saddle connection, or ``max_steps``."""
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    entries: List[Pair] = []
    status = TRUNCATED
    for _ in range(max_steps):
        if is_two_cycle(z):
            status = TWO_CYCLE
            break
        try:
            z, m, n = f_step(z, variant)
        except DegenerateError:
            status = DEGENERATE
            break
        entries.append((m, n))
    return ConvergentSequence(tuple(entries), status, z)


def check_admissible(seq: Sequence[Pair], strict_initial: bool = True) -> bool:
    """Finite-prefix admissibility of a convergent sequence.

    ``(m_k, n_k) != (0, 0)`` for ``k >= 1`` and ``m_k = 0`` forces
    ``m_{k+1} != 0, n_{k+1} = 0``.  With ``strict_initial=False`` the second
    rule is not imposed at ``k = 0``; F itself produces such prefixes.
    """
    seq = [tuple(p) for p in seq]
    for k, (m, n) in enumerate(seq):
        if m < 0 or n < 0:
            return False
        if k >= 1 and (m, n) == (0, 0):
            return False
        if m == 0 and k + 1 < len(seq) and (strict_initial or k >= 1):
            m1, n1 = seq[k + 1]
            if m1 == 0 or n1 != 0:
                return False
    return True


def admissibility_warnings(seq: Sequence[Pair]) -> List[str]:
    """Infinitude conditions that a finite prefix cannot witness."""
    warnings = []
    names = ("m at even k", "m at odd k", "n at even k", "n at odd k")
    for idx, name in enumerate(names):
        parity, coord = idx % 2, idx // 2
        if not any(p[coord] for k, p in enumerate(seq) if k % 2 == parity):
            warnings.append("no nonzero %s in the prefix" % name)
    return warnings


# seeds with a known (1,2)-periodic and (1,0),(1,2),(1,2),... future
_T = Quadratic(-1, 1, 2)
_TAIL = (Quadratic(1), Quadratic(1), _T, _T)
_TAIL_AFTER_ZERO_M = (_T + 2, _T, Quadratic(1), Quadratic(1))


def pull_back(z: LengthQuadruple, m: int, n: int) -> LengthQuadruple:
    """The inverse branch of F for the convergent ``(m, n)``."""
    x1, x2, y1, y2 = z
    return LengthQuadruple(y1 + m * (x1 + x2), y2 + n * x1, x1, x2)


def realize_sequence(seq: Sequence[Pair], strict_initial: bool = True) -> LengthQuadruple:
    """An exact quadruple whose first convergents are ``seq``.

    The prefix is pulled back from a quadratic seed whose own convergents
    continue the sequence admissibly.
    """
    seq = [tuple(int(v) for v in p) for p in seq]
    if not seq:
        raise NotAdmissibleError("empty convergent sequence")
    if not check_admissible(seq, strict_initial=strict_initial):
        raise NotAdmissibleError("sequence %r is not admissible" % (seq,))
    seed = _TAIL_AFTER_ZERO_M if seq[-1][0] == 0 else _TAIL
    z = LengthQuadruple(*seed)
    for m, n in reversed(seq):
        z = pull_back(z, m, n)
    got = convergents(z, len(seq))
    if list(got.entries) != seq:
        raise EmptyCellError("pull-back of %r produced convergents %r" % (seq, list(got.entries)))
    return z


def random_admissible(rng, length: int, max_entry: int = 4, allow_zero_m: bool = True) -> List[Pair]:
    """A random sequence satisfying :func:`check_admissible` (strict form)."""
    seq: List[Pair] = []
    for k in range(length):
        if seq and seq[-1][0] == 0:
            seq.append((rng.randint(1, max_entry), 0))
            continue
        while True:
            m = rng.randint(0 if allow_zero_m else 1, max_entry)
            n = rng.randint(0, max_entry)
            if (m, n) != (0, 0) or (k == 0 and rng.random() < 0.5):
                break
        seq.append((m, n))
    return seq


def parse_pairs(items: Iterable) -> List[Pair]:
    return [(int(p[0]), int(p[1])) for p in items]
