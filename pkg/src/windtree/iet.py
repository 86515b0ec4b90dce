"""Interval exchange transformations with left/right parts and their suspensions.

Each interval ``E_i = (lambda_{i,l}, lambda_{i,r})`` contains the origin; the
part left of the origin gets the label ``(i, l)`` and the part right of it the
label ``(i, r)``.  The transformation sends

* ``E_{i,L} = (lambda_{i,l}, c_i)`` onto ``(0, lambda_{pi_l(i),r})`` of ``E_{pi_l(i)}``,
* ``E_{i,R} = (c_i, lambda_{i,r})`` onto ``(lambda_{pi_r(i),l}, 0)`` of ``E_{pi_r(i)}``,

where ``c_i = lambda_{i,l} + lambda_{pi_l(i),r}`` is the cut point.

The three-interval combinatorics ``pi_l = (1 3)``, ``pi_r = (1 2)`` models the
L-shaped surface ``L(a, b)``; lengths use the normalization where the
horizontal direction of the rotated surface has unit cosine, so that for a
slope ``t``::

    lambda = ((-(1-b), (1-a) t), (-(1-b), a t), (-b, (1-a) t)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Sequence, Tuple

from .errors import DegenerateError, ParamRangeError, SingularPointError
from .exact import Quadratic, Scalar, as_scalar, compare, sign, to_json

LEFT = "l"
RIGHT = "r"


class Letter(NamedTuple):
    """A label ``(index, side)`` with ``side`` in ``{"l", "r"}``."""

    index: int
    side: str

    @property
    def token(self) -> str:
        return "%d%s" % (self.index, self.side)

    def __str__(self) -> str:
        return self.token

    def __repr__(self) -> str:
        return "Letter(%s)" % self.token


Word = Tuple[Letter, ...]

_LETTERS = {(i, s): Letter(i, s) for i in range(1, 10) for s in (LEFT, RIGHT)}


def letter(index: int, side: str) -> Letter:
    if side not in (LEFT, RIGHT):
        raise ValueError("side must be 'l' or 'r', got %r" % (side,))
    return _LETTERS.get((index, side)) or Letter(index, side)


def parse_letter(token: str) -> Letter:
    token = token.strip().replace("ℓ", "l").replace("_", "")
    if len(token) < 2 or not token[:-1].isdigit():
        raise ValueError("malformed letter token %r" % token)
    return letter(int(token[:-1]), token[-1])


def word_to_string(word: Iterable[Letter]) -> str:
    return ",".join(x.token for x in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    return tuple(parse_letter(t) for t in text.split(","))


def _perm_from_cycle(cycle: Sequence[int], d: int) -> Tuple[int, ...]:
    images = list(range(1, d + 1))
    for k, i in enumerate(cycle):
        images[i - 1] = cycle[(k + 1) % len(cycle)]
    return tuple(images)


#: one-line images of the two permutations of the L(a,b) combinatorics
PI_L = _perm_from_cycle((1, 3), 3)
PI_R = _perm_from_cycle((1, 2), 3)


@dataclass(frozen=True)
class IETConfig:
    """Combinatorial data ``pi_l, pi_r`` (one-line, 1-based) and lengths."""

    pi_l: Tuple[int, ...]
    pi_r: Tuple[int, ...]
    lam: Tuple[Tuple[Scalar, Scalar], ...]

    @property
    def d(self) -> int:
        return len(self.lam)

    def left(self, i: int) -> Scalar:
        return self.lam[i - 1][0]

    def right(self, i: int) -> Scalar:
        return self.lam[i - 1][1]

    def cut(self, i: int) -> Scalar:
        return self.left(i) + self.right(self.pi_l[i - 1])

    def scaled(self, factor) -> "IETConfig":
        f = as_scalar(factor)
        return IETConfig(self.pi_l, self.pi_r, tuple((l * f, r * f) for l, r in self.lam))

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "pi_l": list(self.pi_l),
            "pi_r": list(self.pi_r),
            "lambda": [[to_json(l), to_json(r)] for l, r in self.lam],
        }


def _is_transitive(pi_l: Sequence[int], pi_r: Sequence[int]) -> bool:
    seen = {1}
    stack = [1]
    while stack:
        i = stack.pop()
        for j in (pi_l[i - 1], pi_r[i - 1]):
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(pi_l)


def make_config(pi_l, pi_r, lam) -> IETConfig:
    """Build a config after checking shapes, signs and transitivity."""
    pi_l, pi_r = tuple(pi_l), tuple(pi_r)
    d = len(lam)
    if sorted(pi_l) != list(range(1, d + 1)) or sorted(pi_r) != list(range(1, d + 1)):
        raise ValueError("pi_l and pi_r must be permutations of 1..%d" % d)
    if not _is_transitive(pi_l, pi_r):
        raise ValueError("pi_l and pi_r do not act transitively")
    pairs = tuple((as_scalar(l), as_scalar(r)) for l, r in lam)
    for l, r in pairs:
        if sign(l) >= 0 or sign(r) <= 0:
            raise ValueError("expected lambda_{i,l} < 0 < lambda_{i,r}")
    return IETConfig(pi_l, pi_r, pairs)


def check_train_track(cfg: IETConfig) -> bool:
    """True iff ``lambda_{i,r} - lambda_{i,l} = lambda_{pi_l(i),r} - lambda_{pi_r(i),l}`` for all i."""
    for i in range(1, cfg.d + 1):
        lhs = cfg.right(i) - cfg.left(i)
        rhs = cfg.right(cfg.pi_l[i - 1]) - cfg.left(cfg.pi_r[i - 1])
        if compare(lhs, rhs) != 0:
            return False
    return True


def _check_open_unit(name: str, v: Scalar) -> None:
    if sign(v) <= 0 or compare(v, 1) >= 0:
        raise ParamRangeError("%s must lie in (0, 1), got %s" % (name, v))


def iet_from_parameters(a, b, slope) -> IETConfig:
    """The three-interval exchange coding the linear flow of slope ``slope`` on ``L(a, b)``."""
    a, b, t = as_scalar(a), as_scalar(b), as_scalar(slope)
    _check_open_unit("a", a)
    _check_open_unit("b", b)
    if sign(t) <= 0:
        raise ParamRangeError("slope must be positive, got %s" % t)
    one = Quadratic(1)
    lam = (
        (-(one - b), (one - a) * t),
        (-(one - b), a * t),
        (-b, (one - a) * t),
    )
    cfg = IETConfig(PI_L, PI_R, lam)
    if _all_exact(cfg) and not check_train_track(cfg):  # pragma: no cover
        raise AssertionError("train-track relations failed for constructed lengths")
    return cfg


def parameters_from_iet(cfg: IETConfig) -> Tuple[Scalar, Scalar, Scalar]:
    """Recover ``(a, b, slope)`` from the length ratios of an L(a,b) config."""
    _require_lab(cfg)
    l1, l3 = -cfg.left(1), -cfg.left(3)
    r1, r2 = cfg.right(1), cfg.right(2)
    return r2 / (r1 + r2), l3 / (l1 + l3), (r1 + r2) / (l1 + l3)


def z_from_iet(cfg: IETConfig) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
    """The length quadruple ``(|l_2|, |l_3|, r_3, r_2)`` driving the renormalization."""
    _require_lab(cfg)
    return (-cfg.left(2), -cfg.left(3), cfg.right(3), cfg.right(2))


def _all_exact(cfg: IETConfig) -> bool:
    return all(isinstance(v, Quadratic) for pair in cfg.lam for v in pair)


def _require_lab(cfg: IETConfig) -> None:
    if cfg.d != 3 or cfg.pi_l != PI_L or cfg.pi_r != PI_R:
        raise DegenerateError("only the L(a,b) combinatorics pi_l=(1 3), pi_r=(1 2) is supported")


Point = Tuple[int, Scalar]


def label_of(cfg: IETConfig, point: Point) -> Letter:
    i, x = point
    s = sign(x)
    if s == 0:
        raise SingularPointError("the origin of E_%d carries no label" % i)
    return letter(i, LEFT if s < 0 else RIGHT)


def iet_step(cfg: IETConfig, point: Point) -> Tuple[Point, Letter]:
    """Apply the exchange once; returns the image point and the label of ``point``."""
    i, x = point
    x = as_scalar(x)
    if not 1 <= i <= cfg.d:
        raise ValueError("interval index %d out of range" % i)
    if compare(x, cfg.left(i)) <= 0 or compare(x, cfg.right(i)) >= 0:
        raise SingularPointError("offset %s outside the open interval E_%d" % (x, i))
    s = sign(x)
    if s == 0:
        raise SingularPointError("offset 0 is a discontinuity")
    c = compare(x, cfg.cut(i))
    if c == 0:
        raise SingularPointError("offset %s is the cut point of E_%d" % (x, i))
    lab = letter(i, LEFT if s < 0 else RIGHT)
    if c < 0:
        return (cfg.pi_l[i - 1], x - cfg.left(i)), lab
    return (cfg.pi_r[i - 1], x - cfg.right(i)), lab


def orbit(cfg: IETConfig, point: Point, steps: int) -> Tuple[List[Point], List[Letter]]:
    """Forward orbit of length ``steps`` with its coding."""
    points = [point]
    coding: List[Letter] = []
    for _ in range(steps):
        point, lab = iet_step(cfg, point)
        points.append(point)
        coding.append(lab)
    return points, coding


@dataclass(frozen=True)
class SuspensionData:
    """Planar vectors ``zeta[i] = ((re_l, im_l), (re_r, im_r))`` over each interval."""

    zeta: Tuple[Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]], ...]

    def side_length_squared(self, i: int, side: str) -> Scalar:
        re, im = self.zeta[i - 1][0 if side == LEFT else 1]
        return re * re + im * im


def check_suspension(cfg: IETConfig, data: SuspensionData) -> bool:
    """Real parts, positivity and the suspension train-track relations."""
    for i in range(1, cfg.d + 1):
        (rl, il), (rr, ir) = data.zeta[i - 1]
        if compare(rl, cfg.left(i)) != 0 or compare(rr, cfg.right(i)) != 0:
            return False
        if sign(il) <= 0 or sign(ir) <= 0:
            return False
        pl, pr = cfg.pi_l[i - 1], cfg.pi_r[i - 1]
        _, ir_l = data.zeta[pl - 1][1]
        _, il_r = data.zeta[pr - 1][0]
        if compare(ir - il, ir_l - il_r) != 0:
            return False
    return True


def suspension_from_iet(cfg: IETConfig) -> SuspensionData:
    """The suspension of an L(a,b) exchange by three rectangles.

    Imaginary parts are ``|lambda_{i,l}| * s`` and ``lambda_{i,r} / s`` with
    ``s = (lambda_{1,r} + lambda_{2,r}) / (|lambda_{1,l}| + |lambda_{3,l}|)``,
    which makes each pair ``zeta_{i,l}, zeta_{i,r}`` orthogonal and
    ``zeta_{1,l} = zeta_{2,l}``.
    """
    _require_lab(cfg)
    l1, l3 = -cfg.left(1), -cfg.left(3)
    r1, r2 = cfg.right(1), cfg.right(2)
    if sign(l1 + l3) == 0:
        raise DegenerateError("vanishing left lengths")
    s = (r1 + r2) / (l1 + l3)
    zeta = tuple(
        ((cfg.left(i), -cfg.left(i) * s), (cfg.right(i), cfg.right(i) / s))
        for i in range(1, 4)
    )
    data = SuspensionData(zeta)
    for i in range(3):
        (rl, il), (rr, ir) = zeta[i]
        if _all_exact(cfg) and sign(rl * rr + il * ir) != 0:
            raise DegenerateError("orthogonality failed on interval %d" % (i + 1))
    if not _all_exact(cfg):
        # interval lengths cannot certify equalities; the identities are algebraic
        return data
    if any(compare(u, v) != 0 for u, v in zip(zeta[0][0], zeta[1][0])):
        raise DegenerateError("zeta_{1,l} and zeta_{2,l} differ")
    if not check_suspension(cfg, data):
        raise DegenerateError("suspension relations failed; lengths are inconsistent")
    return data
