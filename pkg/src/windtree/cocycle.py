"""The wind-tree cocycle with values in ``G = D_inf x D_inf``.

An element of ``G`` is a translation ``t`` in Z^2 together with a flip
``kappa`` in the Klein group ``K = {id, tv, th, tvth}``, where ``tv`` negates
the first coordinate and ``th`` the second.  Products follow
``(t1, k1)(t2, k2) = (t1 + k1 t2, k1 k2)``.

Letter values::

    1l -> ((1, 0), id)    1r -> ((0, 1), id)
    2l -> ((0, 0), id)    2r -> ((0, 0), th)
    3l -> ((0, 0), tv)    3r -> ((0, 0), id)

Besides the group and word evaluation, this module carries the integer
recurrences for word endpoints and boxes along a convergent sequence, the
self-avoidance checks on materialized words, and the finite-depth divergence
certificate built from them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import CapacityError, OddNError
from .iet import Letter, letter
from .renorm import admissibility_warnings, check_admissible
from .words import (
    BYTES_PER_LETTER,
    DEFAULT_CAP_BYTES,
    WORD_NAMES,
    WordSystem,
    block_decomposition,
    expand_levels,
)

Pair = Tuple[int, int]
Point = Tuple[int, int]

FLIP_NAMES = {(1, 1): "id", (-1, 1): "tv", (1, -1): "th", (-1, -1): "tvth"}
FLIP_SIGNS = {v: k for k, v in FLIP_NAMES.items()}


@dataclass(frozen=True)
class GroupElement:
    tx: int = 0
    ty: int = 0
    sx: int = 1
    sy: int = 1

    @classmethod
    def of(cls, t: Point = (0, 0), flip: str = "id") -> "GroupElement":
        sx, sy = FLIP_SIGNS[flip]
        return cls(t[0], t[1], sx, sy)

    @property
    def t(self) -> Point:
        return (self.tx, self.ty)

    @property
    def flip(self) -> str:
        return FLIP_NAMES[(self.sx, self.sy)]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.tx + self.sx * other.tx,
            self.ty + self.sy * other.ty,
            self.sx * other.sx,
            self.sy * other.sy,
        )

    def inverse(self) -> "GroupElement":
        # (t, k)^-1 = (-k t, k) since k is an involution
        return GroupElement(-self.sx * self.tx, -self.sy * self.ty, self.sx, self.sy)

    def act(self, p: Point) -> Point:
        """Image of a position under ``s -> t + kappa s``."""
        return (self.tx + self.sx * p[0], self.ty + self.sy * p[1])

    def flip_part(self) -> "GroupElement":
        return GroupElement(0, 0, self.sx, self.sy)

    def translation_part(self) -> Point:
        """``fbar = f g``: the translation once the flip is cancelled."""
        return self.t

    def to_json(self) -> dict:
        return {"t": [self.tx, self.ty], "flip": self.flip}

    def __repr__(self) -> str:
        return "GroupElement((%d, %d), %s)" % (self.tx, self.ty, self.flip)


IDENTITY = GroupElement()

LETTER_VALUES: Dict[Letter, GroupElement] = {
    letter(1, "l"): GroupElement(1, 0),
    letter(1, "r"): GroupElement(0, 1),
    letter(2, "l"): GroupElement(),
    letter(2, "r"): GroupElement.of((0, 0), "th"),
    letter(3, "l"): GroupElement.of((0, 0), "tv"),
    letter(3, "r"): GroupElement(),
}


def letter_value(x: Letter) -> GroupElement:
    return LETTER_VALUES[x]


def group_mul(g1: GroupElement, g2: GroupElement) -> GroupElement:
    return g1 * g2


@dataclass(frozen=True)
class Box:
    xmin: int
    ymin: int
    xmax: int
    ymax: int

    def __post_init__(self):
        if self.xmin > self.xmax or self.ymin > self.ymax:
            raise ValueError("empty box %r" % (self,))

    def contains(self, other: "Box") -> bool:
        return (
            self.xmin <= other.xmin
            and self.ymin <= other.ymin
            and other.xmax <= self.xmax
            and other.ymax <= self.ymax
        )

    def contains_point(self, p: Point) -> bool:
        return self.xmin <= p[0] <= self.xmax and self.ymin <= p[1] <= self.ymax

    def max_side(self) -> int:
        return max(abs(self.xmin), abs(self.ymin), abs(self.xmax), abs(self.ymax))

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.xmin, self.ymin, self.xmax, self.ymax)


def bounding_box(points: Iterable[Point]) -> Box:
    xs, ys = zip(*points)
    return Box(min(xs), min(ys), max(xs), max(ys))


@dataclass(frozen=True)
class WordEvaluation:
    value: GroupElement
    positions: Tuple[Point, ...]
    box: Box


def prefix_values(w: Sequence[Letter], start: GroupElement = IDENTITY) -> List[GroupElement]:
    """``[f^(0), f^(1), ..., f^(len w)]`` starting from ``start``."""
    out = [start]
    g = start
    for x in w:
        g = g * LETTER_VALUES[x]
        out.append(g)
    return out


def prefix_positions(w: Sequence[Letter]) -> List[Point]:
    tx, ty, sx, sy = 0, 0, 1, 1
    out = [(0, 0)]
    for x in w:
        v = LETTER_VALUES[x]
        tx += sx * v.tx
        ty += sy * v.ty
        sx *= v.sx
        sy *= v.sy
        out.append((tx, ty))
    return out


def evaluate_word(w: Sequence[Letter], cap_bytes: Optional[int] = DEFAULT_CAP_BYTES) -> WordEvaluation:
    if cap_bytes is not None and len(w) * BYTES_PER_LETTER * 4 > cap_bytes:
        raise CapacityError("word of length %d exceeds the memory cap" % len(w))
    vals = prefix_values(w)
    positions = tuple(g.t for g in vals)
    return WordEvaluation(vals[-1], positions, bounding_box(positions))


# -- endpoint recurrences ---------------------------------------------------


@dataclass(frozen=True)
class EndpointState:
    k: int
    X: Tuple[int, int, int]
    Y: Tuple[int, int, int]
    x4: int
    y4: int

    def positive(self) -> bool:
        return all(v > 0 for v in self.X + self.Y)

    def to_json(self) -> dict:
        return {"k": self.k, "X": list(self.X), "Y": list(self.Y), "x4": self.x4, "y4": self.y4}


INITIAL_ENDPOINTS = EndpointState(0, (0, 0, 1), (0, 0, 1), 1, 1)


def _apply_matrix(m: int, n: int, v: Tuple[int, int, int]) -> Tuple[int, int, int]:
    # rows (0, m, m), (m, 0, 0), (n, 0, 0)
    return (m * (v[1] + v[2]), m * v[0], n * v[0])


def endpoint_recurrence(
    convergents: Sequence[Pair], depth: int, allow_odd_n: bool = False
) -> List[EndpointState]:
    """Endpoint vectors for levels ``0..depth``.

    The recurrence is only justified when every ``n_k`` is even;
    ``allow_odd_n`` runs it anyway for experiments.
    """
    if depth > len(convergents):
        raise ValueError("need %d convergents, got %d" % (depth, len(convergents)))
    states = [INITIAL_ENDPOINTS]
    for k in range(depth):
        m, n = convergents[k]
        if n % 2 and not allow_odd_n:
            raise OddNError("n_%d = %d is odd; the endpoint recurrence does not apply" % (k, n))
        s = states[-1]
        if (k + 1) % 2:
            d = _apply_matrix(m, n, s.Y)
            X = tuple(a + b for a, b in zip(s.X, d))
            x4 = max(s.x4, s.Y[1]) if n else s.x4
            states.append(EndpointState(k + 1, X, s.Y, x4, s.y4))
        else:
            d = _apply_matrix(m, n, s.X)
            Y = tuple(a + b for a, b in zip(s.Y, d))
            y4 = max(s.y4, s.X[1]) if n else s.y4
            states.append(EndpointState(k + 1, s.X, Y, s.x4, y4))
    return states


def boxes(state: EndpointState) -> Dict[str, Box]:
    """Enclosing boxes of the six words' prefix positions at this level."""
    x1, x2, x3 = state.X
    y1, y2, y3 = state.Y
    return {
        "L1": Box(0, 0, x1, x2),
        "L2": Box(0, 0, x1, x2),
        "L3": Box(0, 0, state.x4, x3),
        "R1": Box(0, 0, y2, y1),
        "R2": Box(0, 0, y3, state.y4),
        "R3": Box(0, 0, y2, y1),
    }


def endpoints_from_words(ws: WordSystem) -> Tuple[Tuple[int, int, int], Tuple[int, int, int]]:
    """``(X, Y)`` read off from the translation parts of the six words."""
    val = {name: evaluate_word(w).value for name, w in zip(WORD_NAMES, ws.words)}
    return (
        (val["L1"].tx, val["L1"].ty, val["L3"].ty),
        (val["R1"].ty, val["R1"].tx, val["R2"].tx),
    )


SHAPE_FLIPS = {"L1": "id", "L2": "th", "L3": "id", "R1": "id", "R2": "id", "R3": "tv"}


def shape_violations(ws: WordSystem) -> List[str]:
    """Deviations from the sign/flip pattern every level must satisfy."""
    val = {name: evaluate_word(w, cap_bytes=None).value for name, w in zip(WORD_NAMES, ws.words)}
    out = []
    for name, flip in SHAPE_FLIPS.items():
        if val[name].flip != flip:
            out.append("%s has flip %s, expected %s" % (name, val[name].flip, flip))
    if val["L1"].t != val["L2"].t or min(val["L1"].t) < 0:
        out.append("L1/L2 translations %r, %r" % (val["L1"].t, val["L2"].t))
    if val["R1"].t != val["R3"].t or min(val["R1"].t) < 0:
        out.append("R1/R3 translations %r, %r" % (val["R1"].t, val["R3"].t))
    if val["L3"].tx != 0 or val["L3"].ty < 0:
        out.append("L3 translation %r not in {0} x N" % (val["L3"].t,))
    if val["R2"].ty != 0 or val["R2"].tx < 0:
        out.append("R2 translation %r not in N x {0}" % (val["R2"].t,))
    return out


# -- self-avoidance -----------------------------------------------------------


@dataclass(frozen=True)
class Report:
    ok: bool
    checked: int = 0
    violation: Optional[dict] = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "violation": self.violation}


def _block_position_sets(ws_prev: WordSystem, names: List[str]) -> List[set]:
    words = dict(zip(WORD_NAMES, ws_prev.words))
    sets = []
    g = IDENTITY
    for name in names:
        w = words[name]
        vals = prefix_values(w)
        sets.append({g.act(v.t) for v in vals})
        g = g * vals[-1]
    return sets


def check_self_avoiding(ws_prev: WordSystem, m: int, n: int) -> Report:
    """Block-overlap rules for the words of the level after ``ws_prev``.

    Each new word is a concatenation of previous-level blocks; adjacent
    blocks must share exactly one position and non-adjacent blocks none.
    """
    checked = 0
    for name, names in zip(WORD_NAMES, block_decomposition(ws_prev, m, n)):
        sets = _block_position_sets(ws_prev, names)
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                common = sets[i] & sets[j]
                checked += 1
                expected = 1 if j == i + 1 else 0
                if len(common) != expected:
                    return Report(
                        False,
                        checked,
                        {
                            "level": ws_prev.level + 1,
                            "word": name,
                            "blocks": [i, j],
                            "block_names": [names[i], names[j]],
                            "common": sorted(common)[:8],
                        },
                    )
    return Report(True, checked)


def check_self_avoiding_level(convergents: Sequence[Pair], level: int, systems: Optional[List[WordSystem]] = None) -> Report:
    if level < 2:
        raise ValueError("self-avoidance is checked from level 2 on")
    if systems is None:
        systems = expand_levels(convergents, level - 1)
    m, n = convergents[level - 1]
    return check_self_avoiding(systems[level - 1], m, n)


_BOUNCE_HEADS = {letter(3, "r"): letter(3, "l"), letter(2, "l"): letter(2, "r")}
_BOUNCE_TAILS = {letter(3, "l"), letter(2, "r")}


def _allowed_run(w: Sequence[Letter], i: int, j: int) -> bool:
    """Whether the factor ``w[i:j]`` is a bouncing block (head optional at the word start)."""
    factor = w[i:j]
    if not factor:
        return True
    head = factor[0]
    if head in _BOUNCE_HEADS:
        tail = _BOUNCE_HEADS[head]
        return all(x == tail for x in factor[1:])
    if i == 0 and head in _BOUNCE_TAILS:
        return all(x == head for x in factor)
    return False


def check_local_patterns(w: Sequence[Letter]) -> Report:
    """Position coincidences must sit inside one bouncing block.

    Reports the first offending pair of prefix indices ``(i, j)``.
    """
    positions = prefix_positions(w)
    # moved[t] counts letters with a nonzero translation among w[:t]
    moved = [0]
    for x in w:
        v = LETTER_VALUES[x]
        moved.append(moved[-1] + (1 if v.tx or v.ty else 0))
    first_seen: Dict[Point, int] = {}
    violation = None
    for idx, p in enumerate(positions):
        if p not in first_seen:
            first_seen[p] = idx
            continue
        i = first_seen[p]
        if moved[idx] != moved[i] or not _allowed_run(w, i, idx):
            if violation is None or (i, idx) < violation:
                violation = (i, idx)
    if violation is None:
        return Report(True, len(positions))
    i, j = violation
    return Report(
        False,
        len(positions),
        {"indices": [i, j], "position": list(positions[i]), "factor": ",".join(x.token for x in w[i:j])[:200]},
    )


# -- certificate ----------------------------------------------------------------

CERTIFIED = "certified_to_depth"
REFUSED = "refused"
FAILED = "failed"


@dataclass
class Certificate:
    parameters: dict
    slope: dict
    depth: int
    pattern_level: int
    convergents: List[Pair]
    checks: dict = field(default_factory=dict)
    verdict: str = FAILED
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "parameters": self.parameters,
            "slope": self.slope,
            "depth": self.depth,
            "pattern_level": self.pattern_level,
            "convergents": [list(p) for p in self.convergents],
            "checks": self.checks,
            "verdict": self.verdict,
            "reason": self.reason,
        }


def growth_sequence(states: Sequence[EndpointState]) -> List[int]:
    """Largest box side among the six recurrence boxes, per level."""
    return [max(b.max_side() for b in boxes(s).values()) for s in states]


def growth_ok(growth: Sequence[int], start: int) -> bool:
    """Non-decreasing, and strictly larger two levels later, from ``start`` on."""
    tail = list(growth[start:])
    if any(b < a for a, b in zip(tail, tail[1:])):
        return False
    return all(tail[i + 2] > tail[i] for i in range(len(tail) - 2))


def certify_divergence(
    convergents: Sequence[Pair],
    depth: int,
    pattern_level: int,
    parameters: Optional[dict] = None,
    slope: Optional[dict] = None,
    cap_bytes: Optional[int] = DEFAULT_CAP_BYTES,
) -> Certificate:
    """Finite-depth divergence certificate for a convergent sequence."""
    convergents = [tuple(p) for p in convergents]
    cert = Certificate(parameters or {}, slope or {}, depth, pattern_level, list(convergents[:depth]))
    checks = cert.checks
    if depth < 1 or len(convergents) < depth:
        raise ValueError("need at least %d convergents, got %d" % (depth, len(convergents)))
    if not 2 <= pattern_level <= depth:
        raise ValueError("pattern_level must lie in [2, depth]")

    prefix = convergents[:depth]
    checks["admissible"] = check_admissible(prefix, strict_initial=False)
    checks["admissibility_warnings"] = admissibility_warnings(prefix)
    if not checks["admissible"]:
        cert.verdict = FAILED
        cert.reason = "the convergent prefix is not admissible"
        return cert

    odd = [k for k, (_, n) in enumerate(prefix) if n % 2]
    checks["evenness"] = not odd
    if odd:
        cert.verdict = REFUSED
        cert.reason = "n_%d = %d is odd" % (odd[0], convergents[odd[0]][1])
        return cert

    states = endpoint_recurrence(convergents, depth)
    checks["endpoints"] = [s.to_json() for s in states]
    k0 = next((s.k for s in states[:depth] if s.positive()), None)
    checks["positivity_level"] = k0
    if k0 is None:
        cert.verdict = FAILED
        cert.reason = "endpoint vectors never become positive before depth %d" % depth
        return cert

    growth = growth_sequence(states)
    checks["growth_sequence"] = growth
    checks["growth_ok"] = growth_ok(growth, k0)

    first = max(k0 + 1, 2)
    checks["box_disjointness_levels"] = [first, pattern_level]
    systems = expand_levels(convergents, pattern_level, cap_bytes)
    avoid: Dict[str, dict] = {}
    for level in range(first, pattern_level + 1):
        m, n = convergents[level - 1]
        rep = check_self_avoiding(systems[level - 1], m, n)
        avoid[str(level)] = rep.to_json()
        if not rep.ok:
            break
    checks["self_avoiding"] = avoid
    checks["self_avoiding_ok"] = all(r["ok"] for r in avoid.values())

    top = systems[pattern_level]
    patterns = {name: check_local_patterns(w).to_json() for name, w in zip(WORD_NAMES, top.words)}
    checks["local_patterns"] = patterns
    checks["local_pattern_ok"] = all(r["ok"] for r in patterns.values())

    failures = [
        name
        for name in ("growth_ok", "self_avoiding_ok", "local_pattern_ok")
        if not checks[name]
    ]
    if failures:
        cert.verdict = FAILED
        cert.reason = "checks failed: " + ", ".join(failures)
    else:
        cert.verdict = CERTIFIED
        cert.reason = "all checks passed to depth %d" % depth
    return cert
