"""Event-driven billiard in the wind-tree table ``T(a, b)``.

Scatterers are the rectangles ``[i - a/2, i + a/2] x [j - b/2, j + b/2]``.
Their complement is cut by the segments joining scatterer corners into

* junctions   ``J(i, j) = [i + a/2, i + 1 - a/2] x [j + b/2, j + 1 - b/2]``,
* v-corridors ``V(i, j) = [i - a/2, i + a/2] x [j + b/2, j + 1 - b/2]``,
* h-corridors ``H(i, j) = [i + a/2, i + 1 - a/2] x [j - b/2, j + b/2]``.

A trajectory moves with velocity ``(sx, sy * s)`` where ``s >= 0`` is the base
slope and ``kappa = (sx, sy)`` records the reflections.  Every event emits a
letter naming the rectangle entered (1 junction, 2 v-corridor, 3 h-corridor)
and whether it was entered through a vertical side (``l``) or a horizontal
side (``r``); a wall hit re-enters the same corridor and flips ``kappa``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CornerHitError, LabelingMismatchError, ParamRangeError
from .exact import Quadratic, Scalar, as_scalar, compare
from .iet import Letter, letter

JUNCTION = "junction"
VCORRIDOR = "v-corridor"
HCORRIDOR = "h-corridor"
REGION_INDEX = {JUNCTION: 1, VCORRIDOR: 2, HCORRIDOR: 3}

CROSSING = "crossing"
REFLECTION = "reflection"

Region = Tuple[str, int, int]
Kappa = Tuple[int, int]

KAPPA_NAMES = {(1, 1): "id", (-1, 1): "tv", (1, -1): "th", (-1, -1): "tvth"}


@dataclass(frozen=True)
class TableParams:
    a: Quadratic
    b: Quadratic

    def __post_init__(self):
        a, b = as_scalar(self.a), as_scalar(self.b)
        if not isinstance(a, Quadratic) or not isinstance(b, Quadratic):
            raise ParamRangeError("table parameters must be exact")
        for name, v in (("a", a), ("b", b)):
            if v.sign() <= 0 or v >= 1:
                raise ParamRangeError("%s must lie in (0, 1), got %s" % (name, v))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "_ha", a / 2)
        object.__setattr__(self, "_hb", b / 2)

    def region_bounds(self, region: Region) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
        kind, i, j = region
        ha, hb = self._ha, self._hb  # type: ignore[attr-defined]
        if kind == JUNCTION:
            return i + ha, i + 1 - ha, j + hb, j + 1 - hb
        if kind == VCORRIDOR:
            return i - ha, i + ha, j + hb, j + 1 - hb
        return i + ha, i + 1 - ha, j - hb, j + hb

    def _band(self, v: Scalar, half: Scalar) -> Tuple[str, int]:
        base = math.floor(v)
        frac = v - base
        lo, hi = compare(frac, half), compare(frac, 1 - half)
        if lo == 0 or hi == 0:
            raise ValueError("point lies on a quadrangulation edge")
        if lo > 0 and hi < 0:
            return "gap", base
        return "column", base if lo < 0 else base + 1

    def locate(self, p: Tuple[Scalar, Scalar]) -> Region:
        """The open rectangle containing ``p``; raises for scatterer or edge points."""
        bx, i = self._band(as_scalar(p[0]), self._ha)  # type: ignore[attr-defined]
        by, j = self._band(as_scalar(p[1]), self._hb)  # type: ignore[attr-defined]
        if bx == "gap" and by == "gap":
            return (JUNCTION, i, j)
        if bx == "column" and by == "gap":
            return (VCORRIDOR, i, j)
        if bx == "gap" and by == "column":
            return (HCORRIDOR, i, j)
        raise ValueError("point %r lies inside scatterer (%d, %d)" % (p, i, j))

    def in_scatterer_band(self, y: Scalar) -> bool:
        """Whether a horizontal line at height ``y`` meets scatterers."""
        j = math.floor(as_scalar(y) + Fraction(1, 2))
        return compare(abs(as_scalar(y) - j), self._hb) <= 0  # type: ignore[attr-defined]


@dataclass(frozen=True)
class BilliardState:
    x: Scalar
    y: Scalar
    kappa: Kappa
    region: Region
    u: Scalar = Quadratic(0)  # horizontal distance travelled, in base direction


@dataclass(frozen=True)
class CrossingEvent:
    n: int
    kind: str
    region: Region
    side: str
    letter: Letter
    kappa: Kappa
    x: Scalar
    y: Scalar
    u: Scalar


def start_state(tp: TableParams, start, kappa: Kappa = (1, 1)) -> BilliardState:
    x, y = as_scalar(start[0]), as_scalar(start[1])
    return BilliardState(x, y, tuple(kappa), tp.locate((x, y)))


def next_event(tp: TableParams, st: BilliardState, slope, n: int = 0) -> Tuple[CrossingEvent, BilliardState]:
    """Advance to the next side of the current rectangle."""
    s = as_scalar(slope)
    sx, sy = st.kappa
    kind, i, j = st.region
    x0, x1, y0, y1 = tp.region_bounds(st.region)
    dx = x1 - st.x if sx > 0 else st.x - x0
    if s.sign() == 0:
        vertical = True
    else:
        dy = y1 - st.y if sy > 0 else st.y - y0
        c = compare(s * dx, dy)
        if c == 0:
            corner = (st.x + sx * dx, st.y + sy * dy)
            raise CornerHitError("trajectory hits the corner %r" % (corner,), position=corner)
        vertical = c < 0
    if vertical:
        nx, ny, du = st.x + sx * dx, st.y + sy * s * dx, dx
    else:
        du = dy / s
        nx, ny = st.x + sx * du, st.y + sy * dy

    kappa = st.kappa
    if kind == JUNCTION:
        if vertical:
            region, lab = (VCORRIDOR, i + 1 if sx > 0 else i, j), letter(2, "l")
        else:
            region, lab = (HCORRIDOR, i, j + 1 if sy > 0 else j), letter(3, "r")
        ev_kind = CROSSING
    elif kind == VCORRIDOR:
        if vertical:
            region, lab, ev_kind = (JUNCTION, i if sx > 0 else i - 1, j), letter(1, "l"), CROSSING
        else:
            region, lab, ev_kind = st.region, letter(2, "r"), REFLECTION
            kappa = (sx, -sy)
    else:
        if vertical:
            region, lab, ev_kind = st.region, letter(3, "l"), REFLECTION
            kappa = (-sx, sy)
        else:
            region, lab, ev_kind = (JUNCTION, i, j if sy > 0 else j - 1), letter(1, "r"), CROSSING
    u = st.u + du
    event = CrossingEvent(n, ev_kind, region, "l" if vertical else "r", lab, kappa, nx, ny, u)
    return event, BilliardState(nx, ny, kappa, region, u)


@dataclass
class BilliardTrajectory:
    table: TableParams
    start: Tuple[Scalar, Scalar]
    slope: Scalar
    start_region: Region
    start_kappa: Kappa = (1, 1)
    events: List[CrossingEvent] = field(default_factory=list)
    terminated: Optional[str] = None
    free_flight: bool = False

    @property
    def letters(self) -> List[Letter]:
        return [e.letter for e in self.events]

    def displacement_squared(self, k: int) -> Scalar:
        """Squared distance from the start after event ``k`` (0 for ``k < 0``)."""
        if k < 0:
            return Quadratic(0)
        e = self.events[k]
        dx, dy = e.x - self.start[0], e.y - self.start[1]
        return dx * dx + dy * dy

    def max_displacement(self) -> float:
        best = 0.0
        for k in range(len(self.events)):
            best = max(best, math.sqrt(float(self.displacement_squared(k))))
        return best


def trace(tp: TableParams, start, slope, max_crossings: int, kappa: Kappa = (1, 1)) -> BilliardTrajectory:
    """Follow a trajectory for ``max_crossings`` events (corner hits truncate)."""
    s = as_scalar(slope)
    if s.sign() < 0:
        raise ParamRangeError("the base slope must be non-negative; use kappa for other directions")
    st = start_state(tp, start, kappa)
    traj = BilliardTrajectory(tp, (st.x, st.y), s, st.region, tuple(kappa))
    if s.sign() == 0 and not tp.in_scatterer_band(st.y):
        traj.free_flight = True
    for n in range(max_crossings):
        try:
            ev, st = next_event(tp, st, s, n)
        except CornerHitError as exc:
            traj.terminated = exc.code
            break
        traj.events.append(ev)
    return traj


# -- comparison with the cocycle -------------------------------------------------


def _sqrt_bounds(lo: Fraction, hi: Fraction, bits: int) -> Tuple[Fraction, Fraction]:
    scale = 1 << bits
    lo_n = max(0, math.floor(lo * scale * scale))
    hi_n = math.ceil(hi * scale * scale)
    r_lo = math.isqrt(lo_n)
    r_hi = math.isqrt(hi_n)
    if r_hi * r_hi < hi_n:
        r_hi += 1
    return Fraction(r_lo, scale), Fraction(r_hi, scale)


def _enclose(q: Scalar, bits: int) -> Tuple[Fraction, Fraction]:
    if isinstance(q, Quadratic):
        return q.enclosure(bits)
    return q.at(bits)


@dataclass
class CocycleComparison:
    checked: int
    max_deviation: float
    max_deviation_upper: Fraction
    bound_ok: bool
    worst_index: Optional[int]
    enclosure_slack: Fraction
    language_checked: bool = False
    language_level: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "max_deviation": self.max_deviation,
            "max_deviation_upper": str(self.max_deviation_upper),
            "bound": "sqrt(2)",
            "bound_ok": self.bound_ok,
            "worst_index": self.worst_index,
            "enclosure_slack": float(self.enclosure_slack),
            "language_checked": self.language_checked,
            "language_level": self.language_level,
        }


def deviations(traj: BilliardTrajectory, letters: Optional[Sequence[Letter]] = None, bits: int = 40):
    """Enclosures of ``| |p_n - p_0| - |f^(n)| |`` at every event.

    Yields ``(n, lo, hi)``; ``f^(n)`` includes the letter of event ``n``.
    """
    from .cocycle import LETTER_VALUES

    letters = traj.letters if letters is None else list(letters)
    tx, ty, sx, sy = 0, 0, 1, 1
    for n, x in enumerate(letters):
        v = LETTER_VALUES[x]
        tx += sx * v.tx
        ty += sy * v.ty
        sx *= v.sx
        sy *= v.sy
        plo, phi = _enclose(traj.displacement_squared(n), bits + 8)
        dlo, dhi = _sqrt_bounds(plo, phi, bits)
        flo, fhi = _sqrt_bounds(Fraction(tx * tx + ty * ty), Fraction(tx * tx + ty * ty), bits)
        a, b = dlo - fhi, dhi - flo
        lo = 0 if a <= 0 <= b else min(abs(a), abs(b))
        yield n, lo, max(abs(a), abs(b))


SQRT2_LOWER = Fraction(math.isqrt(2 << 120), 1 << 60)


def compare_with_cocycle(
    traj: BilliardTrajectory,
    letters: Optional[Sequence[Letter]] = None,
    convergents: Optional[Sequence[Tuple[int, int]]] = None,
    window: int = 8,
    language_level: Optional[int] = None,
    bits: int = 40,
) -> CocycleComparison:
    """Check the square-root-of-two bound between billiard and cocycle.

    When ``convergents`` is given, every factor of length ``window`` of the
    emitted letters must also be a factor of the level-``language_level``
    words of that convergent sequence; otherwise the crossing dictionary is
    wrong and :class:`LabelingMismatchError` is raised.
    """
    letters = traj.letters if letters is None else list(letters)
    level = None
    if convergents is not None and len(letters) >= window:
        level = check_language(letters, convergents, window, language_level)
    worst, worst_n = Fraction(0), None
    slack = Fraction(0)
    ok = True
    checked = 0
    for n, lo, hi in deviations(traj, letters, bits):
        checked += 1
        slack = max(slack, hi - lo)
        if hi > worst:
            worst, worst_n = hi, n
        if hi > SQRT2_LOWER:
            ok = False
    return CocycleComparison(
        checked,
        float(worst),
        worst,
        ok,
        worst_n,
        slack,
        language_checked=level is not None,
        language_level=level,
    )


def language_level_for(convergents: Sequence[Tuple[int, int]], budget: int = 400_000) -> int:
    from .words import length_recurrence

    lengths = length_recurrence(convergents, len(convergents))
    level = 0
    for k, ls in enumerate(lengths):
        if sum(ls) > budget:
            break
        level = k
    return level


def check_language(
    letters: Sequence[Letter],
    convergents: Sequence[Tuple[int, int]],
    window: int = 8,
    level: Optional[int] = None,
) -> int:
    """Raise :class:`LabelingMismatchError` unless all windows are in the language."""
    from .words import expand, factors

    if level is None:
        level = language_level_for(convergents)
    ws = expand(convergents, level)
    allowed = factors(ws.words, window)
    for i in range(len(letters) - window + 1):
        w = tuple(letters[i : i + window])
        if w not in allowed:
            raise LabelingMismatchError(
                "factor %s at position %d is not in the level-%d language"
                % (",".join(x.token for x in w), i, level)
            )
    return level


# -- interval exchange view ---------------------------------------------------------


def iet_point(tp: TableParams, event: CrossingEvent, slope) -> Tuple[int, Scalar]:
    """The exchange-interval point ``(i, tau)`` of an event.

    ``tau = s dx - dy`` where ``(dx, dy)`` is the position relative to the
    incoming corner of the rectangle entered, after folding by ``kappa``.
    """
    s = as_scalar(slope)
    x0, x1, y0, y1 = tp.region_bounds(event.region)
    sx, sy = event.kappa
    dx = event.x - x0 if sx > 0 else x1 - event.x
    dy = event.y - y0 if sy > 0 else y1 - event.y
    return REGION_INDEX[event.region[0]], s * dx - dy


# -- CSV ------------------------------------------------------------------------

CSV_COLUMNS = ("n", "t", "x", "y", "event_type", "cell_i", "cell_j", "letter", "kappa")


def trajectory_rows(traj: BilliardTrajectory) -> List[Dict[str, str]]:
    speed = math.sqrt(1 + float(traj.slope) ** 2)
    rows = [
        {
            "n": "-1",
            "t": "0",
            "x": "%.12f" % float(traj.start[0]),
            "y": "%.12f" % float(traj.start[1]),
            "event_type": "start",
            "cell_i": str(traj.start_region[1]),
            "cell_j": str(traj.start_region[2]),
            "letter": "",
            "kappa": KAPPA_NAMES[traj.start_kappa],
        }
    ]
    for e in traj.events:
        rows.append(
            {
                "n": str(e.n),
                "t": "%.12f" % (float(e.u) * speed),
                "x": "%.12f" % float(e.x),
                "y": "%.12f" % float(e.y),
                "event_type": e.kind,
                "cell_i": str(e.region[1]),
                "cell_j": str(e.region[2]),
                "letter": e.letter.token,
                "kappa": KAPPA_NAMES[e.kappa],
            }
        )
    return rows


def reverse_state(event: CrossingEvent, region: Region) -> BilliardState:
    """State at ``event`` moving back along the segment that reached it.

    ``region`` is the rectangle the trajectory occupied before the event.
    """
    sx, sy = event.kappa
    if event.kind == REFLECTION:
        # undo the wall flip to recover the incoming direction
        if event.letter == letter(2, "r"):
            sy = -sy
        else:
            sx = -sx
    return BilliardState(event.x, event.y, (-sx, -sy), region, event.u)
