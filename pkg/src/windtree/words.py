"""Level-k words of the restricted Ferenczi-Zamboni induction.

Level 0 is ``L = (3r, 2r, 1r)``, ``R = (2l, 1l, 3l)``.  The step producing
level ``k + 1`` from the convergent ``(m, n) = (m_k, n_k)`` rewrites the
``L`` words when ``k + 1`` is odd::

    L1 <- (R1 R2)^m L1,   L2 <- (R2 R1)^m L2,   L3 <- R3^n L3

and the ``R`` words when ``k + 1`` is even::

    R1 <- (L1 L3)^m R1,   R2 <- L2^n R2,        R3 <- (L3 L1)^m R3
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from .errors import CapacityError
from .iet import Letter, Word, letter, parse_word, word_to_string

Pair = Tuple[int, int]
Lengths = Tuple[int, int, int, int, int, int]

#: memory charged per materialized letter when checking capacity
BYTES_PER_LETTER = 8
DEFAULT_CAP_BYTES = 1 << 30

WORD_NAMES = ("L1", "L2", "L3", "R1", "R2", "R3")


@dataclass(frozen=True)
class WordSystem:
    level: int
    L: Tuple[Word, Word, Word]
    R: Tuple[Word, Word, Word]
    history: Tuple[Tuple[str, int, int], ...] = ()

    @property
    def words(self) -> Tuple[Word, ...]:
        """The six words in the order L1, L2, L3, R1, R2, R3."""
        return self.L + self.R

    def word(self, name: str) -> Word:
        return self.words[WORD_NAMES.index(name)]

    def lengths(self) -> Lengths:
        return tuple(len(w) for w in self.words)  # type: ignore[return-value]

    def to_json(self, stats_only: bool = False) -> dict:
        out = {
            "level": self.level,
            "lengths": dict(zip(WORD_NAMES, self.lengths())),
            "history": [list(h) for h in self.history],
        }
        if not stats_only:
            out["words"] = {name: word_to_string(w) for name, w in zip(WORD_NAMES, self.words)}
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "WordSystem":
        words = [parse_word(obj["words"][name]) for name in WORD_NAMES]
        return cls(
            obj["level"],
            tuple(words[:3]),
            tuple(words[3:]),
            tuple((h[0], int(h[1]), int(h[2])) for h in obj.get("history", [])),
        )


def initial_words() -> WordSystem:
    return WordSystem(
        0,
        ((letter(3, "r"),), (letter(2, "r"),), (letter(1, "r"),)),
        ((letter(2, "l"),), (letter(1, "l"),), (letter(3, "l"),)),
    )


def parity_of_step(level: int) -> str:
    """Parity of the step that produces ``level + 1``."""
    return "odd" if (level + 1) % 2 else "even"


def _check_pair(level: int, m: int, n: int, allow_zero: bool) -> None:
    if m < 0 or n < 0:
        raise ValueError("convergent entries must be non-negative")
    if (m, n) == (0, 0) and level != 0 and not allow_zero:
        raise ValueError("convergent (0, 0) is only allowed at the first step")


def apply_step(ws: WordSystem, m: int, n: int, allow_zero: bool = False) -> WordSystem:
    _check_pair(ws.level, m, n, allow_zero)
    L1, L2, L3 = ws.L
    R1, R2, R3 = ws.R
    parity = parity_of_step(ws.level)
    if parity == "odd":
        L = ((R1 + R2) * m + L1, (R2 + R1) * m + L2, R3 * n + L3)
        R = ws.R
    else:
        L = ws.L
        R = ((L1 + L3) * m + R1, L2 * n + R2, (L3 + L1) * m + R3)
    return WordSystem(ws.level + 1, L, R, ws.history + ((parity, m, n),))


def step_lengths(lengths: Lengths, level: int, m: int, n: int) -> Lengths:
    """Word lengths after the step producing ``level + 1``."""
    l1, l2, l3, r1, r2, r3 = lengths
    if parity_of_step(level) == "odd":
        return (m * (r1 + r2) + l1, m * (r1 + r2) + l2, n * r3 + l3, r1, r2, r3)
    return (l1, l2, l3, m * (l1 + l3) + r1, n * l2 + r2, m * (l1 + l3) + r3)


def length_recurrence(convergents: Sequence[Pair], level: int) -> List[Lengths]:
    """Lengths of the six words at levels ``0..level`` without materializing."""
    out: List[Lengths] = [(1, 1, 1, 1, 1, 1)]
    for k in range(level):
        m, n = convergents[k]
        out.append(step_lengths(out[-1], k, m, n))
    return out


def expand(
    convergents: Sequence[Pair],
    level: int,
    cap_bytes: Optional[int] = DEFAULT_CAP_BYTES,
) -> WordSystem:
    """Fold :func:`apply_step` over the first ``level`` convergents."""
    if level > len(convergents):
        raise ValueError("need %d convergents, got %d" % (level, len(convergents)))
    if cap_bytes is not None:
        lengths = length_recurrence(convergents, level)
        # words of one level share nothing in memory once materialized
        needed = max(sum(ls) for ls in lengths) * BYTES_PER_LETTER
        if needed > cap_bytes:
            raise CapacityError(
                "level %d needs about %d bytes, cap is %d" % (level, needed, cap_bytes)
            )
    ws = initial_words()
    for k in range(level):
        m, n = convergents[k]
        ws = apply_step(ws, m, n)
    return ws


def expand_levels(convergents: Sequence[Pair], level: int, cap_bytes: Optional[int] = DEFAULT_CAP_BYTES) -> List[WordSystem]:
    """All systems from level 0 to ``level``."""
    if cap_bytes is not None:
        needed = sum(sum(ls) for ls in length_recurrence(convergents, level)) * BYTES_PER_LETTER
        if needed > cap_bytes:
            raise CapacityError("levels 0..%d need about %d bytes" % (level, needed))
    systems = [initial_words()]
    for k in range(level):
        m, n = convergents[k]
        systems.append(apply_step(systems[-1], m, n))
    return systems


def block_decomposition(ws_prev: WordSystem, m: int, n: int) -> List[List[str]]:
    """Names of the level-(k-1) words composing each level-k word, in order."""
    if parity_of_step(ws_prev.level) == "odd":
        return [
            ["R1", "R2"] * m + ["L1"],
            ["R2", "R1"] * m + ["L2"],
            ["R3"] * n + ["L3"],
            ["R1"],
            ["R2"],
            ["R3"],
        ]
    return [
        ["L1"],
        ["L2"],
        ["L3"],
        ["L1", "L3"] * m + ["R1"],
        ["L2"] * n + ["R2"],
        ["L3", "L1"] * m + ["R3"],
    ]


def letter_counts(word: Iterable[Letter]) -> dict:
    counts: dict = {}
    for x in word:
        counts[x] = counts.get(x, 0) + 1
    return counts


def factors(words: Iterable[Sequence[Letter]], length: int) -> Set[Tuple[Letter, ...]]:
    """All factors of the given length occurring in any of the words."""
    out: Set[Tuple[Letter, ...]] = set()
    for w in words:
        w = tuple(w)
        for i in range(len(w) - length + 1):
            out.add(w[i : i + length])
    return out


def periodic(pair: Pair, count: int) -> List[Pair]:
    return [tuple(pair)] * count  # type: ignore[list-item]
