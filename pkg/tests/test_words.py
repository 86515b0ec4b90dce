import pytest
from hypothesis import given, strategies as st

from oracles import SILVER_LENGTHS, SILVER_LEVEL1_L, SILVER_LEVEL2_R2_LENGTH
from windtree.errors import CapacityError
from windtree.iet import letter, parse_word, word_to_string
from windtree.words import (
    WORD_NAMES,
    WordSystem,
    apply_step,
    block_decomposition,
    expand,
    expand_levels,
    factors,
    initial_words,
    length_recurrence,
    letter_counts,
    parity_of_step,
    periodic,
)

SILVER = periodic((1, 2), 40)

convergent_lists = st.lists(
    st.tuples(st.integers(1, 3), st.integers(0, 3)), min_size=1, max_size=7
)


def test_initial_words():
    ws = initial_words()
    assert [word_to_string(w) for w in ws.words] == ["3r", "2r", "1r", "2l", "1l", "3l"]


def test_first_steps_of_the_silver_system():
    ws1 = expand(SILVER, 1)
    assert tuple(word_to_string(w) for w in ws1.L) == SILVER_LEVEL1_L
    assert ws1.R == initial_words().R
    assert len(expand(SILVER, 2).word("R2")) == SILVER_LEVEL2_R2_LENGTH


@pytest.mark.parametrize("level", sorted(SILVER_LENGTHS))
def test_silver_lengths(level):
    lengths = length_recurrence(SILVER, level)[-1]
    assert (lengths[0], lengths[3]) == SILVER_LENGTHS[level]
    assert len(set(lengths[:3])) == 1 and len(set(lengths[3:])) == 1


def test_materialized_lengths_match_recurrence():
    for ws, lengths in zip(expand_levels(SILVER, 10), length_recurrence(SILVER, 10)):
        assert ws.lengths() == lengths


def test_parity_alternates():
    assert parity_of_step(0) == "odd" and parity_of_step(1) == "even"
    ws = expand(SILVER, 4)
    assert [h[0] for h in ws.history] == ["odd", "even", "odd", "even"]


def test_zero_pair_only_first():
    ws = apply_step(initial_words(), 0, 0)
    assert ws.words == (initial_words().L + initial_words().R)
    with pytest.raises(ValueError):
        apply_step(ws, 0, 0)
    with pytest.raises(ValueError):
        apply_step(ws, -1, 2)


def test_capacity_cap():
    with pytest.raises(CapacityError) as err:
        expand(SILVER, 40)
    assert err.value.code == "CAPACITY"
    with pytest.raises(CapacityError):
        expand(SILVER, 8, cap_bytes=1000)


def test_json_round_trip():
    ws = expand(SILVER, 3)
    assert WordSystem.from_json(ws.to_json()) == ws
    stats = ws.to_json(stats_only=True)
    assert "words" not in stats and stats["lengths"]["L1"] == 17


def test_factors():
    w = parse_word("1l,2l,1l,2l")
    assert factors([w], 2) == {(letter(1, "l"), letter(2, "l")), (letter(2, "l"), letter(1, "l"))}


@given(convergent_lists)
def test_length_recurrence_matches_materialization(conv):
    systems = expand_levels(conv, len(conv))
    assert [ws.lengths() for ws in systems] == length_recurrence(conv, len(conv))


@given(convergent_lists)
def test_block_decomposition_concatenates(conv):
    systems = expand_levels(conv, len(conv))
    for k in range(len(conv)):
        blocks = block_decomposition(systems[k], *conv[k])
        for name, names in zip(WORD_NAMES, blocks):
            glued = sum((systems[k].word(b) for b in names), ())
            assert glued == systems[k + 1].word(name)


@given(convergent_lists)
def test_untouched_side_is_kept(conv):
    systems = expand_levels(conv, len(conv))
    for k in range(len(conv)):
        prev, nxt = systems[k], systems[k + 1]
        if parity_of_step(k) == "odd":
            assert nxt.R == prev.R
        else:
            assert nxt.L == prev.L


@given(convergent_lists)
def test_prefix_coherence(conv):
    # L_i^(k) is a suffix of the level-(k+1) L_i, likewise for R
    systems = expand_levels(conv, len(conv))
    for prev, nxt in zip(systems, systems[1:]):
        for a, b in zip(prev.words, nxt.words):
            assert b[len(b) - len(a):] == a


@given(convergent_lists)
def test_letter_balance(conv):
    # every level-k word is a product of level-0 words, so it ends with its level-0 letter
    ws = expand(conv, len(conv))
    for w, first in zip(ws.words, initial_words().words):
        assert w[-1] == first[0]
        counts = letter_counts(w)
        assert sum(counts.values()) == len(w)
        assert set(counts) <= {letter(i, s) for i in (1, 2, 3) for s in "lr"}


@given(convergent_lists)
def test_letter_counts_are_additive_over_blocks(conv):
    systems = expand_levels(conv, len(conv))
    for k in range(len(conv)):
        blocks = block_decomposition(systems[k], *conv[k])
        for name, names in zip(WORD_NAMES, blocks):
            total = {}
            for b in names:
                for x, c in letter_counts(systems[k].word(b)).items():
                    total[x] = total.get(x, 0) + c
            assert total == letter_counts(systems[k + 1].word(name))
