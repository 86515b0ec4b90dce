import pytest
from hypothesis import given, strategies as st

from oracles import SILVER_ENDPOINTS, SILVER_GROWTH
from windtree import cocycle
from windtree.cocycle import (
    CERTIFIED,
    FAILED,
    IDENTITY,
    LETTER_VALUES,
    REFUSED,
    Box,
    GroupElement,
    boxes,
    bounding_box,
    certify_divergence,
    check_local_patterns,
    check_self_avoiding,
    check_self_avoiding_level,
    endpoint_recurrence,
    endpoints_from_words,
    evaluate_word,
    growth_ok,
    growth_sequence,
    letter_value,
    prefix_positions,
    prefix_values,
    shape_violations,
)
from windtree.errors import CapacityError, OddNError
from windtree.iet import letter, parse_word
from windtree.words import WORD_NAMES, expand, expand_levels, periodic

SILVER = periodic((1, 2), 20)

elements = st.builds(
    GroupElement,
    st.integers(-9, 9),
    st.integers(-9, 9),
    st.sampled_from([1, -1]),
    st.sampled_from([1, -1]),
)
even_convergents = st.lists(
    st.tuples(st.integers(1, 3), st.sampled_from([0, 2, 4])), min_size=2, max_size=7
)


def test_letter_table():
    assert letter_value(letter(1, "l")) == GroupElement.of((1, 0))
    assert letter_value(letter(1, "r")) == GroupElement.of((0, 1))
    assert letter_value(letter(2, "r")).flip == "th"
    assert letter_value(letter(3, "l")).flip == "tv"
    assert letter_value(letter(2, "l")) == letter_value(letter(3, "r")) == IDENTITY


@given(elements, elements, elements)
def test_group_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * IDENTITY == IDENTITY * f == f
    assert f * f.inverse() == IDENTITY == f.inverse() * f


@given(elements, elements, st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_action_is_compatible(f, g, p):
    assert (f * g).act(p) == f.act(g.act(p))


def test_reflections_commute_and_are_involutions():
    tv, th = GroupElement.of(flip="tv"), GroupElement.of(flip="th")
    assert tv * th == th * tv == GroupElement.of(flip="tvth")
    assert tv * tv == th * th == IDENTITY


@given(st.lists(st.sampled_from(sorted(LETTER_VALUES)), max_size=40))
def test_prefix_positions_match_group_products(w):
    assert prefix_positions(w) == [g.t for g in prefix_values(w)]
    ev = evaluate_word(w)
    assert ev.box.contains(bounding_box(ev.positions))


def test_silver_endpoint_states():
    states = endpoint_recurrence(SILVER, len(SILVER_ENDPOINTS) - 1)
    assert [(s.X, s.Y, s.x4, s.y4) for s in states] == SILVER_ENDPOINTS
    assert growth_sequence(endpoint_recurrence(SILVER, 12)) == SILVER_GROWTH


def test_odd_n_is_refused_by_the_recurrence():
    with pytest.raises(OddNError) as err:
        endpoint_recurrence([(1, 1)], 1)
    assert err.value.code == "ODD_N"
    assert len(endpoint_recurrence([(1, 1)], 1, allow_odd_n=True)) == 2


def test_endpoints_agree_with_words_on_silver_levels():
    for ws, state in zip(expand_levels(SILVER, 10), endpoint_recurrence(SILVER, 10)):
        assert endpoints_from_words(ws) == (state.X, state.Y)
        assert shape_violations(ws) == []


@given(even_convergents)
def test_boxes_enclose_positions_for_even_sequences(conv):
    systems = expand_levels(conv, len(conv))
    for ws, state in zip(systems, endpoint_recurrence(conv, len(conv))):
        assert endpoints_from_words(ws) == (state.X, state.Y)
        assert shape_violations(ws) == []
        bx = boxes(state)
        for name, w in zip(WORD_NAMES, ws.words):
            assert bx[name].contains(bounding_box(prefix_positions(w)))


def test_mutated_letter_value_is_caught(monkeypatch):
    monkeypatch.setitem(LETTER_VALUES, letter(2, "r"), IDENTITY)
    found = [shape_violations(ws) for ws in expand_levels(SILVER, 4)]
    assert any(found)


def test_mutated_recurrence_is_caught(monkeypatch):
    monkeypatch.setattr(cocycle, "_apply_matrix", lambda m, n, v: (m * v[1], m * v[0], n * v[0]))
    states = endpoint_recurrence(SILVER, 6)
    systems = expand_levels(SILVER, 6)
    assert any(endpoints_from_words(ws) != (s.X, s.Y) for ws, s in zip(systems, states))


def test_box_helpers():
    b = Box(0, 0, 3, 2)
    assert b.contains(Box(1, 0, 2, 2)) and not b.contains(Box(-1, 0, 2, 2))
    assert b.contains_point((3, 2)) and b.max_side() == 3
    with pytest.raises(ValueError):
        Box(1, 0, 0, 0)


def test_capacity_for_word_evaluation():
    with pytest.raises(CapacityError):
        evaluate_word(expand(SILVER, 6).word("L1"), cap_bytes=64)


@pytest.mark.parametrize("level", range(2, 11))
def test_silver_self_avoidance(level):
    assert check_self_avoiding_level(SILVER, level).ok


def test_silver_local_patterns_on_level_eight():
    for w in expand(SILVER, 8).words:
        assert check_local_patterns(w).ok


def test_local_pattern_examples():
    assert check_local_patterns(parse_word("3r,3l,3l,3l,1l")).ok
    assert check_local_patterns(parse_word("2l,2r,2r,1r")).ok
    assert check_local_patterns(parse_word("3l,3l,1r")).ok
    rep = check_local_patterns(parse_word("1l,3l,1l,3l"))
    assert not rep.ok and rep.violation["indices"] == [0, 3]
    assert not check_local_patterns(parse_word("1l,3r,3l,1l,1r,3r")).ok


def test_odd_system_is_not_self_avoiding():
    conv = periodic((1, 1), 8)
    systems = expand_levels(conv, 8)
    results = [check_self_avoiding(systems[k - 1], *conv[k - 1]).ok for k in range(2, 9)]
    assert results == [True, True, True, False, False, False, False]
    assert not any(check_local_patterns(w).ok for w in systems[8].words)


def test_growth_ok():
    assert growth_ok(SILVER_GROWTH, 3)
    assert not growth_ok([1, 2, 2, 2], 0)
    assert not growth_ok([1, 3, 2, 4], 0)


def test_certificate_for_silver():
    cert = certify_divergence(SILVER, 16, 8)
    assert cert.verdict == CERTIFIED
    assert cert.checks["positivity_level"] == 3
    assert cert.checks["growth_sequence"][:13] == SILVER_GROWTH
    assert cert.checks["self_avoiding_ok"] and cert.checks["local_pattern_ok"]
    doc = cert.to_json()
    assert doc["verdict"] == CERTIFIED and doc["convergents"][0] == [1, 2]


def test_certificate_refuses_odd_n():
    cert = certify_divergence(periodic((1, 1), 8), 8, 4)
    assert cert.verdict == REFUSED and cert.checks["evenness"] is False


def test_certificate_fails_without_positivity():
    cert = certify_divergence([(1, 0), (0, 2)] * 4, 8, 4)
    assert cert.checks["admissible"]
    assert cert.verdict == FAILED and "positive" in cert.reason


def test_certificate_rejects_inadmissible_prefix():
    cert = certify_divergence([(1, 2), (0, 0), (1, 2)], 3, 2)
    assert cert.verdict == FAILED and not cert.checks["admissible"]


def test_certificate_records_prefix_warnings():
    cert = certify_divergence(periodic((1, 0), 8), 8, 4)
    assert "no nonzero n at even k in the prefix" in cert.checks["admissibility_warnings"]


def test_certificate_argument_checks():
    with pytest.raises(ValueError):
        certify_divergence(SILVER, 30, 8)
    with pytest.raises(ValueError):
        certify_divergence(SILVER, 8, 9)
