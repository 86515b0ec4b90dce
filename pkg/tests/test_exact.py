import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import nonzero_quadratics, positive_fractions, quadratics, small_fractions
from windtree.errors import MixedFieldError, ScalarDivisionByZero, UndecidedError
from windtree.exact import (
    IntervalScalar,
    Ordering,
    Quadratic,
    compare,
    floor_ratio,
    from_json,
    parse_scalar,
    promote,
    refine,
    sign,
    squarefree_decomposition,
    to_json,
)

R2 = Quadratic.sqrt(2)


def test_squarefree_parts():
    assert squarefree_decomposition(72) == (6, 2)
    assert squarefree_decomposition(1) == (1, 1)
    assert Quadratic.sqrt(8) == 2 * R2
    assert Quadratic.sqrt(4) == 2
    assert Quadratic.sqrt(Fraction(1, 2)) == R2 / 2


def test_silver_ratio_identities():
    assert R2 * R2 == 2
    assert (1 + R2) * (R2 - 1) == 1
    assert (1 + R2).norm() == -1
    assert (1 + R2).conjugate() == 1 - R2
    assert math.floor(1 + R2) == 2
    assert math.ceil(R2) == 2
    assert (R2 - 1).inverse() == 1 + R2


def test_rational_values_normalize_to_d_equal_one():
    q = Quadratic(3, 0, 5)
    assert q.D == 1 and q.is_rational
    assert hash(q) == hash(Quadratic(3))


def test_mixed_fields_raise_and_promote():
    with pytest.raises(MixedFieldError) as err:
        R2 + Quadratic.sqrt(3)
    assert err.value.code == "MIXED_FIELD"
    s = promote(R2) + promote(Quadratic.sqrt(3))
    lo, hi = s.at(64)
    assert hi - lo <= Fraction(1, 1 << 60)
    assert abs(float(lo) - (math.sqrt(2) + math.sqrt(3))) < 1e-15


def test_division_by_zero():
    with pytest.raises(ScalarDivisionByZero):
        R2 / (R2 - R2)
    with pytest.raises(ZeroDivisionError):
        Quadratic(1) / 0


def test_undecided_equality_of_intervals():
    one_ish = IntervalScalar(lambda bits: (1 - Fraction(1, 1 << bits), 1 + Fraction(1, 1 << bits)))
    with pytest.raises(UndecidedError) as err:
        compare(one_ish, 1, budget=3)
    lo, hi = err.value.enclosure
    assert lo < 0 < hi and hi - lo <= Fraction(2, 1 << 96)


def test_interval_with_witness_decides_equality():
    assert compare(promote(R2), R2) == Ordering.EQUAL
    assert compare(promote(R2) * promote(R2), 2) == Ordering.EQUAL


def test_floor_ratio_examples():
    assert floor_ratio(10 * R2, 1) == 14
    assert floor_ratio(promote(R2) * 10, 3) == 4
    assert floor_ratio(Quadratic(7), Quadratic(7, 0)) == 1


def test_refine_width():
    r = refine(promote(R2), Fraction(1, 10**12))
    assert r.width <= Fraction(1, 10**12)
    assert r.lo <= R2 <= r.hi


@pytest.mark.parametrize(
    "text, value",
    [
        ("1/2", Quadratic(Fraction(1, 2))),
        ("0.25", Quadratic(Fraction(1, 4))),
        ("sqrt(2)-1", R2 - 1),
        ("(1+sqrt(5))/2", (1 + Quadratic.sqrt(5)) / 2),
        ("3/4-2*sqrt(8)", Fraction(3, 4) - 4 * R2),
        ("2/3*sqrt(2)", R2 * Fraction(2, 3)),
    ],
)
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


def test_json_round_trip_and_decimal_field():
    obj = to_json(R2 / 3)
    assert obj["kind"] == "quadratic" and obj["decimal"].startswith("0.4714")
    assert from_json(obj) == R2 / 3
    assert from_json(to_json(Quadratic(Fraction(-5, 7)))) == Fraction(-5, 7)


@given(quadratics(), quadratics(), quadratics())
def test_field_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == 0


@given(nonzero_quadratics())
def test_inverse(x):
    assert x * x.inverse() == 1
    assert (x / x) == 1


@given(quadratics())
def test_norm_is_multiplicative_with_conjugate(x):
    assert x * x.conjugate() == x.norm()


@given(quadratics(), quadratics())
def test_total_order_matches_float_when_separated(x, y):
    c = compare(x, y)
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9:
        assert (c > 0) == (fx > fy)
    assert compare(y, x) == -c
    assert (c == 0) == (x == y)


@given(quadratics(), quadratics(), quadratics())
def test_order_is_transitive(x, y, z):
    if compare(x, y) <= 0 and compare(y, z) <= 0:
        assert compare(x, z) <= 0


@given(quadratics(), positive_fractions)
def test_floor_ratio_brackets(x, d):
    x = abs(x)
    q = floor_ratio(x, d)
    assert q * d <= x < (q + 1) * d


@given(quadratics(), positive_fractions)
def test_floor_ratio_agrees_between_exact_and_interval(x, d):
    x = abs(x)
    assert floor_ratio(promote(x), d) == floor_ratio(x, d)


@given(quadratics(), st.integers(min_value=8, max_value=200))
def test_enclosures_contain_value(x, bits):
    lo, hi = x.enclosure(bits)
    assert lo <= hi
    assert compare(lo, x) <= 0 <= compare(hi, x)
    assert hi - lo <= abs(x.y) / (1 << bits)


@given(quadratics(), st.integers(min_value=10, max_value=60))
def test_refine_contains_value(x, k):
    r = refine(promote(x), Fraction(1, 1 << k))
    assert r.width <= Fraction(1, 1 << k)
    assert compare(r.lo, x) <= 0 <= compare(r.hi, x)


@given(small_fractions, small_fractions)
def test_interval_arithmetic_encloses_exact(x, y):
    a, b = promote(Quadratic(x, 1, 2)), promote(Quadratic(y, 1, 3))
    lo, hi = (a * b + a).at(80)
    exact = (x + math.sqrt(2)) * (y + math.sqrt(3)) + x + math.sqrt(2)
    assert float(lo) - 1e-9 <= exact <= float(hi) + 1e-9


@given(quadratics())
def test_sign_consistent(x):
    assert sign(x) == x.sign() == (0 if x == 0 else (1 if float(x) > 0 else -1)) or abs(float(x)) < 1e-12
