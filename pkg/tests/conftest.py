from fractions import Fraction

from hypothesis import settings, strategies as st

from windtree.exact import Quadratic

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=50)
positive_fractions = st.fractions(min_value=Fraction(1, 50), max_value=20, max_denominator=50)
unit_fractions = st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=100)


@st.composite
def quadratics(draw, D=2):
    return Quadratic(draw(small_fractions), draw(small_fractions), D)


@st.composite
def nonzero_quadratics(draw, D=2):
    q = draw(quadratics(D))
    if q.sign() == 0:
        q = q + 1
    return q


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
