import sys
from fractions import Fraction

from hypothesis import strategies as st

from polyparam.polycore import Polynomial

VARS = ["x1", "x2", "y1"]

coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@st.composite
def polynomials(draw, vars=VARS, max_terms=5, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exps = tuple(draw(st.integers(0, max_exp)) for _ in vars)
        terms[exps] = draw(coeffs)
    return Polynomial.from_exponents(vars, terms)


points = st.tuples(*(st.integers(-6, 6) for _ in VARS))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
