from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dunkl.groups import build_root_system
from dunkl.poly import Polynomial

settings.register_profile(
    "dunkl", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("dunkl")

# (family, rank, multiplicity, order) for the exact systems used across the tests
SYSTEM_ARGS = {
    "Z2_mu1": ("Z2", 1, 1, None),
    "Z2_half": ("Z2", 1, Fraction(1, 2), None),
    "Z2sq": ("Z2", 2, [1, 2], None),
    "S3": ("A", 3, 1, None),
    "B2": ("B", 2, [1, 1], None),
    "I2_3": ("dihedral", 2, 1, 3),
}


def make_system(name):
    family, rank, mult, order = SYSTEM_ARGS[name]
    return build_root_system(family, rank, mult, order)


@pytest.fixture(params=sorted(SYSTEM_ARGS))
def any_system(request):
    return make_system(request.param)


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polynomials(draw, nvars, max_degree=4, max_terms=5):
    """Random exact polynomials in ``nvars`` variables."""
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exps = tuple(draw(st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars)))
        if sum(exps) <= max_degree:
            terms[exps] = draw(fractions)
    return Polynomial(nvars, terms)


@st.composite
def rational_points(draw, nvars):
    return tuple(draw(st.lists(fractions, min_size=nvars, max_size=nvars)))


# one verdict line per acceptance criterion, shown after every run
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
