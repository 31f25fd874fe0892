import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ratdigits.algebra import Poly, parse_field, parse_poly
from ratdigits.digits import DigitSystem

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("repo", max_examples=60, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")

# (field, P, Q): the running F_2 example, a second monomial-Q system,
# systems with linear and quadratic non-monomial Q, and a ternary one
SYSTEM_TEXTS = {
    "f2": ("2", "X^2+1", "X"),
    "f2b": ("2", "X^2+X+1", "X"),
    "f2x": ("2", "X^2", "X+1"),
    "f2g": ("2", "X^3+X+1", "X^2+1"),
    "f3": ("3", "X^2+1", "X+1"),
}


def make_system(key):
    f, p, q = SYSTEM_TEXTS[key]
    F = parse_field(f)
    return DigitSystem(parse_poly(p, F), parse_poly(q, F))


@pytest.fixture(scope="session")
def f2():
    return make_system("f2")


@pytest.fixture(scope="session", params=sorted(SYSTEM_TEXTS))
def any_system(request):
    return make_system(request.param)


def polys(field, max_deg):
    """Hypothesis strategy for polynomials of degree <= max_deg."""
    return st.lists(st.integers(0, field.q - 1), max_size=max_deg + 1).map(lambda c: Poly(field, c))


def nonzero_polys(field, max_deg):
    return polys(field, max_deg).filter(bool)


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
