import json

import pytest

from conftest import make_system
from ratdigits.algebra import FieldSpec, Poly
from ratdigits.digits import DigitSystem
from ratdigits.verify import (VerifyReport, check_formulas, check_graph, check_nonregularity,
                              check_periodicity, check_uniqueness, random_rationals)


def test_random_rationals_are_deterministic(f2):
    a = random_rationals(f2, 8, seed=3)
    assert a == random_rationals(f2, 8, seed=3)
    assert a != random_rationals(f2, 8, seed=4)
    for num, den in a:
        assert num and den and 1 <= den.degree <= 3 and num.degree <= 4


@pytest.mark.parametrize("key", ["f2", "f2x", "f3"])
def test_formulas(key):
    ds = make_system(key)
    rep = check_formulas(ds, max_deg=6 if ds.field.q == 2 else 3, n_series=10)
    assert rep.passed, rep.failures


def test_uniqueness_two_systems():
    for key in ("f2", "f3"):
        ds = make_system(key)
        assert ds.num_digits <= 16
        rep = check_uniqueness(ds, 4 if ds.num_digits <= 4 else 3)
        assert rep.passed and rep.checked > 0


def test_uniqueness_detects_a_degenerate_base():
    # P = X^2 shares a factor with Q = X, so 1,X evaluates to X^2 + X^2 = 0;
    # the constructor refuses such bases, hence the bypass
    F = FieldSpec(2)
    ds = object.__new__(DigitSystem)
    object.__setattr__(ds, "P", Poly(F, [0, 0, 1]))
    object.__setattr__(ds, "Q", Poly(F, [0, 1]))
    rep = check_uniqueness(ds, 2)
    assert not rep.passed and "1,X" in rep.failures


def test_graph_and_periodicity(f2):
    rep = check_graph(f2, 5)
    assert rep.passed and rep.details["arity"] == 2 and rep.details["self_loops"] == ["0"]
    rep = check_periodicity(f2, 12, 4)
    assert rep.passed and rep.checked == 2**12 and rep.details["periodic"] == 1


def test_nonregularity(any_system):
    rep = check_nonregularity(any_system, 2, 3 if any_system.field.q == 2 else 2)
    assert rep.passed
    for k, count in rep.details["separated_classes"].items():
        assert count >= rep.details["required"][k]


def test_report_rendering():
    rep = VerifyReport("demo", False, 3, ["a"], {"depth": 2})
    assert str(rep).splitlines() == ["demo: FAIL (3 checked)", "  depth: 2", "  failure: a"]
    assert json.loads(rep.to_json()) == {"suite": "demo", "passed": False, "checked": 3,
                                         "failures": ["a"], "details": {"depth": 2}}
