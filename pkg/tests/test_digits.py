import json
import os
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from conftest import GOLDEN, SYSTEM_TEXTS, make_system, nonzero_polys, polys
from ratdigits.algebra import FieldSpec, Poly, format_poly, parse_poly, polys_below_degree
from ratdigits.digits import (DigitString, DigitSystem, digit_function, digit_string_json, evaluate,
                              expand_poly, format_digit_string, is_canonical_string, new_digit_system,
                              normalize, parse_digit_string, right_extensions, step_T)
from ratdigits.errors import BudgetExceeded, DegreeError, NotCoprimeError, ParseError, ZeroBaseError

F2 = FieldSpec(2)


def P2(text):
    return parse_poly(text, F2)


def digits_text(s):
    return format_digit_string(s)


# -------------------------------------------------------------- systems

def test_running_example_system(f2):
    assert (f2.m, f2.n, f2.r_exp, f2.r) == (2, 1, 1, 2)
    assert [format_poly(d) for d in f2.digits()] == ["0", "1", "X", "X+1"]


@pytest.mark.parametrize("P, Q, err", [("X^2", "X", NotCoprimeError), ("X", "X^2+1", DegreeError),
                                       ("0", "X", ZeroBaseError), ("X^2", "0", ZeroBaseError),
                                       ("X", "X+1", DegreeError)])
def test_invalid_systems(P, Q, err):
    with pytest.raises(err):
        new_digit_system(P2(P), P2(Q))


def test_systems_over_different_fields_are_rejected():
    with pytest.raises(ValueError):
        DigitSystem(P2("X^2+1"), parse_poly("X", FieldSpec(3)))


# -------------------------------------------------------------- expansion

def test_table_one(f2):
    with open(os.path.join(GOLDEN, "small_expansions.json")) as fh:
        rows = json.load(fh)["rows"]
    for w, expected in rows.items():
        assert digits_text(expand_poly(f2, P2(w))) == expected


@pytest.mark.parametrize("key", sorted(SYSTEM_TEXTS))
def test_expansion_matches_frozen_oracle(key):
    ds = make_system(key)
    with open(os.path.join(GOLDEN, "oracle_expansions.json")) as fh:
        frozen = json.load(fh)[key]
    for w, expected in frozen.items():
        assert digits_text(expand_poly(ds, parse_poly(w, ds.field))) == expected


def test_expansion_matches_live_oracle(any_system):
    ds = any_system
    P, Q, p = O.from_lib(ds.P), O.from_lib(ds.Q), ds.field.p
    for w in O.all_polys(p, 5 if p == 2 else 3):
        got = expand_poly(ds, O.to_lib(ds.field, w)).digits
        assert [O.from_lib(s) for s in got] == O.expand(P, Q, w, p)


def test_evaluate_examples(f2):
    assert evaluate(f2, DigitString([P2("1")])) == (P2("1"), P2("X"))
    assert evaluate(f2, DigitString([P2("X"), P2("1")])) == (P2("X"), P2("1"))
    assert evaluate(f2, DigitString([])) == (P2("0"), P2("1"))


@given(w=polys(F2, 12))
def test_round_trip_f2(w):
    ds = make_system("f2")
    assert evaluate(ds, expand_poly(ds, w)) == (w, P2("1"))


def test_round_trip_random(any_system):
    ds = any_system
    from hypothesis import given as g

    @g(w=polys(ds.field, 12))
    def check(w):
        s = expand_poly(ds, w)
        assert evaluate(ds, s)[0] == w
        assert all(d.degree < ds.m for d in s.digits)
        assert s.digits == normalize(s.digits)

    check()


def test_evaluate_matches_oracle_on_arbitrary_strings(any_system):
    ds = any_system
    P, Q, p = O.from_lib(ds.P), O.from_lib(ds.Q), ds.field.p
    digits = list(ds.digits())[:5]
    for word in product(digits, repeat=3):
        num, den = evaluate(ds, DigitString(word))
        onum, oden = O.evaluate(P, Q, [O.from_lib(s) for s in word], p)
        # num/den == onum/oden
        assert O.mul(O.from_lib(num), oden, p) == O.mul(onum, O.from_lib(den), p)


def test_evaluate_radix_pointed(f2):
    # .1 means (1/Q)(P/Q)^-1 = 1/P
    s = DigitString([P2("1")], radix_point=0)
    assert evaluate(f2, s) == (P2("1"), P2("X^2+1"))
    # X,1.0 evaluates like X,1
    assert evaluate(f2, DigitString([P2("X"), P2("1"), P2("0")], radix_point=2)) == (P2("X"), P2("1"))


@given(v=polys(F2, 4), w=polys(F2, 4))
def test_digitwise_addition_without_carry(v, w):
    ds = make_system("f2")
    a, b = expand_poly(ds, v).digits, expand_poly(ds, w).digits
    n = max(len(a), len(b))
    zero = P2("0")
    a = (zero,) * (n - len(a)) + a
    b = (zero,) * (n - len(b)) + b
    assert normalize(x + y for x, y in zip(a, b)) == expand_poly(ds, v + w).digits


def test_digitwise_addition_exhaustive_f3():
    ds = make_system("f3")
    F = ds.field
    ws = list(polys_below_degree(F, 4))[::7]
    for v in ws:
        for w in ws:
            a, b = expand_poly(ds, v).digits, expand_poly(ds, w).digits
            n = max(len(a), len(b))
            a = (Poly.zero(F),) * (n - len(a)) + a
            b = (Poly.zero(F),) * (n - len(b)) + b
            assert normalize(x + y for x, y in zip(a, b)) == expand_poly(ds, v + w).digits


def test_expansion_length_is_level(any_system):
    # the level l = deg // r_exp + 1 already counts the leading digit
    ds = any_system
    for w in polys_below_degree(ds.field, 5):
        if not w:
            continue
        level = w.degree // ds.r_exp + 1
        assert (level - 1) * ds.r_exp <= w.degree < level * ds.r_exp
        assert len(expand_poly(ds, w)) == level


# -------------------------------------------------------------- digit functions

def test_digit_function_examples(f2):
    assert digit_function(f2, 0, P2("X^2+X")) == P2("X+1")
    for m in range(5):
        assert digit_function(f2, m, P2("0")) == P2("0")


@given(w=nonzero_polys(F2, 10), m=st.integers(0, 12))
def test_digit_function_is_mth_digit(w, m):
    ds = make_system("f2")
    digits = expand_poly(ds, w).digits[::-1]
    expected = digits[m] if m < len(digits) else P2("0")
    assert digit_function(ds, m, w) == expected
    if m == 0:
        assert expected == (ds.Q * w) % ds.P


def test_step_T(f2):
    assert step_T(f2, P2("X^3")) == P2("X^2+1")
    assert step_T(f2, P2("0")) == P2("0")


@given(w=polys(F2, 10), i=st.integers(0, 8))
def test_step_T_iterates_give_digits(w, i):
    ds = make_system("f2")
    v = w
    for _ in range(i):
        v = step_T(ds, v)
    assert (ds.Q * v) % ds.P == digit_function(ds, i, w)


# -------------------------------------------------------------- language

def test_canonical_examples(f2):
    assert is_canonical_string(f2, DigitString([P2("X"), P2("1")]))
    assert not is_canonical_string(f2, DigitString([P2("1")]))
    assert is_canonical_string(f2, DigitString([P2("0")]))
    assert not is_canonical_string(f2, DigitString([P2("0"), P2("X")]))


def test_prefix_closed(any_system):
    ds = any_system
    for w in polys_below_degree(ds.field, 7 if ds.field.q == 2 else 4):
        s = expand_poly(ds, w).digits
        for k in range(1, len(s) + 1):
            assert is_canonical_string(ds, DigitString(s[:k]))


def test_right_extensions_examples(f2):
    assert right_extensions(f2, P2("0"), 1) == {(P2("0"),), (P2("X"),)}
    with pytest.raises(BudgetExceeded):
        right_extensions(f2, P2("1"), 11)


def test_right_extensions_have_r_elements(any_system):
    ds = any_system
    for v in list(polys_below_degree(ds.field, 3))[:20]:
        assert len(right_extensions(ds, v, 1)) == ds.r


def test_right_extensions_separate_residues(f2):
    polys_ = list(polys_below_degree(F2, 4))
    for k in (1, 2):
        ext = {v: right_extensions(f2, v, k) for v in polys_}
        for v in polys_:
            for w in polys_:
                if (v - w) % f2.Q**k:
                    assert not ext[v] & ext[w]


# -------------------------------------------------------------- text and JSON

@pytest.mark.parametrize("text", ["X,X+1,X+1", "0", "X,X+1.X+1,0", ".X,X+1,1", "X."])
def test_digit_string_text_round_trip(text):
    assert format_digit_string(parse_digit_string(text, F2)) == text


def test_digit_string_parse_errors():
    with pytest.raises(ParseError):
        parse_digit_string("X.1.0", F2)
    with pytest.raises(ParseError):
        parse_digit_string("", F2)


def test_digit_string_json(f2):
    obj = json.loads(digit_string_json(f2, expand_poly(f2, P2("X"))))
    assert obj == {"base": {"P": "X^2+1", "Q": "X"}, "digits": ["X", "1"], "radix_point": None}


def test_extension_field_digits():
    F4 = __import__("ratdigits").parse_field("2^2:X^2+X+1")
    ds = DigitSystem(parse_poly("X^2+1", F4), parse_poly("X", F4))
    assert ds.r == 4 and len(ds.digits()) == 16
    for w in list(polys_below_degree(F4, 3))[::5]:
        assert evaluate(ds, expand_poly(ds, w))[0] == w
