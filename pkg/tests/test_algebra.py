import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from conftest import nonzero_polys, polys
from ratdigits.algebra import (FieldSpec, Poly, format_poly, index_to_poly, parse_field, parse_poly,
                               poly_divrem, poly_gcd, poly_key, poly_to_index, polys_below_degree)
from ratdigits.errors import FieldError, ParseError

F2, F3 = FieldSpec(2), FieldSpec(3)
F4 = parse_field("2^2:X^2+X+1")
F9 = parse_field("3^2:X^2+1")


def P2(text):
    return parse_poly(text, F2)


# -------------------------------------------------------------- fields

@pytest.mark.parametrize("F", [F2, F3, F4, F9, FieldSpec(5)])
def test_field_axioms(F):
    q = F.q
    for a in range(q):
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in range(q):
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            for c in range(q):
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
                assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_field_order_starts_with_zero_and_one():
    assert F4.order[:2] == (0, 1)
    assert sorted(F4.order) == list(range(4))
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 1, 1), order=(1, 0, 2, 3))


@pytest.mark.parametrize("text", ["4", "2^2", "2^2:X^2+1", "2^2:X^3+X+1"])
def test_bad_fields(text):
    with pytest.raises(FieldError):
        parse_field(text)


def test_field_spec_syntax():
    with pytest.raises(ParseError):
        parse_field("two")


def test_extension_field_elements():
    # in F_4 = F_2[t]/(t^2+t+1), t * t = t + 1
    t = F4.code([0, 1])
    assert F4.mul(t, t) == F4.code([1, 1])
    assert F4.format_element(t) == "[1,0]"


# -------------------------------------------------------------- division and gcd

def test_divrem_examples():
    assert poly_divrem(P2("X^4"), P2("X^2+1")) == (P2("X^2+1"), P2("1"))
    assert poly_divrem(P2("0"), P2("X+1")) == (P2("0"), P2("0"))
    assert poly_divrem(P2("X^3+X^2"), P2("X^2+1")) == (P2("X+1"), P2("X+1"))


def test_divide_by_zero():
    with pytest.raises(ZeroDivisionError):
        poly_divrem(P2("X"), P2("0"))


@pytest.mark.parametrize("F", [F2, F3, F4])
@given(data=st.data())
def test_divrem_reconstructs(F, data):
    a = data.draw(polys(F, 10))
    d = data.draw(nonzero_polys(F, 5))
    quo, rem = poly_divrem(a, d)
    assert quo * d + rem == a
    assert rem.degree < d.degree


@given(a=polys(F3, 8), d=nonzero_polys(F3, 4))
def test_divrem_matches_oracle(a, d):
    quo, rem = poly_divrem(a, d)
    assert (O.from_lib(quo), O.from_lib(rem)) == O.divmod_(O.from_lib(a), O.from_lib(d), 3)


def test_gcd_examples():
    assert poly_gcd(P2("X^2+1"), P2("X")) == P2("1")
    assert poly_gcd(P2("X^2+1"), P2("X+1")) == P2("X+1")
    w = parse_poly("2*X^2+1", F3)
    assert poly_gcd(w, w) == w.monic()
    with pytest.raises(ValueError):
        poly_gcd(P2("0"), P2("0"))


@given(a=nonzero_polys(F3, 5), b=nonzero_polys(F3, 5), c=nonzero_polys(F3, 3))
def test_gcd_divides_and_is_monic(a, b, c):
    g = poly_gcd(a * c, b * c)
    assert g.lead == 1
    assert not (a * c) % g and not (b * c) % g
    assert not g % c.monic()


@given(a=nonzero_polys(F4, 6), b=nonzero_polys(F4, 6))
def test_no_zero_divisors(a, b):
    assert (a * b).degree == a.degree + b.degree


def test_zero_degree_is_below_every_integer():
    zero = P2("0")
    assert zero.degree < -10**9
    assert zero.degree < P2("1").degree


# -------------------------------------------------------------- index bijection

def test_index_examples():
    assert [format_poly(index_to_poly(F2, n)) for n in range(4)] == ["0", "1", "X", "X+1"]
    assert index_to_poly(F3, 5) == parse_poly("X+2", F3)


@pytest.mark.parametrize("F", [F2, F3, F4])
def test_index_round_trip_and_degree_monotone(F):
    for n in range(10**4):
        a = index_to_poly(F, n)
        assert poly_to_index(a) == n
        # n < q^k exactly when deg a_n < k
        assert a.degree < 1 or F.q ** a.degree <= n < F.q ** (a.degree + 1)


def test_index_recursion():
    # a_(qm + r) = X a_m + a_r
    for F in (F2, F3, F4):
        q = F.q
        for m in range(50):
            for r in range(q):
                assert index_to_poly(F, q * m + r) == Poly.X(F) * index_to_poly(F, m) + index_to_poly(F, r)


def test_polys_below_degree_order():
    got = list(polys_below_degree(F2, 2))
    assert [format_poly(w) for w in got] == ["0", "1", "X", "X+1"]
    assert sorted(got, key=poly_key) == got


# -------------------------------------------------------------- text

def test_parse_examples():
    assert P2("X^2+1").coeffs == (1, 0, 1)
    assert not P2("0")
    assert parse_poly("2*X^3+X", F3).coeffs == (0, 1, 0, 2)
    assert parse_poly("[1,0]*X+[1,1]", F4) == Poly(F4, [F4.code([1, 1]), F4.code([0, 1])])


@pytest.mark.parametrize("text, pos", [("X^^2", 2), ("X+", 1), ("3*X", 0), ("Y", 0)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises((ParseError, FieldError)) as info:
        parse_poly(text, F3 if text == "3*X" else F2)
    if isinstance(info.value, ParseError):
        assert info.value.position == pos


@pytest.mark.parametrize("F", [F2, F3, F4, F9])
@given(data=st.data())
def test_format_parse_round_trip(F, data):
    w = data.draw(polys(F, 8))
    assert parse_poly(format_poly(w), F) == w


def test_parse_collects_like_terms():
    assert P2("X+X+1") == P2("1")
    assert not parse_poly("X^2 + 2*X^2", F3)
