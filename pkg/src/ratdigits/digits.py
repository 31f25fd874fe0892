"""P/Q digit systems on F_q[X]: expansion, evaluation and the digit functions.

A polynomial w is written as ``w = sum_i (s_i/Q) (P/Q)^i`` with digits of
degree < deg P, produced by the division chain ``Q w_i = P w_{i+1} + s_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import FieldSpec, Poly, format_poly, parse_poly, poly_divrem, poly_gcd
from .errors import BudgetExceeded, DegreeError, NotCoprimeError, ParseError, ZeroBaseError

DEFAULT_ENUM_BUDGET = 2**20


@dataclass(frozen=True)
class DigitSystem:
    """Base P/Q with digit set D = {s : deg s < deg P}."""

    P: Poly
    Q: Poly

    def __post_init__(self):
        P, Q = self.P, self.Q
        if P.field != Q.field:
            raise ValueError("P and Q live over different fields")
        if not P or not Q:
            raise ZeroBaseError("P and Q must be nonzero")
        if P.degree <= Q.degree:
            raise DegreeError(f"need deg P > deg Q, got {P.degree} <= {Q.degree}")
        if poly_gcd(P, Q).degree > 0:
            raise NotCoprimeError(f"P = {P} and Q = {Q} are not coprime")

    @property
    def field(self) -> FieldSpec:
        return self.P.field

    @property
    def m(self) -> int:
        return self.P.degree

    @property
    def n(self) -> int:
        return self.Q.degree

    @property
    def r_exp(self) -> int:
        return self.P.degree - self.Q.degree

    @property
    def r(self) -> int:
        """Branching number q^(deg P - deg Q)."""
        return self.field.q ** self.r_exp

    @property
    def num_digits(self) -> int:
        return self.field.q ** self.m

    def digits(self):
        """The digit alphabet D in lexicographic order."""
        from .algebra import polys_below_degree
        return polys_below_degree(self.field, self.m)

    def __repr__(self):
        return f"DigitSystem(P={format_poly(self.P)!r}, Q={format_poly(self.Q)!r}, q={self.field.q})"


def new_digit_system(P: Poly, Q: Poly) -> DigitSystem:
    return DigitSystem(P, Q)


@dataclass(frozen=True)
class DigitString:
    """Digits most significant first.

    ``radix_point`` is the number of digits left of the radix point, or None
    for a plain polynomial string.  For series strings the fractional part is
    a truncation of an infinite string.
    """

    digits: tuple
    radix_point: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(self.digits))

    @property
    def integer_digits(self):
        if self.radix_point is None:
            return self.digits
        return self.digits[: self.radix_point]

    @property
    def fractional_digits(self):
        if self.radix_point is None:
            return ()
        return self.digits[self.radix_point:]

    @property
    def depth(self) -> int:
        """Number of fractional digits carried by a truncated series string."""
        return len(self.fractional_digits)

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __str__(self):
        return format_digit_string(self)


def normalize(digits) -> tuple:
    """Strip leading zero digits, keeping a single zero for the zero string."""
    digits = tuple(digits)
    k = 0
    while k < len(digits) - 1 and not digits[k]:
        k += 1
    return digits[k:]


# ---------------------------------------------------------------- text / JSON

def _split_top(text, sep):
    # split on sep outside of [...] coefficient vectors
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def format_digit_string(s: DigitString) -> str:
    ints = ",".join(format_poly(d) for d in s.integer_digits)
    if s.radix_point is None:
        return ints
    return ints + "." + ",".join(format_poly(d) for d in s.fractional_digits)


def parse_digit_string(text: str, spec: FieldSpec) -> DigitString:
    """Comma-separated digits, most significant first, optional '.' radix point."""
    parts = _split_top(text.strip(), ".")
    if len(parts) > 2:
        raise ParseError("more than one radix point", text, len(parts[0]) + len(parts[1]) + 1)

    def digits_of(chunk):
        if not chunk.strip():
            return []
        return [parse_poly(t, spec) for t in _split_top(chunk, ",")]

    ints = digits_of(parts[0])
    if len(parts) == 1:
        if not ints:
            raise ParseError("empty digit string", text, 0)
        return DigitString(ints)
    return DigitString(ints + digits_of(parts[1]), radix_point=len(ints))


def digit_string_json(ds: DigitSystem, s: DigitString) -> str:
    obj = {
        "base": {"P": format_poly(ds.P), "Q": format_poly(ds.Q)},
        "digits": [format_poly(d) for d in s.digits],
        "radix_point": s.radix_point,
    }
    return json.dumps(obj)


# ---------------------------------------------------------------- operations

def expand_poly(ds: DigitSystem, w: Poly) -> DigitString:
    """The unique P/Q polynomial digit expansion of w."""
    if not w:
        return DigitString((Poly.zero(ds.field),))
    digits = []
    while w:
        w, s = poly_divrem(ds.Q * w, ds.P)
        digits.append(s)
    return DigitString(reversed(digits))


def evaluate(ds: DigitSystem, s: DigitString) -> tuple[Poly, Poly]:
    """Value of sum (s_i/Q)(P/Q)^i as a reduced fraction (num, monic den)."""
    F = ds.field
    digits = s.digits
    if not digits:
        return Poly.zero(F), Poly.one(F)
    k_int = len(s.integer_digits)
    d_frac = len(s.fractional_digits)
    k = k_int - 1  # highest index; may be -1 if there are no integer digits
    P, Q = ds.P, ds.Q
    # common denominator Q^(k+1) P^d; digit s_i contributes s_i P^(i+d) Q^(k-i)
    num = Poly.zero(F)
    top = k + d_frac
    Ppow = [Poly.one(F)]
    Qpow = [Poly.one(F)]
    for _ in range(top + 1):
        Ppow.append(Ppow[-1] * P)
        Qpow.append(Qpow[-1] * Q)
    for pos, digit in enumerate(digits):
        i = k - pos
        if digit:
            num = num + digit * Ppow[i + d_frac] * Qpow[k - i]
    den = Qpow[k + 1] * Ppow[d_frac]
    if not num:
        return num, Poly.one(F)
    g = poly_gcd(num, den)
    num, den = num // g, den // g
    c = F.inv(den.lead)
    return num.scale(c), den.scale(c)


def step_T(ds: DigitSystem, w: Poly) -> Poly:
    """T(w) = floor((Q/P) w), the quotient of Q w by P."""
    return poly_divrem(ds.Q * w, ds.P)[0]


def digit_function(ds: DigitSystem, m_idx: int, w: Poly) -> Poly:
    """s^(m)(w): the m-th least significant digit of w, zero beyond its length."""
    for _ in range(m_idx):
        if not w:
            break
        w = step_T(ds, w)
    return (ds.Q * w) % ds.P


def is_canonical_string(ds: DigitSystem, s: DigitString) -> bool:
    """True iff s is the expansion of some polynomial (s lies in L_{P/Q})."""
    if not s.digits or any(d.degree >= ds.m for d in s.digits):
        return False
    num, den = evaluate(ds, DigitString(s.digits))
    if den.degree > 0:
        return False
    return expand_poly(ds, num).digits == s.digits


def right_extensions(ds: DigitSystem, v: Poly, k: int, budget: int = DEFAULT_ENUM_BUDGET):
    """R_k(v): length-k digit strings s such that <v>s is canonical.

    Leading zeros of <v>s are ignored, so for v = 0 this is the set of
    length-k path labels leaving the root.
    """
    from itertools import product

    count = ds.num_digits**k
    if count > budget:
        raise BudgetExceeded(f"{count} candidate suffixes exceed the budget {budget}")
    prefix = expand_poly(ds, v).digits
    out = set()
    for suffix in product(ds.digits(), repeat=k):
        cand = DigitString(normalize(prefix + suffix))
        if is_canonical_string(ds, cand):
            out.add(suffix)
    return out
