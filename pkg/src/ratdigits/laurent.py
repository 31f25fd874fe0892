"""Truncated Laurent series in 1/X and their P/Q digit expansions.

A :class:`LaurentSeries` knows its coefficients from its top degree down to
``floor``; anything below ``floor`` is unknown (not zero).  Coefficients are
stored as a numpy array of field codes in ascending degree order.
"""

from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .algebra import MINUS_INF, FieldSpec, Poly, format_poly, parse_poly
from .digits import DigitString, DigitSystem, expand_poly
from .errors import InsufficientPrecision, ParseError

# ---------------------------------------------------------------- array helpers


def _conv(a: np.ndarray, b, F: FieldSpec) -> np.ndarray:
    """Product of two ascending coefficient arrays."""
    b = np.asarray(b, dtype=np.int64)
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    if F.s == 1:
        return np.convolve(a, b) % F.p
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    add, mul = F.np_add, F.np_mul
    for i, c in enumerate(b):
        if c:
            out[i:i + len(a)] = add[out[i:i + len(a)], mul[c][a]]
    return out


def _is_monomial(d: Poly) -> bool:
    return all(c == 0 for c in d.coeffs[:-1])


def _series_div(a: np.ndarray, d: Poly) -> np.ndarray:
    """Quotient of a series by a polynomial, from the top down.

    With ``a`` ascending from degree e and deg d = k, the result is ascending
    from degree e - k and every entry is exact.
    """
    F = d.field
    k = d.degree
    inv = F.inv(d.lead)
    if _is_monomial(d):
        return F.np_mul[inv][a] if len(a) else a.copy()
    add, mul, neg = F.add_t, F.mul_t, F.neg_t
    rem = [int(x) for x in a]
    L = len(rem)
    # quotient entry i sits at degree e - k + i and consumes rem[i]
    out = [0] * L
    dn = [neg[c] for c in d.coeffs[:-1]]
    for i in range(L - 1, -1, -1):
        c = rem[i]
        if not c:
            continue
        c = mul[c][inv]
        out[i] = c
        row = mul[c]
        for t, y in enumerate(dn):
            pos = i - k + t
            if y and pos >= 0:
                rem[pos] = add[rem[pos]][row[y]]
    return np.array(out, dtype=np.int64)


def _trim_top(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if len(nz) else a[:0]


# ---------------------------------------------------------------- series type


class LaurentSeries:
    """Element of F_q((1/X)) known from its top coefficient down to ``floor``."""

    __slots__ = ("field", "floor", "_c")

    def __init__(self, field: FieldSpec, floor: int, coeffs=()):
        self.field = field
        self.floor = int(floor)
        self._c = _trim_top(np.asarray(coeffs, dtype=np.int64).reshape(-1))

    @classmethod
    def zero(cls, field, floor):
        return cls(field, floor)

    @classmethod
    def from_poly(cls, w: Poly, floor: int):
        if floor > 0:
            return cls(w.field, floor, w.coeffs[floor:])
        return cls(w.field, floor, (0,) * (-floor) + w.coeffs)

    @classmethod
    def from_terms(cls, field, terms: dict, floor: int):
        """Series from {degree: code}; degrees below floor are dropped."""
        top = max((d for d, c in terms.items() if c), default=floor - 1)
        arr = np.zeros(max(top - floor + 1, 0), dtype=np.int64)
        for d, c in terms.items():
            if d >= floor and c:
                arr[d - floor] = c
        return cls(field, floor, arr)

    # -- basic queries

    @property
    def coeffs(self) -> np.ndarray:
        """Known coefficients, ascending from ``floor``."""
        return self._c

    @property
    def degree(self):
        return self.floor + len(self._c) - 1 if len(self._c) else MINUS_INF

    def is_zero(self) -> bool:
        """True if every known coefficient vanishes."""
        return len(self._c) == 0

    def __bool__(self):
        return not self.is_zero()

    def abs(self) -> Fraction:
        """|alpha| = q^deg(alpha); 0 for a series that is zero to precision."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.field.q) ** self.degree

    def coeff(self, d: int) -> int:
        if d < self.floor:
            raise InsufficientPrecision(f"coefficient of X^{d} is below the precision floor {self.floor}")
        i = d - self.floor
        return int(self._c[i]) if i < len(self._c) else 0

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients of degrees lo..hi-1 as an ascending array."""
        if lo < self.floor:
            raise InsufficientPrecision(f"need degree {lo}, floor is {self.floor}")
        out = np.zeros(max(hi - lo, 0), dtype=np.int64)
        src = self._c[max(lo - self.floor, 0): max(hi - self.floor, 0)]
        out[: len(src)] = src
        return out

    def _padded(self, floor, top):
        return self.window(floor, top + 1)

    def _top_for_precision(self):
        return self.degree if len(self._c) else self.floor - 1

    # -- arithmetic

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("series over different fields")

    def _coerce(self, other):
        if isinstance(other, Poly):
            return LaurentSeries.from_poly(other, min(self.floor, 0))
        return other

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        e = max(self.floor, other.floor)
        top = max(self._top_for_precision(), other._top_for_precision(), e)
        a, b = self._padded(e, top), other._padded(e, top)
        return LaurentSeries(self.field, e, self.field.np_add[a, b])

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.field, self.floor, self.field.np_neg[self._c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self.mul_poly(other)
        self._check(other)
        e = min(self.floor + other._top_for_precision(), other.floor + self._top_for_precision())
        prod = _conv(self._c, other._c, self.field)
        base = self.floor + other.floor
        return LaurentSeries(self.field, e, prod[max(e - base, 0):])

    __rmul__ = __mul__

    def mul_poly(self, w: Poly):
        """Product with an exact polynomial; the floor rises by deg w."""
        if not w:
            return LaurentSeries.zero(self.field, self.floor)
        prod = _conv(self._c, w.coeffs, self.field)
        k = w.degree
        return LaurentSeries(self.field, self.floor + k, prod[k:])

    def div_poly(self, d: Poly):
        """Quotient by a nonzero polynomial; the floor drops by deg d."""
        if not d:
            raise ZeroDivisionError("division of a series by the zero polynomial")
        return LaurentSeries(self.field, self.floor - d.degree, _series_div(self._c, d))

    def scale(self, c: int):
        return LaurentSeries(self.field, self.floor, self.field.np_mul[c][self._c])

    def shift(self, k: int):
        """Multiply by X^k."""
        return LaurentSeries(self.field, self.floor + k, self._c)

    def truncate(self, floor: int):
        """Forget coefficients below ``floor``."""
        if floor <= self.floor:
            return self
        return LaurentSeries(self.field, floor, self._c[floor - self.floor:])

    def agrees_with(self, other, floor: int | None = None) -> bool:
        """Equality of the coefficients both series know, down to ``floor``."""
        e = max(self.floor, other.floor, floor if floor is not None else self.floor)
        top = max(self._top_for_precision(), other._top_for_precision(), e)
        return bool(np.array_equal(self._padded(e, top), other._padded(e, top)))

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.field == other.field and self.floor == other.floor
                and np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash((self.floor, self._c.tobytes()))

    def integer_part(self) -> Poly:
        if self.floor > 0 and len(self._c):
            raise InsufficientPrecision("integer part is not fully known")
        return Poly(self.field, [int(x) for x in self._c[-self.floor:]])

    def __str__(self):
        fmt = self.field.format_element
        terms = []
        for i in range(len(self._c) - 1, -1, -1):
            c = int(self._c[i])
            if not c:
                continue
            d = self.floor + i
            mono = "1" if d == 0 else ("X" if d == 1 else f"X^{d}")
            if d == 0:
                terms.append(fmt(c))
            else:
                terms.append(mono if c == 1 else f"{fmt(c)}*{mono}")
        terms.append(f"O(X^{self.floor})")
        return " + ".join(terms)

    def __repr__(self):
        return f"LaurentSeries({self})"


def ls_from_rational(num: Poly, den: Poly, floor: int) -> LaurentSeries:
    """num/den expanded in 1/X, exact down to ``floor``."""
    if not den:
        raise ZeroDivisionError("zero denominator")
    F = num.field
    if not num:
        return LaurentSeries.zero(F, floor)
    # start num low enough that the quotient is known down to floor
    start = floor + den.degree
    return LaurentSeries.from_poly(num, min(start, 0)).div_poly(den).truncate(floor)


def ls_floor_frac(alpha: LaurentSeries) -> tuple[Poly, LaurentSeries]:
    """(integer part, fractional part); the fractional part has |.| < 1."""
    whole = alpha.integer_part()
    frac = LaurentSeries(alpha.field, alpha.floor, alpha.coeffs[: max(-alpha.floor, 0)])
    return whole, frac


# ---------------------------------------------------------------- digit expansion


def digit_select(ds: DigitSystem, v: Poly, beta) -> Poly:
    """The unique s in L(v) agreeing with beta in degrees deg Q .. deg P - 1.

    ``beta`` may be a Poly or a LaurentSeries of degree < deg P.
    """
    F, n, m = ds.field, ds.n, ds.m
    if isinstance(beta, LaurentSeries):
        top = beta.window(n, m) if beta.floor <= n else None
        if top is None:
            raise InsufficientPrecision("series not known down to degree deg Q")
        t = Poly(F, [0] * n + [int(x) for x in top])
    else:
        t = Poly(F, [0] * n + list(beta.coeffs[n:m]))
    return t + ((-(ds.P * v) - t) % ds.Q)


@dataclass
class SeriesExpansionState:
    """Snapshot after emitting ``j - 1`` digits of a series in the unit disk.

    ``scaled`` is Q (P/Q)^j times the current residual; it equals P times the
    fractional part of (P/Q)^(j-1) times the expanded series.  It is kept as
    the numerator Q^(j-1) scaled and only divided out on request.
    """

    ds: DigitSystem
    j: int
    node_coeffs: np.ndarray
    _num: np.ndarray = field(repr=False)
    _num_floor: int = field(repr=False)
    _qpow: np.ndarray = field(repr=False)
    _history: list = field(default_factory=list, repr=False)

    @property
    def digit(self) -> Poly:
        """The digit s_{-j} chosen at this step."""
        return self._history[self.j - 1]

    @property
    def digits(self) -> tuple:
        """Digits emitted up to and including this step."""
        return tuple(self._history[: self.j])

    @property
    def node(self) -> Poly:
        return Poly(self.ds.field, [int(x) for x in self.node_coeffs])

    @property
    def scaled(self) -> LaurentSeries:
        F = self.ds.field
        num = LaurentSeries(F, self._num_floor, self._num)
        return num.div_poly(Poly(F, [int(x) for x in self._qpow]))

    def residual(self) -> LaurentSeries:
        """alpha^(j), the part of the series not yet accounted for by the digits."""
        ds = self.ds
        return self.scaled.mul_poly(ds.Q ** (self.j - 1)).div_poly(ds.P ** self.j)


class _LinearRoot:
    """Powers of the root x0 of a linear Q over a prime field, grown on demand."""

    def __init__(self, Q: Poly):
        F = Q.field
        self.p = F.p
        self.x0 = F.mul(F.neg(Q.coeffs[0]), F.inv(Q.coeffs[1]))
        self.inv_lead = F.inv(Q.coeffs[1])
        self.pw = np.ones(1, dtype=np.int64)
        self.ipw = np.ones(1, dtype=np.int64)

    def powers(self, size):
        if len(self.pw) < size:
            n = max(size, 2 * len(self.pw))
            p, x, xi = self.p, self.x0, pow(self.x0, -1, self.p)
            self.pw = np.array([pow(x, k, p) for k in range(n)], dtype=np.int64)
            self.ipw = np.array([pow(xi, k, p) for k in range(n)], dtype=np.int64)
        return self.pw[:size], self.ipw[:size]

    def value(self, a: np.ndarray, shift: int = 0) -> int:
        """(X^shift a)(x0) mod p."""
        pw, _ = self.powers(len(a) + shift)
        return int(np.dot(a, pw[shift:shift + len(a)]) % self.p)

    def exact_quotient(self, a: np.ndarray) -> np.ndarray:
        # synthetic division by X - x0: b_i = x0^-i sum_{k > i} a_k x0^(k-1)
        L = len(a)
        if self.value(a):
            raise ArithmeticError("inexact division")
        if L <= 1:
            return np.zeros(0, dtype=np.int64)
        p = self.p
        pw, ipw = self.powers(L)
        w = (a[1:] * pw[: L - 1]) % p
        suffix = np.cumsum(w[::-1])[::-1] % p
        return (suffix * ipw[: L - 1] % p) * self.inv_lead % p


def _linear_root(ds: DigitSystem):
    Q = ds.Q
    if ds.field.s != 1 or Q.degree != 1 or _is_monomial(Q):
        return None
    return _LinearRoot(Q)


def _select_low(ds: DigitSystem, v: np.ndarray, t: np.ndarray, root=None) -> np.ndarray:
    # coefficients below deg Q of the chosen digit: (-P v - t) mod Q
    F, n = ds.field, ds.n
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if _is_monomial(ds.Q):
        pv = _conv(v[:n], ds.P.coeffs[:n], F)[:n] if len(v) else np.zeros(0, dtype=np.int64)
        low = np.zeros(n, dtype=np.int64)
        low[: len(pv)] = pv
        return F.np_neg[low]
    if root is not None:
        Pc = np.array(ds.P.coeffs, dtype=np.int64)
        val = root.value(Pc) * root.value(v) + root.value(t, n)
        return np.array([F.neg(val % F.p)], dtype=np.int64)
    V = Poly(F, [int(x) for x in v])
    T = Poly(F, [0] * n + [int(x) for x in t])
    low = (-(ds.P * V) - T) % ds.Q
    out = np.zeros(n, dtype=np.int64)
    out[: len(low.coeffs)] = low.coeffs
    return out


def _exact_div_arr(a: np.ndarray, d: Poly, root=None) -> np.ndarray:
    F = d.field
    if _is_monomial(d):
        k = d.degree
        if np.any(a[:k]):
            raise ArithmeticError("inexact division")
        return F.np_mul[F.inv(d.lead)][a[k:]]
    if root is not None:
        return root.exact_quotient(a)
    return np.array(Poly(F, [int(x) for x in a]).exact_div(d).coeffs, dtype=np.int64)


def _top_window(F: FieldSpec, num: np.ndarray, num_floor: int, den: np.ndarray, lo: int, hi: int):
    """Coefficients lo..hi-1 of num/den, given that the quotient has degree < hi.

    Long division from the top only touches the top hi - lo coefficients of
    both operands.
    """
    g = len(den) - 1
    inv = F.inv(int(den[-1]))
    add, mul, neg = F.add_t, F.mul_t, F.neg_t
    out = [0] * (hi - lo)
    for d in range(hi - 1, lo - 1, -1):
        i = d + g - num_floor
        acc = int(num[i]) if 0 <= i < len(num) else 0
        for t in range(1, min(hi - 1 - d, g) + 1):
            c = out[d + t - lo]
            if c:
                acc = add[acc][neg[mul[c][int(den[g - t])]]]
        out[d - lo] = mul[acc][inv]
    return np.array(out, dtype=np.int64)


def expansion_states(ds: DigitSystem, alpha: LaurentSeries, count: int):
    """Yield the state before each of ``count`` digits of alpha, |alpha| < 1.

    Each yielded state carries the digit it produced as ``state.digit``.
    """
    F, P, Q, n, m = ds.field, ds.P, ds.Q, ds.n, ds.m
    if alpha.degree >= 0:
        raise ValueError("series must lie in the unit disk")
    v = np.zeros(0, dtype=np.int64)
    Pc = np.array(P.coeffs, dtype=np.int64)
    Qc = np.array(Q.coeffs, dtype=np.int64)
    # z_j = P (z_(j-1) - s) / Q is carried as num / qpow with qpow = Q^(j-1)
    z = alpha.mul_poly(P)
    num, num_floor = z.coeffs, z.floor
    qpow = np.ones(1, dtype=np.int64)
    root = _linear_root(ds)
    digits: list = []
    for j in range(1, count + 1):
        g = len(qpow) - 1
        if num_floor - g > n:
            raise InsufficientPrecision(f"digit {j} is not determined by the known coefficients")
        t = _top_window(F, num, num_floor, qpow, n, m)
        s = np.concatenate([_select_low(ds, v, t, root), t])
        digit = Poly(F, [int(x) for x in s])
        digits.append(digit)
        yield SeriesExpansionState(ds, j, v, num, num_floor, qpow, digits)
        # node: v <- (P v + s) / Q
        pv = _conv(v, Pc, F) if len(v) else np.zeros(0, dtype=np.int64)
        size = max(len(pv), len(s))
        acc = np.zeros(size, dtype=np.int64)
        acc[: len(pv)] = pv
        acc[: len(s)] = F.np_add[acc[: len(s)], s]
        v = _trim_top(_exact_div_arr(acc, Q, root))
        # numerator: num <- P (num - qpow s), qpow <- qpow Q
        qs = _conv(qpow, s, F)
        top = max(len(num) + num_floor, len(qs))
        cur = np.zeros(top - num_floor, dtype=np.int64)
        cur[: len(num)] = num
        lo = max(num_floor, 0)
        part = qs[lo: top]
        if len(part):
            seg = cur[lo - num_floor: lo - num_floor + len(part)]
            cur[lo - num_floor: lo - num_floor + len(part)] = F.np_add[seg, F.np_neg[part]]
        # the result has degree < n + g, so everything above cancels
        cur = cur[: max(n + g - num_floor, 0)]
        prod = _conv(cur, Pc, F)
        num, num_floor = prod[m:], num_floor + m
        qpow = _conv(qpow, Qc, F)


def series_expand(ds: DigitSystem, alpha: LaurentSeries, ndigits: int) -> DigitString:
    """Radix-pointed P/Q expansion with ``ndigits`` digits after the point."""
    if ndigits < 0:
        raise ValueError("ndigits must be nonnegative")
    need = -(ndigits + 1) * ds.r_exp - ds.n
    if alpha.floor > need:
        raise InsufficientPrecision(
            f"{ndigits} digits need precision floor <= {need}, series has {alpha.floor}")
    shifted, k = shift_into_disk(ds, alpha)
    if shifted.is_zero():
        zero = Poly.zero(ds.field)
        return DigitString((zero,) * ndigits, radix_point=0)
    digits = []
    for state in expansion_states(ds, shifted, k + ndigits):
        digits.append(state.digit)
    return DigitString(digits, radix_point=k)


def shift_into_disk(ds: DigitSystem, alpha: LaurentSeries) -> tuple[LaurentSeries, int]:
    """(alpha (Q/P)^k, k) with the least k >= 0 putting the result in |.| < 1."""
    if alpha.is_zero() or alpha.degree < 0:
        return alpha, 0
    k = alpha.degree // ds.r_exp + 1
    return alpha.mul_poly(ds.Q**k).div_poly(ds.P**k), k


def digits_closed_form(ds: DigitSystem, alpha: LaurentSeries, ndigits: int) -> list[Poly]:
    """All digits (integer ones first) from s = Q floor((P/Q)^j a) - P floor((P/Q)^(j-1) a).

    Here a is alpha moved into the unit disk.  This is independent of the
    digit-selection recursion and serves as a cross-check.
    """
    a, k = shift_into_disk(ds, alpha)
    prev = Poly.zero(ds.field)
    out = []
    cur = a
    for _ in range(k + ndigits):
        cur = cur.mul_poly(ds.P).div_poly(ds.Q)
        nxt = cur.integer_part()
        out.append(ds.Q * nxt - ds.P * prev)
        prev = nxt
    return out


# ---------------------------------------------------------------- series sources


@dataclass
class LazySeries:
    """A series given by its polynomial part and a rule for the coefficient of X^-j.

    ``known`` is the number of negative-degree coefficients that are known
    (None when the rule covers all of them).
    """

    poly: Poly
    coefficient: Callable[[int], int]
    known: int | None = None
    label: str = ""

    @property
    def field(self):
        return self.poly.field

    def to_series(self, floor: int) -> LaurentSeries:
        if self.known is not None:
            floor = max(floor, -self.known)
        depth = max(-floor, 0)
        neg = np.array([self.coefficient(j) for j in range(depth, 0, -1)], dtype=np.int64)
        pos = self.poly.coeffs[max(floor, 0):]
        arr = np.concatenate([neg, np.array(pos, dtype=np.int64)]) if depth else np.array(pos, dtype=np.int64)
        return LaurentSeries(self.field, floor, arr)


def periodic_series(poly: Poly, prefix, period) -> LazySeries:
    """Coefficients of X^-1, X^-2, ... are ``prefix`` followed by ``period`` repeated."""
    prefix, period = list(prefix), list(period)
    if not period:
        period = [0]

    def coefficient(j):
        i = j - 1
        return prefix[i] if i < len(prefix) else period[(i - len(prefix)) % len(period)]

    return LazySeries(poly, coefficient)


def list_series(poly: Poly, coeffs, exact: bool = True) -> LazySeries:
    coeffs = list(coeffs)

    def coefficient(j):
        return coeffs[j - 1] if j <= len(coeffs) else 0

    return LazySeries(poly, coefficient, known=None if exact else len(coeffs))


def lacunary_series(poly: Poly, exponent: Callable[[int], int], start: int = 0) -> LazySeries:
    """Sum of X^-f(i) for i >= start, with f strictly increasing and positive."""
    cache: dict[int, int] = {}
    cursor = [start, 0]

    def support_up_to(j):
        while cursor[1] <= j:
            e = exponent(cursor[0])
            if e <= cursor[1] and cursor[0] > start:
                raise ValueError("lacunary exponents must be strictly increasing")
            if e <= 0:
                raise ValueError("lacunary exponents must be positive")
            cache[e] = 1
            cursor[0] += 1
            cursor[1] = e

    def coefficient(j):
        support_up_to(j)
        return cache.get(j, 0)

    return LazySeries(poly, coefficient)


def rational_series(num: Poly, den: Poly) -> LazySeries:
    whole, rem = divmod(num, den)
    cache = {"floor": 0, "series": None}

    def coefficient(j):
        if cache["series"] is None or -j < cache["floor"]:
            floor = min(-j, 2 * cache["floor"] - 64)
            cache["series"] = ls_from_rational(rem, den, floor)
            cache["floor"] = floor
        return cache["series"].coeff(-j)

    return LazySeries(whole, coefficient, label=f"({format_poly(num)})/({format_poly(den)})")


def coefficient_series(poly: Poly, rule: Callable[[int], int]) -> LazySeries:
    return LazySeries(poly, rule)


# ---------------------------------------------------------------- series text


_ALLOWED_BINOPS = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
                   ast.Mult: lambda a, b: a * b, ast.Pow: lambda a, b: a**b,
                   ast.FloorDiv: lambda a, b: a // b, ast.Mod: lambda a, b: a % b}


def compile_exponent(expr: str) -> Callable[[int], int]:
    """Integer arithmetic expression in the variable ``i``; ``^`` means power."""
    try:
        tree = ast.parse(expr.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"bad exponent expression: {exc.msg}", expr, exc.offset) from None

    def check(node):
        if isinstance(node, ast.Expression):
            return check(node.body)
        if isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BINOPS:
            return check(node.left) and check(node.right)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            return check(node.operand)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return True
        if isinstance(node, ast.Name) and node.id == "i":
            return True
        raise ParseError("only integers, i and + - * ^ // % are allowed", expr,
                         getattr(node, "col_offset", 0))

    check(tree)

    def ev(node, i):
        if isinstance(node, ast.Expression):
            return ev(node.body, i)
        if isinstance(node, ast.BinOp):
            return _ALLOWED_BINOPS[type(node.op)](ev(node.left, i), ev(node.right, i))
        if isinstance(node, ast.UnaryOp):
            x = ev(node.operand, i)
            return -x if isinstance(node.op, ast.USub) else x
        if isinstance(node, ast.Constant):
            return node.value
        return i

    return lambda i: ev(tree, i)


def _split_items(body: str):
    from .digits import _split_top
    return [x.strip() for x in _split_top(body, ",")] if body.strip() else []


def _coeff_code(text: str, spec: FieldSpec) -> int:
    w = parse_poly(text, spec)
    if w.degree > 0:
        raise ParseError("series coefficients must be field elements", text, 0)
    return w.coeff(0)


_PATTERN = re.compile(r"^\s*(periodic|list|lacunary|rational)\s*\((.*)\)\s*$", re.S)


def parse_series(text: str, spec: FieldSpec) -> LazySeries:
    """Parse ``poly_part ; pattern``.

    Patterns: ``periodic(prefix|period)``, ``list(c1,...,ck)`` (exact, zeros
    beyond) or ``list(c1,...,ck,...)`` (unknown beyond), ``lacunary(expr)``
    giving the exponents X^-expr for i = 0, 1, ..., and ``rational(N/D)``
    (then the polynomial part is added).
    """
    head, sep, tail = text.partition(";")
    head = head.strip()
    poly = parse_poly(head, spec) if head else Poly.zero(spec)
    if not sep or not tail.strip():
        return list_series(poly, [])
    mt = _PATTERN.match(tail)
    if not mt:
        raise ParseError("unknown series pattern", text, len(head) + 1)
    kind, body = mt.group(1), mt.group(2)
    if kind == "periodic":
        if "|" not in body:
            raise ParseError("periodic pattern needs 'prefix|period'", text, len(head) + 1)
        pre, per = body.split("|", 1)
        return periodic_series(poly, [_coeff_code(c, spec) for c in _split_items(pre)],
                               [_coeff_code(c, spec) for c in _split_items(per)])
    if kind == "list":
        items = _split_items(body)
        exact = not (items and items[-1] == "...")
        if not exact:
            items = items[:-1]
        return list_series(poly, [_coeff_code(c, spec) for c in items], exact=exact)
    if kind == "lacunary":
        expr = body.split(",")[0]
        s = lacunary_series(poly, compile_exponent(expr))
        s.label = f"lacunary({expr.strip()})"
        return s
    num_text, slash, den_text = body.partition("/")
    if not slash:
        raise ParseError("rational pattern needs 'NUM/DEN'", text, len(head) + 1)
    num, den = parse_poly(num_text.strip("() "), spec), parse_poly(den_text.strip("() "), spec)
    if not den:
        raise ParseError("zero denominator", text, len(head) + 1)
    r = rational_series(num, den)
    return LazySeries(r.poly + poly, r.coefficient, label=r.label)


# ---------------------------------------------------------------- Mahler classification


def in_mahler_set(ds: DigitSystem, exponent) -> bool:
    """Whether q^exponent lies in Y = union over i >= 1 of [q^(-ri-n), q^(-ri)), r = deg P - deg Q.

    ``exponent`` None stands for the value 0, which is accepted.
    """
    if exponent is None:
        return True
    r, n = ds.r_exp, ds.n
    d = -exponent
    if d <= r:
        return False
    # need i >= 1 with r i + 1 <= d <= r i + n
    i = (d - 1) // r
    return i >= 1 and d <= r * i + n


@dataclass
class MahlerReport:
    depth: int
    rows: list
    verdict: str
    index: int | None

    def to_json(self) -> str:
        return json.dumps({"depth": self.depth, "verdict": self.verdict, "index": self.index,
                           "rows": self.rows})


def mahler_classify(ds: DigitSystem, alpha: LaurentSeries, depth: int, tail: int | None = None) -> MahlerReport:
    """Depth-bounded check of whether the expansion of alpha is eventually minimal.

    Row i records |{alpha (P/Q)^i}| (as an exponent of q, None for zero),
    membership in Y union {0}, and the degree of the digit s_{-i-1}.  The
    verdict is "minimal-from" when the last ``tail`` rows all lie in the
    set, and "not eventually minimal" otherwise, with the last violation as
    witness.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    tail = max(1, depth // 4) if tail is None else tail
    need = -(depth + 2) * ds.r_exp - ds.n
    if alpha.floor > need:
        raise InsufficientPrecision(f"depth {depth} needs precision floor <= {need}")
    shifted, k = shift_into_disk(ds, alpha)
    rows = []
    if shifted.is_zero():
        rows = [{"i": i, "abs_exponent": None, "in_Y": True, "digit_degree": None} for i in range(depth + 1)]
    else:
        states = expansion_states(ds, shifted, k + depth + 1)
        for state in states:
            i = state.j - 1 - k
            if i < 0:
                continue
            # {alpha (P/Q)^i} = scaled / P, where scaled belongs to step i + k + 1
            z = state.scaled
            exp = None if z.is_zero() else z.degree - ds.m
            s = state.digit
            rows.append({"i": i, "abs_exponent": exp, "in_Y": in_mahler_set(ds, exp),
                         "digit_degree": None if not s else s.degree})
    violations = [row["i"] for row in rows if not row["in_Y"]]
    if not violations:
        return MahlerReport(depth, rows, "minimal-from", 0)
    last = violations[-1]
    if depth - last >= tail:
        return MahlerReport(depth, rows, "minimal-from", last + 1)
    return MahlerReport(depth, rows, "not eventually minimal", last)
