"""Bivariate cone series in (b, X) and closed formulas for digit expansions.

Digits of w (or of a Laurent series) are read off as the b-coefficients of
an element of a two-variable series ring, where ``f = Q b - P`` is
invertible in two ways: around the point (0, deg P) in the cone A1 spanned
by (0,-1), (1,-r), and around (1, deg Q) in the cone A2 spanned by (0,-1),
(-1, r), with r = deg P - deg Q.

A point ``a = s (0,-1) + t y`` of a cone has order ``s + t``.  A
:class:`ConeSeries` is exact for every point whose order relative to its
anchor is at most ``order``; terms beyond that are dropped.
"""

from __future__ import annotations

import math

from .algebra import FieldSpec, Poly, format_poly
from .digits import DigitSystem
from .errors import InsufficientPrecision, ShapeError
from .laurent import LaurentSeries, shift_into_disk

A1, A2 = "A1", "A2"


def _coords(cone: str, r: int, di: int, dj: int):
    """(s, t) with (di, dj) = s (0,-1) + t y for the cone's second generator y."""
    t = di if cone == A1 else -di
    s = -dj - r * di
    return s, t


class ConeSeries:
    """Truncated series sum a_ij b^i X^j divided by an optional X-polynomial ``den``.

    ``low_column`` marks a digit series whose b-columns are known only down
    to that exponent; None means no such limit.
    """

    __slots__ = ("field", "terms", "cone", "r", "anchor", "order", "den", "low_column")

    def __init__(self, field: FieldSpec, terms: dict, cone: str, r: int, anchor=None,
                 order=math.inf, den: Poly | None = None, low_column: int | None = None):
        if cone not in (A1, A2):
            raise ValueError(f"unknown cone {cone!r}")
        self.field, self.cone, self.r = field, cone, r
        terms = {k: c for k, c in terms.items() if c}
        self.anchor = tuple(anchor) if anchor is not None else enclosing_anchor(cone, r, terms)
        self.order = order
        kept = {}
        for (i, j), c in terms.items():
            s, t = _coords(cone, r, i - self.anchor[0], j - self.anchor[1])
            if s < 0 or t < 0:
                raise ValueError(f"term b^{i} X^{j} lies outside {cone} + {self.anchor}")
            if s + t <= order:
                kept[(i, j)] = c
        self.terms = kept
        self.den = den if den is not None else Poly.one(field)
        self.low_column = low_column

    # -- constructors

    @classmethod
    def from_poly(cls, w: Poly, cone: str, r: int):
        """w in X only, as the b^0 column."""
        terms = {(0, j): c for j, c in enumerate(w.coeffs) if c}
        anchor = (0, max(w.degree, 0)) if w else (0, 0)
        return cls(w.field, terms, cone, r, anchor)

    @classmethod
    def from_laurent(cls, alpha: LaurentSeries, cone: str, r: int, top: int | None = None):
        """A Laurent series in X as the b^0 column, exact down to its floor."""
        top = max(alpha.degree if alpha else alpha.floor - 1, alpha.floor - 1) if top is None else top
        terms = {(0, alpha.floor + k): int(c) for k, c in enumerate(alpha.coeffs) if c}
        # the b^0 column below the anchor has order top - j
        return cls(alpha.field, terms, cone, r, (0, top), top - alpha.floor)

    @classmethod
    def f_of(cls, ds: DigitSystem, cone: str):
        """f = Q b - P, anchored at (0, deg P) in A1 or (1, deg Q) in A2."""
        F = ds.field
        terms = {}
        for j, c in enumerate(ds.Q.coeffs):
            if c:
                terms[(1, j)] = c
        for j, c in enumerate(ds.P.coeffs):
            if c:
                terms[(0, j)] = F.neg(c)
        anchor = (0, ds.m) if cone == A1 else (1, ds.n)
        return cls(F, terms, cone, ds.r_exp, anchor)

    def _like(self, terms, anchor=None, order=None, den=None, shift=0):
        low = None if self.low_column is None else self.low_column + shift
        return ConeSeries(self.field, terms, self.cone, self.r,
                          self.anchor if anchor is None else anchor,
                          self.order if order is None else order,
                          self.den if den is None else den, low)

    # -- queries

    def ord_of(self, point) -> int:
        s, t = _coords(self.cone, self.r, point[0] - self.anchor[0], point[1] - self.anchor[1])
        return s + t

    def coeff(self, i: int, j: int) -> int:
        if self.ord_of((i, j)) > self.order:
            raise InsufficientPrecision(f"b^{i} X^{j} lies beyond the truncation order")
        return self.terms.get((i, j), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def b_column(self, i: int) -> Poly:
        """Coefficient of b^i in the numerator as a polynomial in X (needs j >= 0)."""
        col = {j: c for (ii, j), c in self.terms.items() if ii == i}
        if any(j < 0 for j in col):
            raise ShapeError(f"b^{i} column has negative powers of X")
        size = max(col, default=-1) + 1
        return Poly(self.field, [col.get(j, 0) for j in range(size)])

    def b_range(self):
        idx = [i for i, _ in self.terms]
        return (min(idx), max(idx)) if idx else (0, -1)

    # -- arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            return ConeSeries.from_poly(other, self.cone, self.r)
        return other

    def _check(self, other):
        if self.field != other.field or self.cone != other.cone or self.r != other.r:
            raise ValueError("cone series live in different rings")

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        a, b = self, other
        if a.den != b.den:
            a, b = a.mul_den_free(b.den), b.mul_den_free(a.den)
            den = self.den * other.den
        else:
            den = a.den
        anchor = enclosing_anchor(self.cone, self.r, {}, extra=(a.anchor, b.anchor))
        order = min(a.order + _ord_between(self.cone, self.r, anchor, a.anchor),
                    b.order + _ord_between(self.cone, self.r, anchor, b.anchor))
        terms = dict(a.terms)
        add = self.field.add_t
        for k, c in b.terms.items():
            terms[k] = add[terms.get(k, 0)][c]
        return ConeSeries(self.field, terms, self.cone, self.r, anchor, order, den)

    def __neg__(self):
        neg = self.field.neg_t
        return self._like({k: neg[c] for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def mul_den_free(self, w: Poly):
        """Multiply the numerator by the X-polynomial w, keeping ``den``."""
        return ConeSeries(self.field, _mul_terms(self.field, self.terms,
                                                 {(0, j): c for j, c in enumerate(w.coeffs) if c}),
                          self.cone, self.r, (self.anchor[0], self.anchor[1] + max(w.degree, 0)),
                          self.order, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        anchor = (self.anchor[0] + other.anchor[0], self.anchor[1] + other.anchor[1])
        order = min(self.order, other.order)
        terms = _mul_terms(self.field, self.terms, other.terms, self.cone, self.r, anchor, order)
        den = self.den * other.den
        return ConeSeries(self.field, terms, self.cone, self.r, anchor, order, den)

    def shift(self, di: int, dj: int):
        """Multiply by b^di X^dj."""
        terms = {(i + di, j + dj): c for (i, j), c in self.terms.items()}
        return self._like(terms, anchor=(self.anchor[0] + di, self.anchor[1] + dj), shift=di)

    def scale(self, c: int):
        mul = self.field.mul_t[c]
        return self._like({k: mul[x] for k, x in self.terms.items()})

    def truncate(self, order):
        return self._like(self.terms, order=min(order, self.order))

    # -- floor and fractional parts

    def floor_b(self):
        return self._like({k: c for k, c in self.terms.items() if k[0] >= 0})

    def frac_b(self):
        return self._like({k: c for k, c in self.terms.items() if k[0] < 0})

    def floor_X(self):
        return self._like({k: c for k, c in self.terms.items() if k[1] >= 0})

    def frac_X(self):
        return self._like({k: c for k, c in self.terms.items() if k[1] < 0})

    def floor_frac_b(self):
        return self.floor_b(), self.frac_b()

    def floor_frac_X(self):
        return self.floor_X(), self.frac_X()

    # -- comparison and output

    def agrees_with(self, other, order) -> bool:
        """Equal numerators (same den) on every point of order <= ``order`` relative to both anchors."""
        if self.den != other.den:
            raise ValueError("compare series with equal denominators")
        order = min(order, self.order + 0, other.order)
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            if self.ord_of(k) <= order and other.ord_of(k) <= order:
                if self.terms.get(k, 0) != other.terms.get(k, 0):
                    return False
        return True

    def dump(self) -> str:
        fmt = self.field.format_element
        order = "inf" if self.order == math.inf else str(self.order)
        lines = [f"# cone={self.cone} r={self.r} anchor={self.anchor} order={order} "
                 f"den={format_poly(self.den)}"]
        for (i, j) in sorted(self.terms):
            lines.append(f"{i} {j} {fmt(self.terms[(i, j)])}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"ConeSeries({self.cone}, anchor={self.anchor}, order={self.order}, terms={len(self.terms)})"


def _ord_between(cone, r, anchor, point):
    s, t = _coords(cone, r, point[0] - anchor[0], point[1] - anchor[1])
    return s + t


def enclosing_anchor(cone: str, r: int, terms: dict, extra=()):
    """Tightest m with every point of ``terms`` (and of ``extra``) in cone + m."""
    pts = list(terms) + list(extra)
    if not pts:
        return (0, 0)
    if cone == A1:
        ai = min(i for i, _ in pts)
        aj = max(j + r * (i - ai) for i, j in pts)
    else:
        ai = max(i for i, _ in pts)
        aj = max(j - r * (ai - i) for i, j in pts)
    return (ai, aj)


def _mul_terms(F, a: dict, b: dict, cone=None, r=None, anchor=None, order=math.inf):
    """Product of term dictionaries, dropping points beyond ``order``."""
    add, mul = F.add_t, F.mul_t
    out: dict = {}
    for (i1, j1), c1 in a.items():
        row = mul[c1]
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            if order != math.inf:
                s, t = _coords(cone, r, k[0] - anchor[0], k[1] - anchor[1])
                if s + t > order:
                    continue
            out[k] = add[out.get(k, 0)][row[c2]]
    return {k: c for k, c in out.items() if c}


# ---------------------------------------------------------------- inverses of f


def inv_f(ds: DigitSystem, which: str, order: int) -> ConeSeries:
    """Inverse of f = Q b - P around the P-anchor (cone A1) or Q-anchor (cone A2).

    Computed as a geometric series, iterated until every term of order at
    most ``order`` is stable.
    """
    F, r = ds.field, ds.r_exp
    if which in ("P", "P-anchor", A1):
        cone, c = A1, F.inv(ds.P.lead)
        f = ConeSeries.f_of(ds, A1)
        # f X^-m / p_m = -1 + ..., so R = 1 + f X^-m / p_m has no constant term
        unit = f.shift(0, -ds.m).scale(c)
        ratio = (unit + ConeSeries.from_poly(Poly.one(F), cone, r))
        ratio = ConeSeries(F, ratio.terms, cone, r, (0, 0))
        lead = ConeSeries(F, {(0, -ds.m): F.neg(c)}, cone, r, (0, -ds.m))
    elif which in ("Q", "Q-anchor", A2):
        cone, c = A2, F.inv(ds.Q.lead)
        f = ConeSeries.f_of(ds, A2)
        unit = f.shift(-1, -ds.n).scale(c)
        ratio = ConeSeries.from_poly(Poly.one(F), cone, r) - unit
        ratio = ConeSeries(F, ratio.terms, cone, r, (0, 0))
        lead = ConeSeries(F, {(-1, -ds.n): c}, cone, r, (-1, -ds.n))
    else:
        raise ValueError("which must be 'P' or 'Q'")
    one = ConeSeries(F, {(0, 0): 1}, cone, r, (0, 0), order)
    total = one
    while True:
        nxt = one + (ratio * total).truncate(order)
        nxt = ConeSeries(F, nxt.terms, cone, r, (0, 0), order)
        if nxt.terms == total.terms:
            break
        total = nxt
    return lead * total


# ---------------------------------------------------------------- closed formulas


def pdb_formula(ds: DigitSystem, w: Poly, check_alternative: bool = False) -> ConeSeries:
    """Digit expansion of w as sum (s_i / Q) b^i, i.e. numerator sum s_i b^i over den Q."""
    F, r = ds.field, ds.r_exp
    if not w:
        return ConeSeries(F, {}, A1, r, (0, 0), den=ds.Q)
    Qw = ds.Q * w
    top = Qw.degree - ds.m
    # the non-negative X part of f_P^-1 Q w has order <= top + top // r
    order = max(top, 0) + max(top, 0) // r + 1
    inv = inv_f(ds, "P", order)
    prod = inv * ConeSeries.from_poly(Qw, A1, r)
    whole = prod.floor_X()
    whole = ConeSeries(F, whole.terms, A1, r)
    f = ConeSeries.f_of(ds, A1)
    numer = ConeSeries.from_poly(Qw, A1, r) - f * whole
    if check_alternative:
        alt = f * prod.frac_X()
        if not alt.agrees_with(numer, order - 1):
            raise ArithmeticError("the two closed forms disagree")
    return ConeSeries(F, numer.terms, A1, r, den=ds.Q)


def eval_back_poly(ds: DigitSystem, y: ConeSeries) -> Poly:
    """Recover w from its digit series (numerator sum s_i b^i over den Q)."""
    F, r = ds.field, ds.r_exp
    if y.den != ds.Q:
        y = _rescale_den(ds, y)
    if y.is_zero():
        return Poly.zero(F)
    lo, hi = y.b_range()
    if lo < 0:
        raise ShapeError("negative powers of b in a polynomial digit series")
    for i in range(lo, hi + 1):
        col = y.b_column(i)
        if col.degree >= ds.m:
            raise ShapeError(f"coefficient of b^{i} is not a digit")
    numer = ConeSeries(F, y.terms, A2, r)
    # points of the floor with i >= 0 and j >= 0 have bounded order
    probe = ConeSeries(F, {}, A2, r, (numer.anchor[0] - 1, numer.anchor[1] - ds.n))
    order = max(probe.ord_of((0, 0)), probe.ord_of((hi, 0))) + ds.m + 1
    inv = inv_f(ds, "Q", order)
    g = (inv * numer).floor_b()
    f = ConeSeries.f_of(ds, A2)
    Qw = numer - f * g
    rest = {k: c for k, c in Qw.terms.items() if not (k[0] == 0 and k[1] >= 0)}
    if rest:
        raise ShapeError("series does not evaluate to a polynomial")
    col = {j: c for (_, j), c in Qw.terms.items()}
    Qw_poly = Poly(F, [col.get(j, 0) for j in range(max(col, default=-1) + 1)])
    try:
        return Qw_poly.exact_div(ds.Q)
    except ArithmeticError:
        raise ShapeError("series does not evaluate to a polynomial") from None


def _rescale_den(ds, y):
    if y.den == Poly.one(ds.field):
        return ConeSeries(y.field, y.mul_den_free(ds.Q).terms, y.cone, y.r, den=ds.Q)
    raise ShapeError("denominator must be Q or 1")


def db_formula(ds: DigitSystem, alpha: LaurentSeries, ndigits: int) -> ConeSeries:
    """Digit series of alpha with ``ndigits`` fractional digit columns.

    The numerator is sum s_i b^i over den Q; columns b^-1 .. b^-ndigits
    carry the fractional digits and b^0 .. b^(k-1) the integer ones.
    """
    F, r, n = ds.field, ds.r_exp, ds.n
    shifted, k = shift_into_disk(ds, alpha)
    total = ndigits + k
    if shifted.is_zero():
        return ConeSeries(F, {}, A2, r, (0, 0), den=ds.Q)
    # column b^-t of the X-floor has order up to (r + 1) t - 1 relative to (-1, -1)
    order = (r + 1) * (total + 1) + n
    need_floor = -1 - order
    if shifted.floor > need_floor:
        raise InsufficientPrecision(
            f"{total} digit columns need the series to degree {need_floor}, have {shifted.floor}")
    a = ConeSeries.from_laurent(shifted, A2, r, top=-1).truncate(order)
    Qa = a * ConeSeries.from_poly(ds.Q, A2, r)
    inv = inv_f(ds, "Q", order)
    g = (inv * Qa).floor_X()
    g = ConeSeries(F, {kk: c for kk, c in g.terms.items() if kk[0] >= -(total + 1)}, A2, r)
    numer = ConeSeries.f_of(ds, A2) * g
    terms = {(i + k, j): c for (i, j), c in numer.terms.items() if -total <= i <= -1}
    return ConeSeries(F, terms, A2, r, den=ds.Q, low_column=-ndigits)


def db_nodes(ds: DigitSystem, alpha: LaurentSeries, ndigits: int) -> list[Poly]:
    """The X-floor coefficients v_{-1}, v_{-2}, ... used by the series formula (alpha in the unit disk)."""
    F, r, n = ds.field, ds.r_exp, ds.n
    if alpha.degree >= 0:
        raise ValueError("series must lie in the unit disk")
    order = (r + 1) * (ndigits + 1) + n
    if alpha.floor > -1 - order:
        raise InsufficientPrecision("series not known to enough precision")
    a = ConeSeries.from_laurent(alpha, A2, r, top=-1).truncate(order)
    g = (inv_f(ds, "Q", order) * (a * ConeSeries.from_poly(ds.Q, A2, r))).floor_X()
    return [ConeSeries(F, g.terms, A2, r).b_column(-i) for i in range(1, ndigits + 2)]


def digits_of_series(y: ConeSeries, lo: int, hi: int) -> list[Poly]:
    """Numerator columns b^hi down to b^lo (missing columns are zero)."""
    return [y.b_column(i) for i in range(hi, lo - 1, -1)]


def eval_back_series(ds: DigitSystem, psi: ConeSeries, floor: int | None = None) -> LaurentSeries:
    """Recover alpha from its digit series (numerator over den Q) down to ``floor``."""
    F, r, m = ds.field, ds.r_exp, ds.m
    if psi.den != ds.Q:
        raise ShapeError("expected a digit series with denominator Q")
    if psi.is_zero():
        return LaurentSeries.zero(F, floor if floor is not None else -1)
    lo, hi = psi.b_range()
    for i in range(lo, hi + 1):
        if psi.b_column(i).degree >= m:
            raise ShapeError(f"coefficient of b^{i} is not a digit")
    if psi.low_column is not None:
        lo = min(lo, psi.low_column)
    if hi >= 0:
        # integer digits: evaluate b^-k psi in the unit disk, then scale by (P/Q)^k
        k = hi + 1
        inner_floor = None if floor is None else floor - k * r
        inner = eval_back_series(ds, psi.shift(-k, 0), inner_floor)
        return inner.mul_poly(ds.P**k).div_poly(ds.Q**k).truncate(inner.floor + k * r)
    # digits down to b^lo fix alpha down to degree r lo
    limit = r * lo
    floor = limit if floor is None else floor
    if floor < limit:
        raise InsufficientPrecision(f"digits down to b^{lo} determine alpha only to degree {limit}")
    # alpha = -P G_0 / Q with G_0 the b^0 column of f_P^-1 times the numerator
    jmin = floor + ds.n - m
    inv = inv_f(ds, "P", -jmin + m + 1)
    add, mul = F.add_t, F.mul_t
    g0: dict = {}
    for (i1, j1), c1 in inv.terms.items():
        row = mul[c1]
        for (i2, j2), c2 in psi.terms.items():
            if i1 + i2 == 0 and j1 + j2 >= jmin:
                j = j1 + j2
                g0[j] = add[g0.get(j, 0)][row[c2]]
    g0_series = LaurentSeries.from_terms(F, g0, jmin)
    return -(g0_series.mul_poly(ds.P).div_poly(ds.Q))
