"""Finite verification suites shared by the CLI and the test-suite.

Each suite returns a :class:`VerifyReport`; none of them proves an infinite
statement, they check it exhaustively up to the stated bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .algebra import Poly, format_poly, polys_below_degree
from .cone import db_formula, pdb_formula
from .digits import DigitSystem, expand_poly, right_extensions
from .graph import check_structure, periodic_paths
from .laurent import ls_from_rational, series_expand


@dataclass
class VerifyReport:
    name: str
    passed: bool
    checked: int
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"suite": self.name, "passed": self.passed, "checked": self.checked,
                           "failures": self.failures, "details": self.details})

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        lines = [f"{self.name}: {status} ({self.checked} checked)"]
        lines += [f"  {k}: {v}" for k, v in self.details.items()]
        lines += [f"  failure: {f}" for f in self.failures[:10]]
        return "\n".join(lines)


def random_rationals(ds: DigitSystem, count: int, seed: int = 0, max_num_deg: int = 4, max_den_deg: int = 3):
    """Deterministic sample of (num, den) pairs with nonzero den."""
    rng = np.random.default_rng(seed)
    F = ds.field
    out = []
    while len(out) < count:
        dd = int(rng.integers(1, max_den_deg + 1))
        den = Poly(F, [int(c) for c in rng.integers(0, F.q, dd)] + [int(rng.integers(1, F.q))])
        nd = int(rng.integers(0, max_num_deg + 1))
        num = Poly(F, [int(c) for c in rng.integers(0, F.q, nd + 1)])
        if num:
            out.append((num, den))
    return out


def series_floor_for(ds: DigitSystem, num: Poly, den: Poly, ndigits: int) -> int:
    """A precision floor deep enough for both the algorithm and the closed formula."""
    r, n = ds.r_exp, ds.n
    deg = num.degree - den.degree
    k = deg // r + 1 if deg >= 0 else 0
    return -((r + 1) * (ndigits + k + 2) + n + 2)


def check_formulas(ds: DigitSystem, max_deg: int = 6, n_series: int = 10, ndigits: int = 10,
                   seed: int = 0) -> VerifyReport:
    """Closed formulas versus the digit algorithms, for polynomials and rational series."""
    failures, checked = [], 0
    for w in polys_below_degree(ds.field, max_deg + 1):
        digits = expand_poly(ds, w).digits
        y = pdb_formula(ds, w)
        hi = len(digits) - 1
        cols = tuple(y.b_column(i) for i in range(hi, -1, -1))
        checked += 1
        if cols != digits or (not y.is_zero() and y.b_range()[1] > hi):
            failures.append(f"poly {format_poly(w)}")
    for num, den in random_rationals(ds, n_series, seed):
        alpha = ls_from_rational(num, den, series_floor_for(ds, num, den, ndigits))
        expansion = series_expand(ds, alpha, ndigits)
        y = db_formula(ds, alpha, ndigits)
        k = expansion.radix_point
        cols = tuple(y.b_column(i) for i in range(k - 1, -ndigits - 1, -1))
        checked += 1
        if cols != tuple(expansion.digits):
            failures.append(f"series {format_poly(num)}/{format_poly(den)}")
    return VerifyReport("formulas", not failures, checked, failures,
                        {"max_deg": max_deg, "series": n_series, "digits": ndigits})


def check_uniqueness(ds: DigitSystem, max_len: int = 4) -> VerifyReport:
    """No digit string of length <= max_len with a nonzero digit evaluates to 0.

    Multiplying by Q^L, a string s_{L-1} ... s_0 evaluates to 0 exactly when
    sum s_i P^i Q^(L-1-i) vanishes.
    """
    digits = ds.digits()
    failures, checked = [], 0
    for L in range(1, max_len + 1):
        table = [[s * ds.P**i * ds.Q ** (L - 1 - i) for s in digits] for i in range(L)]
        for choice in product(range(len(digits)), repeat=L):
            if not any(choice):
                continue
            checked += 1
            total = Poly.zero(ds.field)
            for i, c in enumerate(choice):
                total = total + table[i][c]
            if not total:
                failures.append(",".join(format_poly(digits[c]) for c in reversed(choice)))
    return VerifyReport("uniqueness", not failures, checked, failures, {"max_len": max_len})


def check_graph(ds: DigitSystem, depth: int = 5) -> VerifyReport:
    info = check_structure(ds, depth)
    failures = ([f"out-degree at {v}" for v in info["bad_out_degree"]]
                + [f"degree does not grow on {a} -> {b}" for a, b in info["degree_violations"]])
    if info["self_loops"] != [format_poly(Poly.zero(ds.field))]:
        failures.append(f"self-loops at {info['self_loops']}")
    return VerifyReport("graph", not failures, info["nodes"], failures,
                        {"depth": depth, "arity": info["arity"], "self_loops": info["self_loops"]})


def check_periodicity(ds: DigitSystem, depth: int = 12, max_period: int = 4) -> VerifyReport:
    """Only the all-zero root path of length ``depth`` is periodic with period <= max_period."""
    periodic = periodic_paths(ds, depth, max_period)
    zero = Poly.zero(ds.field)
    bad = [",".join(map(format_poly, s)) for s in periodic if any(d != zero for d in s)]
    return VerifyReport("periodicity", not bad and len(periodic) == 1, ds.r**depth, bad,
                        {"depth": depth, "max_period": max_period, "periodic": len(periodic)})


def check_nonregularity(ds: DigitSystem, max_k: int = 2, max_deg: int = 3) -> VerifyReport:
    """R_k(v) and R_k(w) are disjoint whenever v and w differ mod Q^k."""
    polys = list(polys_below_degree(ds.field, max_deg + 1))
    failures, checked, classes = [], 0, {}
    for k in range(1, max_k + 1):
        mod = ds.Q**k
        ext = {v: frozenset(right_extensions(ds, v, k)) for v in polys}
        for v, w in combinations(polys, 2):
            if (v - w) % mod:
                checked += 1
                if ext[v] & ext[w]:
                    failures.append(f"k={k}: {format_poly(v)} and {format_poly(w)}")
        classes[k] = len({v % mod for v in polys})
    needed = {k: ds.field.q ** (k * ds.n) for k in classes}
    ok = not failures and all(classes[k] >= needed[k] for k in classes)
    return VerifyReport("nonregularity", ok, checked, failures,
                        {"separated_classes": classes, "required": needed})


SUITES = {
    "formulas": check_formulas,
    "uniqueness": check_uniqueness,
    "graph": check_graph,
    "periodicity": check_periodicity,
    "nonregularity": check_nonregularity,
}
