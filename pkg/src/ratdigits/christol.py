"""Empirical p-kernel estimates for digit sequences of Laurent series.

An automatic sequence has finitely many p-kernel subsequences
``(u[p^e k + c])_k``.  Counting distinct subsequences on finite prefixes
gives a lower bound that stays flat for automatic sequences and keeps
growing for the others; this is evidence, never proof.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import FieldSpec, Poly, format_poly, poly_to_index
from .automata import Dfao
from .digits import DigitSystem
from .errors import ShapeError
from .laurent import LazySeries, rational_series, series_expand


@dataclass
class CoefficientSource:
    """Deterministic rule for the coefficient of X^-j (j >= 1) plus a polynomial part."""

    name: str
    coefficient: Callable[[int], int]
    poly: Poly
    algebraic: bool | None = None

    def to_lazy(self) -> LazySeries:
        return LazySeries(self.poly, self.coefficient, label=self.name)

    @classmethod
    def powers_of_two(cls, field: FieldSpec):
        """sum_{i>=0} X^(-2^i); in characteristic 2 it solves a^2 + a + 1/X = 0."""
        return cls("powers-of-two", lambda j: 1 if j & (j - 1) == 0 else 0,
                   Poly.zero(field), algebraic=field.p == 2)

    @classmethod
    def squares(cls, field: FieldSpec):
        """sum_{i>=1} X^(-i^2), whose coefficient sequence is not automatic."""
        def coefficient(j):
            k = int(round(j ** 0.5))
            return 1 if k * k == j else 0
        return cls("squares", coefficient, Poly.zero(field), algebraic=False)

    @classmethod
    def rational(cls, num: Poly, den: Poly):
        lazy = rational_series(num, den)
        return cls(f"rational({format_poly(num)}/{format_poly(den)})", lazy.coefficient,
                   lazy.poly, algebraic=True)

    @classmethod
    def from_dfao(cls, dfao: Dfao, p: int, field: FieldSpec, name: str = "dfao",
                  encode: Callable | None = None):
        """Coefficient of X^-j is the DFAO output on the base-p digits of j.

        Digits are written least significant first, so the machine (which
        reads right to left) sees the most significant digit first.  Outputs
        go through ``encode``; by default a polynomial output contributes its
        constant term.
        """
        if encode is None:
            def encode(out):
                return out.coeff(0) if isinstance(out, Poly) else int(out)

        def coefficient(j):
            word = []
            while j:
                j, d = divmod(j, p)
                word.append(d)
            return encode(dfao.run(word))
        return cls(name, coefficient, Poly.zero(field), algebraic=True)


@dataclass
class KernelReport:
    p: int
    max_e: int
    depth: int
    counts: list                      # cumulative distinct classes for e = 0..max_e
    profile: dict = field(default_factory=dict)   # depth -> counts
    verdict: str = ""
    window: list = field(default_factory=list)

    def to_dict(self):
        return {"p": self.p, "max_e": self.max_e, "depth": self.depth, "counts": self.counts,
                "profile": {str(k): v for k, v in self.profile.items()},
                "window": self.window, "verdict": self.verdict}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["e", "depth", "classes"])
        for d, counts in sorted(self.profile.items()):
            for e, c in enumerate(counts):
                w.writerow([e, d, c])
        return buf.getvalue()


def _kernel_counts(seq: np.ndarray, p: int, max_e: int) -> list[int]:
    L = len(seq) // p**max_e
    seen: set = set()
    counts = []
    for e in range(max_e + 1):
        step = p**e
        for c in range(step):
            seen.add(seq[c::step][:L].tobytes())
        counts.append(len(seen))
    return counts


def p_kernel_estimate(seq, p: int, max_e: int, checkpoints=None, window: int = 3) -> KernelReport:
    """Distinct p-kernel prefixes of ``seq`` for e <= max_e.

    Counts are cumulative over e, so each list is a growth profile in e.
    ``checkpoints`` are prefix lengths (default: powers of p from p^max_e up
    to len(seq)).  The verdict is "bounded-so-far" when, at each of the last
    ``window`` checkpoints, level max_e adds no new class and the total does
    not move between checkpoints; otherwise "growing-so-far".
    """
    seq = np.asarray(seq, dtype=np.int64)
    n = len(seq)
    if max_e < 1:
        raise ValueError("max_e must be at least 1")
    if n < p**max_e:
        raise ValueError(f"sequence of length {n} is shorter than p^max_e = {p**max_e}")
    if checkpoints is None:
        checkpoints = []
        d = p**max_e
        while d <= n:
            checkpoints.append(d)
            d *= p
    profile = {d: _kernel_counts(seq[:d], p, max_e) for d in sorted(checkpoints)}
    counts = profile[n] if n in profile else _kernel_counts(seq, p, max_e)
    last = sorted(profile)[-window:]
    saturated = all(profile[d][-1] == profile[d][-2] for d in last)
    flat = len({profile[d][-1] for d in last}) == 1
    verdict = "bounded-so-far" if saturated and flat else "growing-so-far"
    return KernelReport(p, max_e, n, counts, profile, verdict, last)


def digit_sequence(ds: DigitSystem, lazy: LazySeries, depth: int) -> np.ndarray:
    """Symbols u_0 .. u_depth: u_0 = s_0 and u_j = s_{-j}, each coded by its index."""
    r, n = ds.r_exp, ds.n
    floor = -(depth + 1) * r - n
    alpha = lazy.to_series(floor)
    if alpha.floor > floor:
        raise ShapeError("source does not provide enough coefficients")
    if alpha.degree >= 0:
        raise ShapeError("digit kernels are computed for series in the unit disk")
    expansion = series_expand(ds, alpha, depth)
    syms = [0] + [poly_to_index(s) for s in expansion.fractional_digits]
    return np.array(syms, dtype=np.int64)


def digit_kernel(ds: DigitSystem, src: CoefficientSource | LazySeries, depth: int, max_e: int,
                 checkpoints=None, window: int = 3) -> KernelReport:
    """Kernel estimate of the digit sequence of a source series."""
    lazy = src.to_lazy() if isinstance(src, CoefficientSource) else src
    seq = digit_sequence(ds, lazy, depth)
    return p_kernel_estimate(seq[:depth], ds.field.p, max_e, checkpoints, window)
