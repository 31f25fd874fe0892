"""Rational-base digit systems P/Q over finite fields.

Polynomials and formal Laurent series in 1/X are expanded in base P/Q, with
the automata, expansion graph, closed formulas and empirical checks that go
with such expansions.
"""

from .algebra import (FieldSpec, Poly, format_poly, index_to_poly, parse_field, parse_poly,
                      poly_divrem, poly_gcd, poly_to_index, polys_below_degree)
from .automata import (Dfao, Substitution, Transducer, build_mulX_transducer, build_s0_dfao,
                       build_sm_dfao, export_dot, fixed_point, mul_by_poly, substitution_rho)
from .christol import CoefficientSource, KernelReport, digit_kernel, p_kernel_estimate
from .cone import ConeSeries, db_formula, eval_back_poly, eval_back_series, inv_f, pdb_formula
from .digits import (DigitString, DigitSystem, digit_function, evaluate, expand_poly,
                     format_digit_string, new_digit_system, parse_digit_string, right_extensions)
from .errors import (BudgetExceeded, DegreeError, DigitSystemError, FieldError, InsufficientPrecision,
                     NotAnEdge, NotCoprimeError, NotProlongable, ParseError, ShapeError, ZeroBaseError)
from .graph import (bn_index, check_structure, child, edge_labels, enumerate_paths, level_of,
                    min_label, minimal_string, periodic_paths)
from .laurent import (LaurentSeries, LazySeries, ls_floor_frac, ls_from_rational, mahler_classify,
                      parse_series, series_expand)

__version__ = "0.1.0"

__all__ = [
    "FieldSpec", "Poly", "format_poly", "index_to_poly", "parse_field", "parse_poly",
    "poly_divrem", "poly_gcd", "poly_to_index", "polys_below_degree",
    "Dfao", "Substitution", "Transducer", "build_mulX_transducer", "build_s0_dfao",
    "build_sm_dfao", "export_dot", "fixed_point", "mul_by_poly", "substitution_rho",
    "CoefficientSource", "KernelReport", "digit_kernel", "p_kernel_estimate",
    "ConeSeries", "db_formula", "eval_back_poly", "eval_back_series", "inv_f", "pdb_formula",
    "DigitString", "DigitSystem", "digit_function", "evaluate", "expand_poly",
    "format_digit_string", "new_digit_system", "parse_digit_string", "right_extensions",
    "BudgetExceeded", "DegreeError", "DigitSystemError", "FieldError", "InsufficientPrecision",
    "NotAnEdge", "NotCoprimeError", "NotProlongable", "ParseError", "ShapeError", "ZeroBaseError",
    "bn_index", "check_structure", "child", "edge_labels", "enumerate_paths", "level_of",
    "min_label", "minimal_string", "periodic_paths",
    "LaurentSeries", "LazySeries", "ls_floor_frac", "ls_from_rational", "mahler_classify",
    "parse_series", "series_expand",
]
