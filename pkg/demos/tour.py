"""A walk through the X^2+1 over X digit system on F_2.

Run with ``python3 demos/tour.py``.
"""
from ratdigits.algebra import parse_field, parse_poly, polys_below_degree
from ratdigits.automata import build_mulX_transducer, fixed_point, substitution_rho
from ratdigits.digits import DigitString, DigitSystem, expand_poly, format_digit_string, normalize
from ratdigits.graph import bn_index, edge_labels
from ratdigits.laurent import ls_floor_frac, mahler_classify, parse_series, series_expand

F = parse_field("2")
ds = DigitSystem(parse_poly("X^2+1", F), parse_poly("X", F))

print("Every polynomial has exactly one expansion in base (X^2+1)/X:")
for w in polys_below_degree(F, 3):
    print(f"  {str(w):>9}  ->  {format_digit_string(expand_poly(ds, w))}")

# the graph: each node v has r outgoing labels, one of them of small degree
print("\nLabels leaving the first few nodes, in string order:")
for n in range(6):
    v = bn_index(ds, n)
    print(f"  b_{n} = {str(v):<7} labels {', '.join(map(str, edge_labels(ds, v)))}")

seq = fixed_point(substitution_rho(ds), parse_poly("0", F), 16)
print("\nLast digits of b_0, b_1, ... from the substitution fixed point:")
print("  " + ",".join(map(str, seq)))

t = build_mulX_transducer(ds)
w = parse_poly("X^2", F)
digits = expand_poly(ds, w).digits
print(f"\nMultiplying by X with a two-state transducer: {format_digit_string(DigitString(digits))}"
      f" -> {format_digit_string(DigitString(normalize(t.run(digits))))}")

alpha = parse_series("X+1 ; periodic(|1,1,0)", F).to_series(-80)
whole, frac = ls_floor_frac(alpha)
print("\nA Laurent series with a repeating tail, and its two parts:")
print("  alpha   ", format_digit_string(series_expand(ds, alpha, 10)))
print("  {alpha} ", format_digit_string(series_expand(ds, frac, 10)))

report = mahler_classify(ds, frac, 30)
print(f"\nIts fractional part over 30 steps: {report.verdict} (index {report.index})")
