"""Kernel counts of digit sequences: algebraic inputs level off, squares do not.

Run with ``python3 demos/kernels.py``; it takes a few seconds.
"""
from ratdigits.algebra import parse_field, parse_poly
from ratdigits.christol import CoefficientSource, digit_kernel
from ratdigits.digits import DigitSystem

F = parse_field("2")
systems = {"(X^2+1)/X": DigitSystem(parse_poly("X^2+1", F), parse_poly("X", F)),
           "X^2/(X+1)": DigitSystem(parse_poly("X^2", F), parse_poly("X+1", F))}
sources = [CoefficientSource.powers_of_two(F), CoefficientSource.squares(F),
           CoefficientSource.rational(parse_poly("X", F), parse_poly("X^3+1", F))]

for label, ds in systems.items():
    print(f"base {label}")
    for src in sources:
        rep = digit_kernel(ds, src, 4096, 6)
        print(f"  {src.name:<22} classes by e: {rep.counts}  {rep.verdict}")
