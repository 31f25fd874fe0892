"""Command-line interface: ``ratdigits [options] <command> ...``.

Exit codes: 0 success, 2 parse error, 3 invalid digit system or field,
4 budget or precision exceeded, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import automata, christol, digits, graph, laurent, verify
from .algebra import FieldSpec, format_poly, parse_field, parse_poly
from .errors import (BudgetExceeded, DigitSystemError, FieldError, InsufficientPrecision,
                     NotProlongable, ParseError, ShapeError)

EXIT_OK, EXIT_PARSE, EXIT_SYSTEM, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4, 5
BUDGET_ENV = "RATDIGITS_BUDGET"


@dataclass
class CliConfig:
    field: FieldSpec
    P: str
    Q: str
    format: str
    budget: int
    seed: int

    def digit_system(self) -> digits.DigitSystem:
        return digits.new_digit_system(parse_poly(self.P, self.field), parse_poly(self.Q, self.field))


class UsageError(Exception):
    """Bad combination of options."""


def _default_budget() -> int:
    text = os.environ.get(BUDGET_ENV)
    if not text:
        return graph.DEFAULT_PATH_BUDGET
    try:
        value = int(text)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV} must be an integer, got {text!r}") from None
    if value <= 0:
        raise UsageError(f"{BUDGET_ENV} must be positive")
    return value


def _inputs(values):
    """Expand "-" into the non-empty lines of stdin."""
    for v in values:
        if v == "-":
            yield from (line.strip() for line in sys.stdin if line.strip())
        else:
            yield v


def _letters(seq) -> str:
    return ",".join(format_poly(s) for s in seq)


def _series_text(ds, s: digits.DigitString) -> str:
    text = digits.format_digit_string(s)
    # the zero series has no integer digits; show it as 0.0,0,...
    if s.radix_point == 0 and not any(s.digits):
        text = "0" + text
    return text


def _need(fmt: str, allowed: tuple, cmd: str):
    if fmt not in allowed:
        raise UsageError(f"{cmd} supports --format {', '.join(allowed)}")


# ---------------------------------------------------------------- commands

def cmd_expand(cfg: CliConfig, args) -> int:
    _need(cfg.format, ("plain", "json"), "expand")
    ds = cfg.digit_system()
    for text in _inputs(args.poly):
        s = digits.expand_poly(ds, parse_poly(text, cfg.field))
        print(digits.digit_string_json(ds, s) if cfg.format == "json" else digits.format_digit_string(s))
    return EXIT_OK


def _series_floor(ds, ndigits: int, extra: int = 0) -> int:
    return -(ndigits + 1 + extra) * ds.r_exp - ds.n


def cmd_series_expand(cfg: CliConfig, args) -> int:
    _need(cfg.format, ("plain", "json"), "series-expand")
    ds = cfg.digit_system()
    if args.digits < 0:
        raise UsageError("--digits must be nonnegative")
    for text in _inputs(args.series):
        lazy = laurent.parse_series(text, cfg.field)
        alpha = lazy.to_series(_series_floor(ds, args.digits))
        whole, frac = laurent.ls_floor_frac(alpha)
        if args.part == "floor":
            alpha = laurent.LaurentSeries.from_poly(whole, alpha.floor)
        elif args.part == "frac":
            alpha = frac
        s = laurent.series_expand(ds, alpha, args.digits)
        if cfg.format == "json":
            obj = json.loads(digits.digit_string_json(ds, s))
            obj["depth"] = args.digits
            print(json.dumps(obj))
        else:
            print(_series_text(ds, s))
    return EXIT_OK


def _machine(ds, args, budget):
    if args.kind == "s0-dfao":
        return automata.build_s0_dfao(ds)
    if args.kind == "sm-dfao":
        if args.m is None:
            raise UsageError("sm-dfao needs --m")
        return automata.build_sm_dfao(ds, args.m, budget=budget)
    if args.kind == "mulx":
        return automata.build_mulX_transducer(ds)
    return automata.substitution_rho(ds)


def cmd_machine(cfg: CliConfig, args) -> int:
    ds = cfg.digit_system()
    fmt = "dot" if args.export_dot else cfg.format
    machine = _machine(ds, args, cfg.budget)
    if args.kind == "substitution":
        if args.terms is not None:
            seed = parse_poly(args.seed_letter, cfg.field)
            seq = automata.fixed_point(machine, seed, args.terms)
            print(json.dumps([format_poly(a) for a in seq]) if fmt == "json" else _letters(seq))
        elif fmt == "json":
            print(json.dumps(machine.to_dict()))
        else:
            for a in machine.alphabet:
                print(f"{format_poly(a)} -> {_letters(machine.rule[a])}")
        return EXIT_OK
    if args.run is not None:
        if isinstance(machine, automata.Dfao):
            w = parse_poly(args.run, cfg.field)
            result = format_poly(machine.run_poly(w))
        else:
            word = digits.parse_digit_string(args.run, cfg.field).digits
            raw = machine.run(word)
            result = _letters(raw if args.raw else digits.normalize(raw))
        print(json.dumps({"output": result}) if fmt == "json" else result)
        return EXIT_OK
    if fmt == "dot":
        print(automata.export_dot(machine, args.kind.replace("-", "_")), end="")
    elif fmt == "json":
        print(automata.machine_json(machine))
    else:
        d = machine.to_dict()
        print(f"{len(d['states'])} states, initial {d['states'][d['initial']]}")
        for t in d["transitions"]:
            out = f" / {t['out']}" if "out" in t else ""
            print(f"{d['states'][t['from']]} --{t['in']}{out}--> {d['states'][t['to']]}")
    return EXIT_OK


def cmd_verify(cfg: CliConfig, args) -> int:
    _need(cfg.format, ("plain", "json"), "verify")
    ds = cfg.digit_system()
    suite = args.suite
    if suite == "formulas":
        rep = verify.check_formulas(ds, args.max_deg, args.series, args.digits, seed=cfg.seed)
    elif suite == "uniqueness":
        count = ds.num_digits**args.max_len
        if count > cfg.budget:
            raise BudgetExceeded(f"{count} strings exceed the budget {cfg.budget}")
        rep = verify.check_uniqueness(ds, args.max_len)
    elif suite == "graph":
        rep = verify.check_graph(ds, args.depth)
    elif suite == "periodicity":
        if ds.r**args.depth > cfg.budget:
            raise BudgetExceeded(f"{ds.r}^{args.depth} paths exceed the budget {cfg.budget}")
        rep = verify.check_periodicity(ds, args.depth, args.max_period)
    else:
        rep = verify.check_nonregularity(ds, args.max_k, args.max_deg)
    print(rep.to_json() if cfg.format == "json" else rep)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_mahler(cfg: CliConfig, args) -> int:
    _need(cfg.format, ("plain", "json", "csv"), "mahler")
    ds = cfg.digit_system()
    lazy = laurent.parse_series(args.series, cfg.field)
    alpha = lazy.to_series(_series_floor(ds, args.depth, extra=1))
    rep = laurent.mahler_classify(ds, alpha, args.depth, args.tail)
    if cfg.format == "json":
        print(rep.to_json())
    elif cfg.format == "csv":
        print("i,abs_exponent,in_Y,digit_degree")
        for row in rep.rows:
            cells = ["" if row[k] is None else row[k] for k in ("i", "abs_exponent", "in_Y", "digit_degree")]
            print(",".join(str(c) for c in cells))
    else:
        print(f"{rep.verdict} {rep.index} (depth {rep.depth})")
    return EXIT_OK


def _kernel_source(text: str, field: FieldSpec):
    builtin = {"powers-of-two": christol.CoefficientSource.powers_of_two,
               "squares": christol.CoefficientSource.squares}
    if text in builtin:
        return builtin[text](field)
    return laurent.parse_series(text, field)


def cmd_kernel(cfg: CliConfig, args) -> int:
    _need(cfg.format, ("plain", "json", "csv"), "kernel")
    ds = cfg.digit_system()
    if args.max_e < 1 or ds.field.p**args.max_e > args.depth:
        raise UsageError("need 1 <= max-e and p^max-e <= depth")
    if args.depth > cfg.budget:
        raise BudgetExceeded(f"depth {args.depth} exceeds the budget {cfg.budget}")
    rep = christol.digit_kernel(ds, _kernel_source(args.source, cfg.field), args.depth, args.max_e)
    if cfg.format == "json":
        print(rep.to_json())
    elif cfg.format == "csv":
        print(rep.to_csv(), end="")
    else:
        for d, counts in sorted(rep.profile.items()):
            print(f"depth {d}: {' '.join(map(str, counts))}")
        print(rep.verdict)
    return EXIT_OK


def cmd_graph(cfg: CliConfig, args) -> int:
    ds = cfg.digit_system()
    if ds.r**args.depth > cfg.budget:
        raise BudgetExceeded(f"{ds.r}^{args.depth} nodes exceed the budget {cfg.budget}")
    fmt = "dot" if args.export_dot else cfg.format
    if args.bn is not None:
        polys = [format_poly(graph.bn_index(ds, i)) for i in range(args.bn)]
        print(json.dumps(polys) if fmt == "json" else "\n".join(polys))
    elif fmt == "dot":
        print(graph.graph_dot(ds, args.depth), end="")
    elif fmt == "json":
        paths = graph.enumerate_paths(ds, args.depth, budget=cfg.budget, with_nodes=True)
        print(json.dumps([{"labels": [format_poly(s) for s in labels], "node": format_poly(v)}
                          for labels, v in paths]))
    else:
        for labels, v in graph.enumerate_paths(ds, args.depth, budget=cfg.budget, with_nodes=True):
            print(f"{_letters(labels)} -> {format_poly(v)}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _common_options(ap, defaults: bool):
    def d(value):
        return value if defaults else argparse.SUPPRESS

    ap.add_argument("--field", default=d("2"), help="p or p^s:modulus (default 2)")
    ap.add_argument("-P", default=d("X^2+1"), help="numerator of the base (default X^2+1)")
    ap.add_argument("-Q", default=d("X"), help="denominator of the base (default X)")
    ap.add_argument("--format", choices=("plain", "json", "dot", "csv"), default=d("plain"))
    ap.add_argument("--budget", type=int, default=d(None),
                    help=f"enumeration/state budget (default ${BUDGET_ENV} or {graph.DEFAULT_PATH_BUDGET})")
    ap.add_argument("--seed", type=int, default=d(0), help="seed for randomized checks")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ratdigits", description="Rational-base digit systems over finite fields.")
    _common_options(ap, defaults=True)
    # the same options are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _common_options(common, defaults=False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser(parents=[common], name="expand", help="P/Q expansion of polynomials")
    p.add_argument("poly", nargs="+", help='polynomial text, or "-" for stdin')
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser(parents=[common], name="series-expand", help="radix-pointed expansion of a Laurent series")
    p.add_argument("series", nargs="+", help='series text "poly ; pattern", or "-" for stdin')
    p.add_argument("--digits", type=int, default=12)
    p.add_argument("--part", choices=("all", "floor", "frac"), default="all")
    p.set_defaults(func=cmd_series_expand)

    p = sub.add_parser(parents=[common], name="machine", help="DFAOs, the multiply-by-X transducer and the substitution")
    p.add_argument("kind", choices=("s0-dfao", "sm-dfao", "mulx", "substitution"))
    p.add_argument("--m", type=int, help="digit index for sm-dfao")
    p.add_argument("--run", help="polynomial (DFAO) or digit string (mulx) to run")
    p.add_argument("--raw", action="store_true", help="keep leading zeros of transducer output")
    p.add_argument("--terms", type=int, help="print this many fixed-point letters")
    p.add_argument("--seed-letter", default="0", help="fixed-point seed (default 0)")
    p.add_argument("--export-dot", action="store_true")
    p.set_defaults(func=cmd_machine)

    p = sub.add_parser(parents=[common], name="verify", help="finite verification suites")
    p.add_argument("suite", choices=tuple(verify.SUITES))
    p.add_argument("--max-deg", type=int, default=None)
    p.add_argument("--series", type=int, default=10)
    p.add_argument("--digits", type=int, default=10)
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--max-period", type=int, default=4)
    p.add_argument("--max-k", type=int, default=2)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(parents=[common], name="mahler", help="eventual-minimality check of a series")
    p.add_argument("series")
    p.add_argument("--depth", type=int, default=40)
    p.add_argument("--tail", type=int, default=None)
    p.set_defaults(func=cmd_mahler)

    p = sub.add_parser(parents=[common], name="kernel", help="p-kernel estimate of a digit sequence")
    p.add_argument("source", help="powers-of-two, squares, or a series text")
    p.add_argument("--depth", type=int, default=4096)
    p.add_argument("--max-e", type=int, default=6)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser(parents=[common], name="graph", help="the expansion graph near the root")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--bn", type=int, help="list b_0 .. b_(N-1) instead")
    p.add_argument("--export-dot", action="store_true")
    p.set_defaults(func=cmd_graph)
    return ap


_SUITE_DEFAULTS = {"formulas": {"max_deg": 6}, "nonregularity": {"max_deg": 3},
                   "graph": {"depth": 5}, "periodicity": {"depth": 12}}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify":
        for key, value in _SUITE_DEFAULTS.get(args.suite, {}).items():
            if getattr(args, key) is None:
                setattr(args, key, value)
    try:
        budget = args.budget if args.budget is not None else _default_budget()
        if budget <= 0:
            raise UsageError("--budget must be positive")
        cfg = CliConfig(parse_field(args.field), args.P, args.Q, args.format, budget, args.seed)
        return args.func(cfg, args)
    except (ParseError, UsageError) as exc:
        print(f"ratdigits: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FieldError, DigitSystemError) as exc:
        print(f"ratdigits: invalid system: {exc}", file=sys.stderr)
        return EXIT_SYSTEM
    except (BudgetExceeded, InsufficientPrecision) as exc:
        print(f"ratdigits: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NotProlongable, ShapeError, ValueError) as exc:
        print(f"ratdigits: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
