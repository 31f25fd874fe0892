"""DFAOs, letter-to-letter transducers and uniform substitutions for P/Q digits.

All machines read their input string from right to left.  A polynomial
``w = w_0 + w_1 X + ... + w_k X^k`` is fed to a DFAO as the written string
``w_0 w_1 ... w_k``, so the leading coefficient is consumed first; a digit
string ``s_k ... s_0`` is fed to a transducer starting from ``s_0``.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from typing import Callable, Hashable

from .algebra import Poly, format_poly, polys_below_degree
from .digits import DigitString, DigitSystem, normalize
from .errors import BudgetExceeded, NotProlongable

DEFAULT_STATE_BUDGET = 10**5


class Dfao:
    """Deterministic finite automaton with output, states discovered on demand."""

    def __init__(self, alphabet, initial, step: Callable, out: Callable,
                 budget: int = DEFAULT_STATE_BUDGET, state_label=str, letter_label=str,
                 output_label=str):
        self.alphabet = tuple(alphabet)
        self.initial = initial
        self._step = step
        self._out = out
        self.budget = budget
        self.state_label = state_label
        self.letter_label = letter_label
        self.output_label = output_label
        self.reading = "right-to-left"
        self._delta: dict = {}
        self._outputs: dict = {}
        self._known = {initial: None}
        self._lock = threading.Lock()

    def _register(self, state):
        if state not in self._known:
            if len(self._known) >= self.budget:
                raise BudgetExceeded(f"more than {self.budget} states")
            self._known[state] = None

    def transition(self, state, letter):
        key = (state, letter)
        nxt = self._delta.get(key)
        if nxt is None:
            nxt = self._step(state, letter)
            with self._lock:
                self._register(nxt)
                self._delta[key] = nxt
        return nxt

    def output(self, state):
        if state not in self._outputs:
            val = self._out(state)
            with self._lock:
                self._outputs[state] = val
        return self._outputs[state]

    def run(self, word):
        """Output after reading the written string ``word`` right to left."""
        state = self.initial
        for letter in reversed(tuple(word)):
            state = self.transition(state, letter)
        return self.output(state)

    def run_poly(self, w: Poly):
        return self.run(w.coeffs)

    def states(self):
        """All reachable states (breadth-first, within the budget)."""
        seen = {self.initial: None}
        frontier = [self.initial]
        while frontier:
            nxt = []
            for st in frontier:
                for a in self.alphabet:
                    t = self.transition(st, a)
                    if t not in seen:
                        seen[t] = None
                        nxt.append(t)
            frontier = nxt
        return list(seen)

    def to_dict(self):
        states = self.states()
        idx = {s: i for i, s in enumerate(states)}
        return {
            "states": [self.state_label(s) for s in states],
            "initial": idx[self.initial],
            "outputs": [self.output_label(self.output(s)) for s in states],
            "transitions": [
                {"from": idx[s], "in": self.letter_label(a), "to": idx[self.transition(s, a)]}
                for s in states for a in self.alphabet
            ],
        }


@dataclass
class Transducer:
    """Letter-to-letter transducer with an end-of-input letter."""

    states: tuple
    alphabet: tuple
    initial: Hashable
    delta: dict            # (state, letter) -> state
    result: dict           # (state, letter) -> letter
    end_output: dict       # state -> letter
    state_label: Callable = str
    letter_label: Callable = str

    def run(self, word):
        """Raw output ``(end, d_k, ..., d_0)`` for the written input ``s_k ... s_0``."""
        u = self.initial
        out = []
        for s in reversed(tuple(word)):
            out.append(self.result[(u, s)])
            u = self.delta[(u, s)]
        out.append(self.end_output[u])
        return tuple(reversed(out))

    def to_dict(self):
        idx = {s: i for i, s in enumerate(self.states)}
        return {
            "states": [self.state_label(s) for s in self.states],
            "initial": idx[self.initial],
            "transitions": [
                {"from": idx[u], "in": self.letter_label(a), "to": idx[self.delta[(u, a)]],
                 "out": self.letter_label(self.result[(u, a)])}
                for u in self.states for a in self.alphabet
            ],
            "end_outputs": {str(idx[u]): self.letter_label(self.end_output[u]) for u in self.states},
        }


@dataclass
class Substitution:
    """A uniform morphism on a finite alphabet."""

    alphabet: tuple
    rule: dict
    letter_label: Callable = field(default=str)

    def __post_init__(self):
        lengths = {len(v) for v in self.rule.values()}
        if len(lengths) != 1:
            raise ValueError("substitution is not uniform")

    @property
    def width(self) -> int:
        return len(next(iter(self.rule.values())))

    def __call__(self, word):
        return tuple(x for a in word for x in self.rule[a])

    def to_dict(self):
        return {self.letter_label(a): [self.letter_label(x) for x in self.rule[a]] for a in self.alphabet}


# ---------------------------------------------------------------- constructions

def _field_label(ds):
    return ds.field.format_element


def build_s0_dfao(ds: DigitSystem) -> Dfao:
    """DFAO on residues mod P computing the last digit s^(0)(w) = Q w mod P."""
    F, P, Q = ds.field, ds.P, ds.Q

    def step(A, a):
        return (A * Poly.X(F) + Poly.const(F, a)) % P

    def out(A):
        return (Q * A) % P

    return Dfao(range(F.q), Poly.zero(F), step, out, state_label=format_poly,
                letter_label=_field_label(ds), output_label=format_poly)


def sm_output(ds: DigitSystem, m_idx: int, A: Poly) -> Poly:
    """s^(m)(w) from the residue A = w mod P^(m+1), by peeling digits off Q^(j+1) A."""
    P, Q = ds.P, ds.Q
    found = []
    for j in range(m_idx + 1):
        acc = Q ** (j + 1) * A
        for i, s in enumerate(found):
            acc = acc - P**i * Q ** (j - i) * s
        acc = acc % P ** (j + 1)
        found.append(acc.exact_div(P**j))
    return found[m_idx]


def build_sm_dfao(ds: DigitSystem, m_idx: int, budget: int = DEFAULT_STATE_BUDGET) -> Dfao:
    """DFAO on residues mod P^(m+1) computing the digit function s^(m)."""
    if m_idx < 0:
        raise ValueError("digit index must be nonnegative")
    F = ds.field
    modulus = ds.P ** (m_idx + 1)

    def step(A, a):
        return (A * Poly.X(F) + Poly.const(F, a)) % modulus

    return Dfao(range(F.q), Poly.zero(F), step, lambda A: sm_output(ds, m_idx, A),
                budget=budget, state_label=format_poly, letter_label=_field_label(ds),
                output_label=format_poly)


def substitution_rho(ds: DigitSystem) -> Substitution:
    """q-uniform substitution whose fixed point is (s^(0)(a_n))_n."""
    F, P, Q = ds.field, ds.P, ds.Q
    letters = tuple(polys_below_degree(F, ds.m))
    consts = [Poly.const(F, F.order[j]) for j in range(F.q)]
    rule = {}
    for a in letters:
        R = (a * Poly.X(F)) % P
        rule[a] = tuple(R + c * Q for c in consts)
    return Substitution(letters, rule, letter_label=format_poly)


def fixed_point(sub: Substitution, seed, count: int) -> list:
    """First ``count`` letters of the fixed point of ``sub`` starting with ``seed``."""
    if count <= 0:
        raise ValueError("count must be positive")
    image = sub.rule[seed]
    if image[0] != seed:
        raise NotProlongable(f"the image of {sub.letter_label(seed)} does not start with it")
    seq = list(image)
    i = 1
    while len(seq) < count:
        seq.extend(sub.rule[seq[i]])
        i += 1
    return seq[:count]


def build_mulX_transducer(ds: DigitSystem) -> Transducer:
    """Transducer over D realizing w -> X w on P/Q expansions; states are F_q."""
    F, P, Q, m = ds.field, ds.P, ds.Q, ds.m
    inv_lead = F.inv(P.lead)
    digits = tuple(polys_below_degree(F, m))
    states = tuple(range(F.q))
    delta, result = {}, {}
    for u in states:
        for t in digits:
            u_next = F.mul(t.coeff(m - 1), inv_lead)
            delta[(u, t)] = u_next
            result[(u, t)] = t.shift(1) - P.scale(u_next) + Q.scale(u)
    end = {u: Q.scale(u) for u in states}
    return Transducer(states, digits, 0, delta, result, end,
                      state_label=F.format_element, letter_label=format_poly)


def _pad_add(a, b):
    # digitwise sum, aligned at the least significant digit
    zero = Poly.zero(a[0].field)
    n = max(len(a), len(b))
    a = (zero,) * (n - len(a)) + tuple(a)
    b = (zero,) * (n - len(b)) + tuple(b)
    return tuple(x + y for x, y in zip(a, b))


def mul_by_poly(ds: DigitSystem, s: DigitString, R: Poly, transducer: Transducer | None = None) -> DigitString:
    """Expansion of R * evaluate(s), by Horner passes of the multiply-by-X transducer.

    Scaling by a constant and adding expansions both act digitwise without carry.
    """
    F = ds.field
    zero = (Poly.zero(F),)
    if not R:
        return DigitString(zero)
    tr = transducer or build_mulX_transducer(ds)
    digits = tuple(s.digits)
    acc = zero
    for c in reversed(R.coeffs):
        acc = normalize(tr.run(acc))
        if c:
            acc = _pad_add(acc, tuple(d.scale(c) for d in digits))
    return DigitString(normalize(acc))


# ---------------------------------------------------------------- export

def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(machine: Dfao | Transducer, name: str = "machine") -> str:
    """Graphviz DOT text; transducer edges are labelled "(in,out)"."""
    d = machine.to_dict()
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  start [shape=point];']
    for i, lbl in enumerate(d["states"]):
        if isinstance(machine, Dfao):
            lbl = f"{lbl} / {d['outputs'][i]}"
        else:
            lbl = f"{lbl} / {d['end_outputs'][str(i)]}"
        lines.append(f"  s{i} [shape=circle, label={_dot_quote(lbl)}];")
    lines.append(f"  start -> s{d['initial']};")
    # merge parallel edges into one label
    merged: dict[tuple, list] = {}
    for t in d["transitions"]:
        lab = f"({t['in']},{t['out']})" if "out" in t else t["in"]
        merged.setdefault((t["from"], t["to"]), []).append(lab)
    for (a, b), labs in merged.items():
        lines.append(f"  s{a} -> s{b} [label={_dot_quote(' '.join(labs))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def machine_json(machine: Dfao | Transducer) -> str:
    return json.dumps(machine.to_dict())
