"""The expansion graph: nodes are polynomials, edges v -> (P v + s)/Q labelled s.

The graph is infinite and never built; everything here is computed locally.
Path label strings are listed in traversal order, i.e. the first label is the
most significant digit after the root.
"""

from __future__ import annotations

from functools import lru_cache

from .algebra import Poly, format_poly, poly_divrem, poly_key, polys_below_degree
from .digits import DigitSystem
from .errors import BudgetExceeded, NotAnEdge

DEFAULT_PATH_BUDGET = 2**20


def min_label(ds: DigitSystem, v: Poly) -> Poly:
    """m_v = (-P v) mod Q, the unique outgoing label of degree < deg Q."""
    return (-(ds.P * v)) % ds.Q


@lru_cache(maxsize=None)
def _label_multiples(ds: DigitSystem):
    return tuple(d * ds.Q for d in polys_below_degree(ds.field, ds.r_exp))


def edge_labels(ds: DigitSystem, v: Poly) -> list[Poly]:
    """L(v) = {m_v + d Q : deg d < deg P - deg Q}, in lexicographic order."""
    mv = min_label(ds, v)
    return sorted((mv + dq for dq in _label_multiples(ds)), key=poly_key)


def child(ds: DigitSystem, v: Poly, s: Poly) -> Poly:
    if s.degree >= ds.m:
        raise NotAnEdge(f"{s} is not a digit")
    w, rem = poly_divrem(ds.P * v + s, ds.Q)
    if rem:
        raise NotAnEdge(f"{format_poly(s)} is not a label at node {format_poly(v)}")
    return w


def children(ds: DigitSystem, v: Poly):
    return [(s, child(ds, v, s)) for s in edge_labels(ds, v)]


def level_of(ds: DigitSystem, v: Poly) -> int:
    """Distance from the root: l with (l-1) r_exp <= deg v < l r_exp, and 0 for v = 0."""
    if not v:
        return 0
    return v.degree // ds.r_exp + 1


def minimal_string(ds: DigitSystem, v: Poly, length: int) -> tuple:
    """First ``length`` labels of the path from v that always takes m_v."""
    out = []
    for _ in range(length):
        s = min_label(ds, v)
        out.append(s)
        v = child(ds, v, s)
    return tuple(out)


@lru_cache(maxsize=None)
def _bn(ds: DigitSystem, nn: int):
    # returns (b_nn, s^(0)(b_nn))
    if nn == 0:
        return Poly.zero(ds.field), Poly.zero(ds.field)
    t, k = divmod(nn, ds.r)
    parent = _bn(ds, t)[0]
    s = edge_labels(ds, parent)[k]
    return child(ds, parent, s), s


def bn_index(ds: DigitSystem, nn: int) -> Poly:
    """b_nn: the nn-th polynomial when ordered by its expansion string."""
    if nn < 0:
        raise ValueError("index must be nonnegative")
    return _bn(ds, nn)[0]


def s0_of_bn(ds: DigitSystem, nn: int) -> Poly:
    if nn < 0:
        raise ValueError("index must be nonnegative")
    return _bn(ds, nn)[1]


def enumerate_paths(ds: DigitSystem, depth: int, start: Poly | None = None,
                    budget: int = DEFAULT_PATH_BUDGET, with_nodes: bool = False):
    """All label strings of length ``depth`` from the root (or ``start``).

    Strings come in lexicographic order; with ``with_nodes`` each is paired
    with the node it ends at.
    """
    if ds.r**depth > budget:
        raise BudgetExceeded(f"{ds.r}^{depth} paths exceed the budget {budget}")
    layer = [((), start if start is not None else Poly.zero(ds.field))]
    for _ in range(depth):
        layer = [(labels + (s,), w) for labels, v in layer for s, w in children(ds, v)]
    return layer if with_nodes else [labels for labels, _ in layer]


def smallest_period(seq, max_period: int):
    """Least p <= max_period with seq[i] = seq[i+p] throughout, or None."""
    for p in range(1, max_period + 1):
        if all(seq[i] == seq[i + p] for i in range(len(seq) - p)):
            return p
    return None


def periodic_paths(ds: DigitSystem, depth: int, max_period: int):
    """Root paths of length ``depth`` that are purely periodic with period <= max_period."""
    return [s for s in enumerate_paths(ds, depth) if smallest_period(s, max_period)]


def check_structure(ds: DigitSystem, depth: int) -> dict:
    """Out-degree and loop structure of every node up to ``depth`` levels."""
    nodes, frontier = {Poly.zero(ds.field)}, [Poly.zero(ds.field)]
    bad_degree, loops, back_edges = [], [], []
    for _ in range(depth):
        nxt = []
        for v in frontier:
            kids = children(ds, v)
            if len(kids) != ds.r:
                bad_degree.append(v)
            for _, w in kids:
                if w == v:
                    loops.append(v)
                elif v and not v.degree < w.degree:
                    back_edges.append((v, w))
                if w not in nodes:
                    nodes.add(w)
                    nxt.append(w)
        frontier = nxt
    return {
        "nodes": len(nodes),
        "arity": ds.r,
        "bad_out_degree": [format_poly(v) for v in bad_degree],
        "self_loops": sorted({format_poly(v) for v in loops}),
        "degree_violations": [(format_poly(a), format_poly(b)) for a, b in back_edges],
        "ok": not bad_degree and not back_edges and set(loops) == {Poly.zero(ds.field)},
    }


def graph_dot(ds: DigitSystem, depth: int) -> str:
    """DOT text of the graph truncated at ``depth`` levels below the root."""
    ident = {}

    def node_id(v):
        if v not in ident:
            ident[v] = f"n{len(ident)}"
        return ident[v]

    edges = []
    frontier, seen = [Poly.zero(ds.field)], {Poly.zero(ds.field)}
    node_id(frontier[0])
    for _ in range(depth):
        nxt = []
        for v in frontier:
            for s, w in children(ds, v):
                edges.append((node_id(v), node_id(w), format_poly(s)))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    lines = ["digraph expansion_graph {"]
    for v, i in ident.items():
        lines.append(f'  {i} [label="{format_poly(v)}"];')
    for a, b, lab in edges:
        lines.append(f'  {a} -> {b} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
