"""Independent reference implementations over prime fields F_p.

Polynomials are tuples of ints, lowest degree first, with no trailing zeros.
Nothing here imports ratdigits except the two conversion helpers, so these
functions can serve as oracles for the library.
"""

from __future__ import annotations


def norm(a, p):
    a = [c % p for c in a]
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def deg(a):
    return len(a) - 1 if a else -1


def add(a, b, p):
    n = max(len(a), len(b))
    return norm([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p)


def sub(a, b, p):
    return add(a, [-c for c in b], p)


def mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return norm(out, p)


def power(a, k, p):
    out = (1,)
    for _ in range(k):
        out = mul(out, a, p)
    return out


def divmod_(a, d, p):
    if not d:
        raise ZeroDivisionError
    a = list(a)
    inv = pow(d[-1], p - 2, p)
    q = [0] * max(len(a) - len(d) + 1, 0)
    for i in range(len(a) - len(d), -1, -1):
        c = a[i + len(d) - 1] * inv % p
        q[i] = c
        for j, y in enumerate(d):
            a[i + j] -= c * y
    return norm(q, p), norm(a, p)


def poly_from_text_f2(bits: str):
    """'101' -> X^2 + 1 (most significant first)."""
    return norm([int(b) for b in reversed(bits)], 2)


def all_polys(p, max_deg):
    """Every polynomial of degree <= max_deg (including 0)."""
    out = [()]
    for d in range(max_deg + 1):
        for n in range(p**d * (p - 1)):
            lead = n // p**d + 1
            low = [(n // p**i) % p for i in range(d)]
            out.append(tuple(low + [lead]))
    return out


# ------------------------------------------------------------ digit expansions

def expand(P, Q, w, p):
    """Digits s_k .. s_0 from Q w_i = P w_(i+1) + s_i."""
    if not w:
        return [()]
    digits = []
    while w:
        w, s = divmod_(mul(Q, w, p), P, p)
        digits.append(s)
    return digits[::-1]


def evaluate(P, Q, digits, p):
    """(num, den) with sum_i (s_i/Q)(P/Q)^i = num/den, den = Q^len (not reduced)."""
    k = len(digits)
    num = ()
    for i, s in enumerate(reversed(digits)):
        num = add(num, mul(mul(s, power(P, i, p), p), power(Q, k - 1 - i, p), p), p)
    return num, power(Q, k, p)


def series_digits_of_rational(P, Q, N, D, ndigits, p):
    """Digits of N/D from s = Q floor((P/Q)^j a) - P floor((P/Q)^(j-1) a).

    a = (Q/P)^k N/D with the least k >= 0 giving |a| < 1.  Returns
    (k, digits) with the k integer digits first.
    """
    k = 0
    while deg(mul(N, power(Q, k, p), p)) - deg(mul(D, power(P, k, p), p)) >= 0 and N:
        k += 1
    num = mul(N, power(Q, k, p), p)
    den = mul(D, power(P, k, p), p)
    prev = ()
    out = []
    for _ in range(k + ndigits):
        num, den = mul(num, P, p), mul(den, Q, p)
        cur = divmod_(num, den, p)[0]
        out.append(sub(mul(Q, cur, p), mul(P, prev, p), p))
        prev = cur
    return k, out


def label_set(P, Q, v, p):
    """Brute force: all digits s (deg < deg P) with Q | P v + s."""
    m = deg(P)
    return [s for s in all_polys(p, m - 1) if not divmod_(add(mul(P, v, p), s, p), Q, p)[1]]


# ------------------------------------------------------------ kernels

def kernel_classes(seq, p, max_e):
    """Cumulative distinct p-kernel prefixes, compared on len(seq) // p^max_e terms."""
    L = len(seq) // p**max_e
    seen = set()
    counts = []
    for e in range(max_e + 1):
        for c in range(p**e):
            seen.add(tuple(seq[c + p**e * k] for k in range(L)))
        counts.append(len(seen))
    return counts


# ------------------------------------------------------------ bridges to the library

def to_lib(F, a):
    from ratdigits.algebra import Poly

    return Poly(F, list(a))


def from_lib(w):
    return tuple(w.coeffs)
