"""Exact arithmetic in F_q and F_q[X].

Field elements are encoded as integers ``0 <= code < q``: the element
``c_0 + c_1*t + ... + c_{s-1}*t^(s-1)`` of F_{p^s} = F_p[t]/(modulus) has code
``c_0 + c_1*p + ... + c_{s-1}*p^(s-1)``.  Codes 0 and 1 are the field's zero
and one.  Polynomials over F_q are immutable :class:`Poly` values holding a
normalized tuple of codes, lowest degree first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import FieldError, ParseError

MINUS_INF = float("-inf")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------- F_p[t] helpers
# Plain lists of ints mod p, lowest first; only used to build extension tables.

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(_fp_trim(a)) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
    return a


def _fp_is_irreducible(m, p):
    # trial division by every monic polynomial of degree 1..deg/2
    d = len(m) - 1
    for k in range(1, d // 2 + 1):
        for low in product(range(p), repeat=k):
            if not _fp_mod(m, list(low) + [1], p):
                return False
    return True


class FieldSpec:
    """The finite field F_q, q = p^s, with a total order starting 0, 1.

    ``modulus`` is the monic irreducible polynomial over F_p (coefficients
    lowest first) defining the extension; it is required iff s > 1.  ``order``
    lists the q codes in the order used by the lexicographic enumeration of
    F_q[X]; the default is numeric code order.
    """

    def __init__(self, p: int, s: int = 1, modulus=None, order=None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if s < 1:
            raise FieldError("extension degree must be >= 1")
        if s == 1:
            if modulus is not None and len(modulus) not in (0, 2):
                raise FieldError("a prime field takes no modulus")
            modulus = None
        else:
            if modulus is None:
                raise FieldError(f"F_{p}^{s} needs an explicit irreducible modulus")
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != s + 1 or modulus[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {s}")
            if not _fp_is_irreducible(list(modulus), p):
                raise FieldError("modulus is not irreducible over F_p")
        self.p = p
        self.s = s
        self.q = p**s
        self.modulus = modulus
        if order is None:
            order = tuple(range(self.q))
        order = tuple(int(c) for c in order)
        if sorted(order) != list(range(self.q)) or order[:2] != (0, 1):
            raise FieldError("order must list every element once, starting 0, 1")
        self.order = order
        self.rank = tuple(order.index(c) for c in range(self.q))
        self._build_tables()

    def _build_tables(self):
        p, q = self.p, self.q
        if self.s == 1:
            add = [[(a + b) % p for b in range(q)] for a in range(q)]
            mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            vecs = [self.vector(c) for c in range(q)]
            add = [[self.code([(x + y) % p for x, y in zip(va, vb)]) for vb in vecs] for va in vecs]
            mul = []
            for va in vecs:
                row = []
                for vb in vecs:
                    prod_ = [0] * (2 * self.s - 1)
                    for i, x in enumerate(va):
                        if x:
                            for j, y in enumerate(vb):
                                prod_[i + j] = (prod_[i + j] + x * y) % p
                    red = _fp_mod(prod_, list(self.modulus), p)
                    row.append(self.code(red + [0] * (self.s - len(red))))
                mul.append(row)
        self.add_t = add
        self.mul_t = mul
        self.neg_t = [next(b for b in range(q) if add[a][b] == 0) for a in range(q)]
        self.sub_t = [[add[a][self.neg_t[b]] for b in range(q)] for a in range(q)]
        self.inv_t = [0] + [next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q)]

    # numpy copies of the tables, for vectorized series arithmetic
    @cached_property
    def np_add(self):
        return np.array(self.add_t, dtype=np.int64)

    @cached_property
    def np_sub(self):
        return np.array(self.sub_t, dtype=np.int64)

    @cached_property
    def np_mul(self):
        return np.array(self.mul_t, dtype=np.int64)

    @cached_property
    def np_neg(self):
        return np.array(self.neg_t, dtype=np.int64)

    def vector(self, code: int) -> list[int]:
        """Base-p coordinates ``[c_0, ..., c_{s-1}]`` of an element."""
        out = []
        for _ in range(self.s):
            code, c = divmod(code, self.p)
            out.append(c)
        return out

    def code(self, vector) -> int:
        c = 0
        for x in reversed(list(vector)):
            c = c * self.p + int(x)
        return c

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for F_{self.q}")
        return FieldElement(self, code)

    def add(self, a, b):
        return self.add_t[a][b]

    def sub(self, a, b):
        return self.sub_t[a][b]

    def mul(self, a, b):
        return self.mul_t[a][b]

    def neg(self, a):
        return self.neg_t[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.inv_t[a]

    def _key(self):
        return (self.p, self.s, self.modulus, self.order)

    def __eq__(self, other):
        return self is other or (isinstance(other, FieldSpec) and self._key() == other._key())

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.s == 1:
            return f"FieldSpec({self.p})"
        return f"FieldSpec({self.p}^{self.s}:{format_poly(Poly(FieldSpec(self.p), self.modulus))})"

    def format_element(self, code: int) -> str:
        if self.s == 1:
            return str(code)
        return "[" + ",".join(str(c) for c in reversed(self.vector(code))) + "]"


@dataclass(frozen=True)
class FieldElement:
    """An element of F_q; a thin wrapper around its integer code."""

    spec: FieldSpec
    code: int

    @property
    def vector(self):
        return self.spec.vector(self.code)

    def _other(self, other):
        if isinstance(other, FieldElement):
            return other.code
        return other % self.spec.p if self.spec.s == 1 else other

    def __add__(self, other):
        return FieldElement(self.spec, self.spec.add(self.code, self._other(other)))

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self.code, self._other(other)))

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.code, self._other(other)))

    def __truediv__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.code, self.spec.inv(self._other(other))))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.code))

    def inverse(self):
        return FieldElement(self.spec, self.spec.inv(self.code))

    def __str__(self):
        return self.spec.format_element(self.code)


class Poly:
    """Immutable polynomial over F_q; ``coeffs`` are codes, lowest degree first."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        q = field.q
        for x in c:
            if not 0 <= x < q:
                raise FieldError(f"coefficient code {x} out of range for F_{q}")
        self.field = field
        self.coeffs = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, field, coeffs):
        # trusted constructor: coeffs already a normalized tuple of codes
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, field):
        return cls._raw(field, ())

    @classmethod
    def one(cls, field):
        return cls._raw(field, (1,))

    @classmethod
    def const(cls, field, code):
        return cls(field, (code,))

    @classmethod
    def X(cls, field, k=1):
        return cls._raw(field, (0,) * k + (1,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INF

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def elements(self):
        return [FieldElement(self.field, c) for c in self.coeffs]

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def _check(self, other):
        if isinstance(other, int):
            return Poly.const(self.field, other % self.field.p if self.field.s == 1 else other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.field is not self.field and other.field != self.field:
            raise FieldError("polynomials over different fields")
        return other

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs and (self.field is other.field or self.field == other.field)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.coeffs))
        return self._hash

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        t = self.field.add_t
        c = [t[x][y] for x, y in zip(a, b)] + list(a[len(b):])
        return Poly(self.field, c)

    __radd__ = __add__

    def __neg__(self):
        n = self.field.neg_t
        return Poly._raw(self.field, tuple(n[x] for x in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.field)
        add, mul = self.field.add_t, self.field.mul_t
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add[out[i + j]][row[y]]
        return Poly(self.field, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> Poly:
        if c == 0:
            return Poly.zero(self.field)
        row = self.field.mul_t[c]
        return Poly._raw(self.field, tuple(row[x] for x in self.coeffs))

    def shift(self, k: int) -> Poly:
        """Multiply by X^k (k >= 0)."""
        if not self.coeffs or k == 0:
            return self
        return Poly._raw(self.field, (0,) * k + self.coeffs)

    def __pow__(self, e: int):
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        return poly_divrem(self, other)

    def __floordiv__(self, other):
        return poly_divrem(self, other)[0]

    def __mod__(self, other):
        return poly_divrem(self, other)[1]

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        return self.scale(self.field.inv(self.lead))

    def exact_div(self, d: Poly) -> Poly:
        quo, rem = poly_divrem(self, d)
        if rem:
            raise ArithmeticError(f"{format_poly(d)} does not divide {format_poly(self)}")
        return quo

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def poly_divrem(a: Poly, d: Poly) -> tuple[Poly, Poly]:
    """Euclidean division: ``a = quotient*d + remainder`` with deg remainder < deg d."""
    if not d.coeffs:
        raise ZeroDivisionError("division by the zero polynomial")
    if a.field != d.field:
        raise FieldError("polynomials over different fields")
    f = a.field
    dd = len(d.coeffs) - 1
    if len(a.coeffs) - 1 < dd:
        return Poly.zero(f), a
    add, mul, neg = f.add_t, f.mul_t, f.neg_t
    inv_lead = f.inv_t[d.coeffs[-1]]
    r = list(a.coeffs)
    quo = [0] * (len(r) - dd)
    dneg = [neg[x] for x in d.coeffs]
    for k in range(len(r) - 1, dd - 1, -1):
        c = r[k]
        if c == 0:
            continue
        c = mul[c][inv_lead]
        quo[k - dd] = c
        row = mul[c]
        base = k - dd
        for i, y in enumerate(dneg):
            if y:
                r[base + i] = add[r[base + i]][row[y]]
    return Poly(f, quo), Poly(f, r[:dd])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    while b:
        a, b = b, poly_divrem(a, b)[1]
    return a.monic()


def poly_key(w: Poly):
    """Sort key realizing the lexicographic order on F_q[X] induced by the field order."""
    rank = w.field.rank
    return (len(w.coeffs), tuple(rank[c] for c in reversed(w.coeffs)))


def index_to_poly(spec: FieldSpec, n: int) -> Poly:
    """The (n+1)-st polynomial a_n in lexicographic order; a_{qm+r} = X a_m + a_r."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    coeffs = []
    q, order = spec.q, spec.order
    while n:
        n, r = divmod(n, q)
        coeffs.append(order[r])
    return Poly._raw(spec, tuple(coeffs))


def poly_to_index(w: Poly) -> int:
    spec = w.field
    n = 0
    for c in reversed(w.coeffs):
        n = n * spec.q + spec.rank[c]
    return n


def polys_below_degree(spec: FieldSpec, k: int):
    """All polynomials of degree < k, in lexicographic order."""
    return [index_to_poly(spec, i) for i in range(spec.q**k)]


# ---------------------------------------------------------------- text I/O

_TOKEN = re.compile(r"\s*(?:(\d+)|(\[[\d\s,]*\])|([Xx])|(\^)|(\*)|(\+))")


def parse_poly(text: str, spec: FieldSpec) -> Poly:
    """Parse ``term ('+' term)*`` where ``term := [coeff '*'] 'X' ['^' int] | coeff``."""
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", text, pos)
        kind = m.lastindex
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    if not tokens:
        raise ParseError("empty polynomial", text, 0)

    INT, VEC, VAR, CARET, STAR, PLUS = range(1, 7)
    acc = {}
    i = 0

    def coeff_of(tok):
        kind, val, at = tok
        if kind == INT:
            # in an extension field a plain integer is an element of the prime field
            c = int(val)
            if c >= spec.p:
                raise ParseError(f"coefficient {c} out of range 0..{spec.p - 1}", text, at)
            return spec.code([c] + [0] * (spec.s - 1))
        parts = [x.strip() for x in val[1:-1].split(",")]
        if len(parts) != spec.s or not all(x.isdigit() for x in parts):
            raise ParseError(f"expected {spec.s} base-{spec.p} digits", text, at)
        digits = [int(x) for x in parts]
        if any(x >= spec.p for x in digits):
            raise ParseError(f"coefficient digit out of range 0..{spec.p - 1}", text, at)
        return spec.code(reversed(digits))

    def peek(k=0):
        return tokens[i + k] if i + k < len(tokens) else (None, None, len(text))

    while True:
        kind, val, at = peek()
        coeff, deg, has_var = 1, 0, False
        if kind in (INT, VEC):
            coeff = coeff_of(peek())
            i += 1
            if peek()[0] == STAR:
                i += 1
                if peek()[0] != VAR:
                    raise ParseError("expected X after '*'", text, peek()[2])
                has_var = True
        elif kind == VAR:
            has_var = True
        else:
            raise ParseError("expected a term", text, at)
        if has_var:
            i += 1
            deg = 1
            if peek()[0] == CARET:
                i += 1
                k2, v2, a2 = peek()
                if k2 != INT:
                    raise ParseError("expected an exponent", text, a2)
                deg = int(v2)
                i += 1
        acc[deg] = spec.add(acc.get(deg, 0), coeff)
        if i == len(tokens):
            break
        k2, _, a2 = peek()
        if k2 != PLUS:
            raise ParseError("expected '+'", text, a2)
        i += 1
        if i == len(tokens):
            raise ParseError("dangling '+'", text, a2)
    top = max(acc)
    return Poly(spec, [acc.get(d, 0) for d in range(top + 1)])


def format_poly(w: Poly) -> str:
    if not w.coeffs:
        return "0"
    spec = w.field
    terms = []
    for d in range(len(w.coeffs) - 1, -1, -1):
        c = w.coeffs[d]
        if c == 0:
            continue
        cs = spec.format_element(c)
        if d == 0:
            terms.append(cs)
            continue
        mono = "X" if d == 1 else f"X^{d}"
        terms.append(mono if c == 1 else f"{cs}*{mono}")
    return "+".join(terms)


def parse_field(text: str) -> FieldSpec:
    """``p`` or ``p^s:modulus`` with the modulus written over F_p."""
    text = text.strip()
    m = re.fullmatch(r"(\d+)(?:\^(\d+)(?::(.+))?)?", text)
    if not m:
        raise ParseError("field must be 'p' or 'p^s:modulus'", text, 0)
    p = int(m.group(1))
    s = int(m.group(2) or 1)
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if s == 1:
        return FieldSpec(p)
    if m.group(3) is None:
        raise FieldError(f"F_{p}^{s} needs an explicit modulus, e.g. {p}^{s}:X^{s}+...")
    modulus = parse_poly(m.group(3), FieldSpec(p))
    return FieldSpec(p, s, modulus.coeffs)
