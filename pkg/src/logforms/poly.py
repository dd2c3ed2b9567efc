"""Sparse multivariate polynomials over exact rationals.

Every coefficient is a `fractions.Fraction`; there is no floating point
anywhere in the package.  Exponent vectors are tuples of non-negative
integers, one entry per ambient variable.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Mapping, Optional, Sequence


Exponent = tuple  # tuple[int, ...]


class PolyError(ValueError):
    """Raised on malformed polynomial input or mismatched variable lists."""


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise PolyError(f"coefficient {c!r} is not an exact rational")


class Poly:
    """A polynomial stored as a map from exponent vectors to nonzero rationals."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction] | None = None):
        self.nvars = nvars
        clean: dict = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise PolyError("exponent vector length does not match variable count")
                c = _as_fraction(c)
                if c != 0:
                    clean[tuple(e)] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars)

    @staticmethod
    def constant(nvars: int, c) -> "Poly":
        c = _as_fraction(c)
        if c == 0:
            return Poly(nvars)
        return Poly(nvars, {tuple([0] * nvars): c})

    @staticmethod
    def variable(nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): Fraction(1)})

    @staticmethod
    def monomial(nvars: int, expo: Sequence[int], c=1) -> "Poly":
        return Poly(nvars, {tuple(expo): _as_fraction(c)})

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_value(self) -> Fraction:
        """The coefficient of the constant monomial (0 if absent)."""
        return self.terms.get(tuple([0] * self.nvars), Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def weighted_degree(self, weights: Sequence[int]) -> int:
        if not self.terms:
            return -1
        return max(sum(a * w for a, w in zip(e, weights)) for e in self.terms)

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        degs = {sum(a * w for a, w in zip(e, weights)) for e in self.terms}
        return len(degs) <= 1

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise PolyError("polynomials live in different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        r = Poly.__new__(Poly)
        r.nvars, r.terms = self.nvars, t
        return r

    def __neg__(self) -> "Poly":
        r = Poly.__new__(Poly)
        r.nvars = self.nvars
        r.terms = {e: -c for e, c in self.terms.items()}
        return r

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, 0) + c1 * c2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        r = Poly.__new__(Poly)
        r.nvars, r.terms = self.nvars, t
        return r

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _as_fraction(c)
        if c == 0:
            return Poly(self.nvars)
        r = Poly.__new__(Poly)
        r.nvars = self.nvars
        r.terms = {e: c * v for e, v in self.terms.items()}
        return r

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise PolyError("negative exponent")
        result = Poly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus and substitution --------------------------------------

    def derivative(self, i: int) -> "Poly":
        t: dict = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return Poly(self.nvars, t)

    def compose(self, args: Sequence["Poly"]) -> "Poly":
        """Substitute args[i] for variable i; args live in a common ring."""
        if len(args) != self.nvars:
            raise PolyError("substitution needs one polynomial per variable")
        if not args:
            raise PolyError("empty substitution")
        m = args[0].nvars
        out = Poly.zero(m)
        power_cache: dict = {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in power_cache:
                power_cache[key] = args[i] ** k
            return power_cache[key]

        for e, c in self.terms.items():
            term = Poly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def eval_rational(self, point: Sequence[Fraction]) -> Fraction:
        val = Fraction(0)
        for e, c in self.terms.items():
            prod = c
            for a, p in zip(e, point):
                prod *= p ** a
            val += prod
        return val

    def set_vars_zero(self, indices: Iterable[int]) -> "Poly":
        """Substitute 0 for the given variables (ring unchanged)."""
        kill = set(indices)
        t: dict = {}
        for e, c in self.terms.items():
            if all(e[i] == 0 for i in kill):
                t[e] = t.get(e, 0) + c
        return Poly(self.nvars, t)

    def extend(self, nvars_new: int, positions: Sequence[int]) -> "Poly":
        """Reembed into a larger ring; positions[i] = new index of old variable i."""
        t: dict = {}
        for e, c in self.terms.items():
            e2 = [0] * nvars_new
            for i, a in enumerate(e):
                e2[positions[i]] = a
            t[tuple(e2)] = c
        return Poly(nvars_new, t)

    # -- integer normalisation ------------------------------------------

    def primitive(self) -> tuple["Poly", Fraction]:
        """Return (p, c) with self = c*p, p integer-primitive with positive leading sign.

        The sign convention takes the lexicographically largest exponent.
        """
        if not self.terms:
            return self, Fraction(1)
        denom = 1
        for c in self.terms.values():
            denom = denom * c.denominator // int_gcd(denom, c.denominator)
        numer = 0
        for c in self.terms.values():
            numer = int_gcd(numer, c.numerator * denom // c.denominator)
        lead = max(self.terms)
        sign = 1 if self.terms[lead] > 0 else -1
        content = Fraction(sign * numer, denom)
        return self.scale(1 / content), content

    # -- formatting ------------------------------------------------------

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[e]
            factors = []
            for i, a in enumerate(e):
                if a == 1:
                    factors.append(names[i])
                elif a > 1:
                    factors.append(f"{names[i]}^{a}")
            if not factors:
                body = str(abs(c))
            else:
                body = "*".join(factors)
                if abs(c) != 1:
                    body = f"{abs(c)}*{body}"
            sign = "-" if c < 0 else "+"
            bits.append((sign, body))
        first_sign, first_body = bits[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in bits[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self.nvars}, {self.terms!r})"


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


class _Tokens:
    def __init__(self, text: str):
        self.toks: list = []
        line, col = 1, 1
        i = 0
        while i < len(text):
            ch = text[i]
            if ch == "\n":
                line += 1
                col = 1
                i += 1
                continue
            if ch.isspace():
                i += 1
                col += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("int", text[i:j], line, col))
                col += j - i
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("name", text[i:j], line, col))
                col += j - i
                i = j
                continue
            if ch in "+-*^()/":
                self.toks.append((ch, ch, line, col))
                i += 1
                col += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", line, col)
        self.toks.append(("end", "", line, col))
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    """Parse the package-wide polynomial grammar: + - * ^, parentheses,
    integer or rational (a/b) coefficients, variables from `names`."""
    index = {n: i for i, n in enumerate(names)}
    nvars = len(names)
    toks = _Tokens(text)

    def parse_sum() -> Poly:
        kind, _, line, col = toks.peek()
        negate = False
        if kind in "+-":
            toks.next()
            negate = kind == "-"
        p = parse_product()
        if negate:
            p = -p
        while True:
            kind, _, line, col = toks.peek()
            if kind in "+-":
                toks.next()
                q = parse_product()
                p = p - q if kind == "-" else p + q
            else:
                return p

    def parse_product() -> Poly:
        p = parse_power()
        while True:
            kind, _, line, col = toks.peek()
            if kind == "*":
                toks.next()
                p = p * parse_power()
            elif kind == "/":
                toks.next()
                kind2, val, line2, col2 = toks.next()
                if kind2 != "int":
                    raise ParseError("denominator must be an integer literal", line2, col2)
                d = int(val)
                if d == 0:
                    raise ParseError("division by zero", line2, col2)
                p = p.scale(Fraction(1, d))
            else:
                return p

    def parse_power() -> Poly:
        p = parse_atom()
        kind, _, line, col = toks.peek()
        if kind == "^":
            toks.next()
            kind2, val, line2, col2 = toks.next()
            if kind2 != "int":
                raise ParseError("exponent must be an integer literal", line2, col2)
            return p ** int(val)
        return p

    def parse_atom() -> Poly:
        kind, val, line, col = toks.next()
        if kind == "int":
            return Poly.constant(nvars, int(val))
        if kind == "name":
            if val not in index:
                raise ParseError(f"unknown variable {val!r}", line, col)
            return Poly.variable(nvars, index[val])
        if kind == "(":
            p = parse_sum()
            kind2, _, line2, col2 = toks.next()
            if kind2 != ")":
                raise ParseError("expected ')'", line2, col2)
            return p
        if kind == "-":
            return -parse_atom()
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end of input", line, col)

    p = parse_sum()
    kind, val, line, col = toks.peek()
    if kind != "end":
        raise ParseError(f"unexpected token {val!r}", line, col)
    return p


# ---------------------------------------------------------------------------
# gcd


def _poly_gcd_many(polys: Sequence[Poly]) -> Poly:
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise PolyError("gcd of zero polynomials")
    g = nonzero[0]
    for p in nonzero[1:]:
        g = poly_gcd(g, p)
        if g.is_constant():
            break
    return g


def _main_variable(f: Poly, g: Poly) -> Optional[int]:
    for i in range(f.nvars - 1, -1, -1):
        if f.degree_in(i) > 0 or g.degree_in(i) > 0:
            return i
    return None


def _univ_coeffs(f: Poly, v: int) -> list:
    """Coefficients of f as a polynomial in variable v (list indexed by power)."""
    d = f.degree_in(v)
    coeffs = [Poly.zero(f.nvars) for _ in range(d + 1)]
    for e, c in f.terms.items():
        e2 = list(e)
        k = e2[v]
        e2[v] = 0
        coeffs[k] = coeffs[k] + Poly.monomial(f.nvars, e2, c)
    return coeffs

def _from_univ(coeffs: Sequence[Poly], v: int, nvars: int) -> Poly:
    out = Poly.zero(nvars)
    xv = Poly.variable(nvars, v)
    for k, c in enumerate(coeffs):
        if not c.is_zero():
            out = out + c * xv ** k
    return out


def _pseudo_rem(f: Poly, g: Poly, v: int) -> Poly:
    """Pseudo-remainder of f by g with respect to variable v."""
    df, dg = f.degree_in(v), g.degree_in(v)
    if df < dg:
        return f
    fc = _univ_coeffs(f, v)
    gc = _univ_coeffs(g, v)
    lead_g = gc[dg]
    xv = Poly.variable(f.nvars, v)
    r = f
    for _ in range(df - dg + 1):
        dr = r.degree_in(v)
        if r.is_zero() or dr < dg:
            break
        rc = _univ_coeffs(r, v)
        lead_r = rc[dr]
        r = lead_g * r - lead_r * (xv ** (dr - dg)) * g
    return r


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Multivariate gcd over Q via the primitive pseudo-remainder sequence.

    The result is integer-primitive with positive lead coefficient.
    """
    if f.is_zero():
        return g.primitive()[0]
    if g.is_zero():
        return f.primitive()[0]
    f = f.primitive()[0]
    g = g.primitive()[0]
    v = _main_variable(f, g)
    if v is None:
        return Poly.constant(f.nvars, 1)
    if f.degree_in(v) == 0 or g.degree_in(v) == 0:
        # one of them is free of the main variable: gcd divides contents
        fs = _univ_coeffs(f, v) if f.degree_in(v) > 0 else [f]
        gs = _univ_coeffs(g, v) if g.degree_in(v) > 0 else [g]
        cf = _poly_gcd_many([c for c in fs if not c.is_zero()])
        cg = _poly_gcd_many([c for c in gs if not c.is_zero()])
        return poly_gcd(cf, cg)

    def content_and_primitive(p: Poly) -> tuple[Poly, Poly]:
        coeffs = [c for c in _univ_coeffs(p, v) if not c.is_zero()]
        cont = _poly_gcd_many(coeffs)
        prim = poly_exact_div(p, cont)
        return cont, prim

    cf, pf = content_and_primitive(f)
    cg, pg = content_and_primitive(g)
    cont = poly_gcd(cf, cg)
    a, b = pf, pg
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    while not b.is_zero():
        r = _pseudo_rem(a, b, v)
        if r.is_zero():
            a, b = b, r
            break
        _, r = content_and_primitive(r.primitive()[0]) if r.degree_in(v) > 0 else (None, Poly.constant(f.nvars, 1))
        a, b = b, r
        if b.is_constant() and not b.is_zero():
            return cont.primitive()[0]
    result = (cont * a).primitive()[0]
    return result


def poly_exact_div(f: Poly, g: Poly) -> Poly:
    """Exact division f/g; raises PolyError when g does not divide f."""
    if g.is_zero():
        raise PolyError("division by zero polynomial")
    if f.is_zero():
        return f
    # multivariate long division by leading term (lex order); exactness checked
    q = Poly.zero(f.nvars)
    r = f
    glead = max(g.terms)
    gc = g.terms[glead]
    while not r.is_zero():
        rlead = max(r.terms)
        e = tuple(a - b for a, b in zip(rlead, glead))
        if any(x < 0 for x in e):
            raise PolyError("polynomial division is not exact")
        c = r.terms[rlead] / gc
        mono = Poly.monomial(f.nvars, e, c)
        q = q + mono
        r = r - mono * g
    return q


def is_squarefree(h: Poly) -> bool:
    """True when gcd(h, dh/dx_1, ..., dh/dx_n) is constant (char 0)."""
    if h.is_zero():
        raise PolyError("zero polynomial has no squarefree test")
    g = h
    for i in range(h.nvars):
        d = h.derivative(i)
        if d.is_zero():
            continue
        g = poly_gcd(g, d)
        if g.is_constant():
            return True
    return g.is_constant()


# ---------------------------------------------------------------------------
# quasihomogeneity


def quasihomogeneous_weights(h: Poly, allow_zero: bool = False) -> Optional[tuple]:
    """Positive integer weights making every monomial of h the same weighted
    degree, in lowest integral terms; None when no such weights exist.

    With allow_zero=True a semipositive system (some zero weights, not all)
    is accepted when no strictly positive one exists.
    """
    if h.is_zero():
        raise PolyError("zero polynomial")
    expos = sorted(h.terms)
    n = h.nvars
    if len(expos) == 1:
        e = expos[0]
        if all(x == 0 for x in e):
            return None
        return tuple(1 for _ in range(n))
    base = expos[0]
    rows = [[e[i] - base[i] for i in range(n)] for e in expos[1:]]

    # exact rational RREF of the difference system rows * w = 0
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots: list = []
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(n) if c not in pivots]

    def solve(assignment: Sequence[int]) -> Optional[tuple]:
        w = [Fraction(0)] * n
        for c, val in zip(free, assignment):
            w[c] = Fraction(val)
        for i, c in enumerate(pivots):
            w[c] = -sum(mat[i][j] * w[j] for j in free)
        if allow_zero:
            ok = all(x >= 0 for x in w) and any(x > 0 for x in w)
        else:
            ok = all(x > 0 for x in w)
        if not ok:
            return None
        denom = 1
        for x in w:
            denom = denom * x.denominator // int_gcd(denom, x.denominator)
        ints = [int(x * denom) for x in w]
        g = 0
        for x in ints:
            g = int_gcd(g, x)
        return tuple(x // g for x in ints)

    if not free:
        return None
    from itertools import product

    grids = [(1,)] if len(free) > 4 else None
    candidates: Iterable = product(*[range(1, 5) for _ in free]) if grids is None else [(1,) * len(free)]
    for assignment in candidates:
        w = solve(assignment)
        if w is not None:
            return w
    return None
