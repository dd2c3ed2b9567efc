"""Logarithmic vector fields of a divisor and Saito-style freeness certificates.

A vector field is logarithmic when it is tangent to the divisor, i.e. applies
its equation into the ideal the equation generates; the fields annihilating
the equation form the smaller module handled by `derlog_h`.  Freeness is
certified by n logarithmic fields whose coefficient determinant equals a
nonzero constant times the equation.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .groebner import (
    groebner_basis,
    minimal_generator_indices,
    syzygy_module,
)
from .module import FreeElement, Grading, ModuleError
from .order import MonomialOrder
from .poly import Poly, PolyError, is_squarefree, poly_exact_div, quasihomogeneous_weights


class DivisorError(ValueError):
    pass


class InternalInvariantError(RuntimeError):
    """A mathematically impossible state was reached; indicates a defect."""


class Divisor:
    """An ambient variable list with a reduced equation and optional weights."""

    def __init__(self, names: Sequence[str], h: Poly,
                 weights: Optional[Sequence[int]] = None, check_reduced: bool = True):
        if h.nvars != len(names):
            raise DivisorError("equation does not match the variable list")
        if h.is_zero() or h.is_constant():
            raise DivisorError("divisor equation must be a nonconstant polynomial")
        if check_reduced and not is_squarefree(h):
            raise DivisorError("divisor equation is not reduced (repeated factor)")
        self.names = tuple(names)
        self.h = h
        self.weights = tuple(weights) if weights is not None else None
        if self.weights is not None:
            if len(self.weights) != len(names):
                raise DivisorError("one weight per variable required")
            if any(w <= 0 for w in self.weights):
                raise DivisorError("weights must be strictly positive")
            if not h.is_homogeneous(self.weights):
                raise DivisorError("equation is not homogeneous for the given weights")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def partials(self) -> list:
        return [self.h.derivative(i) for i in range(self.nvars)]

    def semipositive_weights(self) -> Optional[tuple]:
        """A weight system with nonnegative entries (zero allowed, not all zero)."""
        if self.weights is not None:
            return self.weights
        return quasihomogeneous_weights(self.h, allow_zero=True)

    def order(self) -> MonomialOrder:
        if self.weights is not None:
            return MonomialOrder("wdegrevlex", self.weights)
        return MonomialOrder("wdegrevlex", (1,) * self.nvars)

    def __repr__(self):
        return f"Divisor({self.h.format(self.names)})"


class LogBasis:
    """n logarithmic fields with det = unit * h; the Saito certificate."""

    def __init__(self, divisor: Divisor, theta: Sequence[Sequence[Poly]], unit: Fraction,
                 witnesses: Sequence[Poly]):
        self.divisor = divisor
        self.theta = [list(col) for col in theta]  # theta[j] = coefficients of field j
        self.unit = unit
        self.witnesses = list(witnesses)

    @property
    def n(self) -> int:
        return len(self.theta)

    def fields(self) -> list:
        return [FreeElement(col) for col in self.theta]

    def matrix(self) -> list:
        """Row-major coefficient matrix: matrix[i][j] = coefficient of d/dx_i in field j."""
        n = self.n
        return [[self.theta[j][i] for j in range(n)] for i in range(n)]

    def field_degrees(self) -> Optional[list]:
        """Weighted degrees of the fields when the divisor is graded."""
        w = self.divisor.weights
        if w is None:
            return None
        degs = []
        for col in self.theta:
            d = None
            for i, c in enumerate(col):
                if c.is_zero():
                    continue
                s = {wd - w[i] for wd in
                     (sum(a * b for a, b in zip(e, w)) for e in c.terms)}
                if len(s) != 1:
                    return None
                if d is None:
                    d = s.pop()
                elif d != s.pop():
                    return None
            degs.append(d if d is not None else 0)
        return degs


class FreenessVerdict:
    FREE = "FREE"
    NOT_FREE = "NOT_FREE"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __init__(self, kind: str, basis: Optional[LogBasis] = None,
                 generator_count: Optional[int] = None, reason: str = ""):
        self.kind = kind
        self.basis = basis
        self.generator_count = generator_count
        self.reason = reason

    def __repr__(self):
        extra = self.reason or self.generator_count or ""
        return f"FreenessVerdict({self.kind}{', ' + str(extra) if extra else ''})"


def apply_field(field: FreeElement, f: Poly) -> Poly:
    """chi(f) = sum of coefficients times partial derivatives."""
    out = Poly.zero(f.nvars)
    for i in range(field.rank):
        a = field.entries[i]
        if not a.is_zero():
            out = out + a * f.derivative(i)
    return out


def derlog(d: Divisor, order: Optional[MonomialOrder] = None) -> list:
    """Generators of the module of fields tangent to the divisor.

    Returned as pairs (field, witness) with field(h) = witness * h exactly.
    """
    n = d.nvars
    cols = [FreeElement([p]) for p in d.partials()] + [FreeElement([d.h])]
    syz = syzygy_module(cols, order or d.order())
    out = []
    for s in syz:
        field = FreeElement(s.entries[:n])
        if field.is_zero():
            continue
        witness = -s.entries[n]
        out.append((field, witness))
    return out


def derlog_fields(d: Divisor, order: Optional[MonomialOrder] = None) -> list:
    return [f for f, _ in derlog(d, order)]


def derlog_h(d: Divisor, order: Optional[MonomialOrder] = None) -> list:
    """Generators of the module of fields annihilating the equation."""
    cols = [FreeElement([p]) for p in d.partials()]
    return syzygy_module(cols, order or d.order())


def euler_field(weights: Sequence[int], nvars: int) -> FreeElement:
    """The weighted radial field sum(w_i x_i d/dx_i)."""
    if len(weights) != nvars:
        raise DivisorError("one weight per variable required")
    if any(w <= 0 for w in weights):
        raise DivisorError("weights must be strictly positive")
    entries = [Poly.variable(nvars, i).scale(weights[i]) for i in range(nvars)]
    return FreeElement(entries)


def poly_det(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square polynomial matrix (cofactor expansion, memoised)."""
    n = len(matrix)
    if n == 0:
        raise ModuleError("empty matrix has no determinant here")
    nv = matrix[0][0].nvars
    cache: dict = {}

    def minor(rows: tuple, cols: tuple) -> Poly:
        if not rows:
            return Poly.constant(nv, 1)
        key = (rows, cols)
        if key in cache:
            return cache[key]
        r0 = rows[0]
        acc = Poly.zero(nv)
        for pos, c in enumerate(cols):
            a = matrix[r0][c]
            if a.is_zero():
                continue
            sub = minor(rows[1:], cols[:pos] + cols[pos + 1:])
            term = a * sub
            if pos % 2 == 1:
                term = -term
            acc = acc + term
        cache[key] = acc
        return acc

    return minor(tuple(range(n)), tuple(range(n)))


def saito_check(d: Divisor, candidates: Sequence[FreeElement]):
    """Certify n candidate fields as a free basis: returns (LogBasis, None) on
    success and (None, reason) on failure."""
    n = d.nvars
    if len(candidates) != n:
        return None, f"need exactly {n} fields, got {len(candidates)}"
    witnesses = []
    for j, chi in enumerate(candidates):
        if chi.rank != n:
            return None, f"field {j} has rank {chi.rank}, expected {n}"
        val = apply_field(chi, d.h)
        try:
            witnesses.append(poly_exact_div(val, d.h) if not val.is_zero() else Poly.zero(n))
        except PolyError:
            return None, f"field {j} is not logarithmic: chi(h) is not a multiple of h"
    theta_rows = [[candidates[j].entries[i] for j in range(n)] for i in range(n)]
    det = poly_det(theta_rows)
    if det.is_zero():
        return None, "determinant of the coefficient matrix vanishes"
    try:
        quot = poly_exact_div(det, d.h)
    except PolyError:
        return None, "determinant is not a multiple of h"
    if not quot.is_constant() or quot.is_zero():
        return None, "determinant over h is not a nonzero constant"
    unit = quot.constant_value()
    return LogBasis(d, [list(c.entries) for c in candidates], unit, witnesses), None


SUBSET_SEARCH_CAP = 4096


def _canonical_field_order(fields: list, order: MonomialOrder) -> list:
    """Sort fields by descending leading term so certificates are reproducible."""
    def lead_key(f: FreeElement):
        vec = f.vec()
        t = max(vec, key=order.term_key)
        return order.term_key(t)

    return sorted(fields, key=lead_key, reverse=True)


def is_free(d: Divisor, order: Optional[MonomialOrder] = None) -> FreenessVerdict:
    """Freeness test via minimal generators of the tangent-field module."""
    n = d.nvars
    gens = derlog(d, order)
    fields = [f for f, _ in gens]
    degrees = None
    w = d.semipositive_weights()
    if w is not None:
        degrees = []
        graded = True
        for f in fields:
            degs = set()
            for i, c in enumerate(f.entries):
                for e in c.terms:
                    degs.add(sum(a * b for a, b in zip(e, w)) - w[i])
            if len(degs) > 1:
                graded = False
                break
            degrees.append(degs.pop() if degs else 0)
        if not graded:
            degrees = None
    idx = minimal_generator_indices(fields, order or d.order(), degrees)
    count = len(idx)
    if count < n:
        raise InternalInvariantError(
            f"tangent-field module reported {count} < {n} minimal generators")
    if count > n:
        return FreenessVerdict(FreenessVerdict.NOT_FREE, generator_count=count)
    chosen = _canonical_field_order([fields[i] for i in idx], order or d.order())
    basis, reason = saito_check(d, chosen)
    if basis is not None and basis.unit < 0:
        chosen = [-chosen[0]] + chosen[1:]
        basis, reason = saito_check(d, chosen)
    if basis is not None:
        return FreenessVerdict(FreenessVerdict.FREE, basis=basis, generator_count=n)
    # bounded search among the generator pool for a determinant certificate
    pool = sorted(range(len(fields)),
                  key=lambda i: (degrees[i] if degrees else 0, i))[:16]
    tried = 0
    for subset in combinations(pool, n):
        tried += 1
        if tried > SUBSET_SEARCH_CAP:
            break
        cand = _canonical_field_order([fields[i] for i in subset], order or d.order())
        basis, _ = saito_check(d, cand)
        if basis is not None:
            if basis.unit < 0:
                cand = [-cand[0]] + cand[1:]
                basis, _ = saito_check(d, cand)
            return FreenessVerdict(FreenessVerdict.FREE, basis=basis, generator_count=n)
    return FreenessVerdict(FreenessVerdict.INCONCLUSIVE, generator_count=n,
                           reason=reason or "no determinant certificate found")


def log_form_generators(basis: LogBasis, k: int) -> list:
    """Generators of h times the k-th exterior power of the dual of the basis,
    as polynomial k-forms: one generator per index set I, with dx_J-coefficient
    the signed complementary minor of the coefficient matrix."""
    n = basis.n
    if k < 0 or k > n:
        raise ModuleError("form degree out of range")
    from .exterior import form_basis, form_rank

    mat = basis.matrix()
    nv = basis.divisor.h.nvars
    cache: dict = {}

    def minor_det(rows: tuple, cols: tuple) -> Poly:
        key = (rows, cols)
        if key not in cache:
            if not rows:
                cache[key] = Poly.constant(nv, 1)
            else:
                sub = [[mat[r][c] for c in cols] for r in rows]
                cache[key] = poly_det(sub)
        return cache[key]

    gens = []
    basis_k = form_basis(n, k)
    full = tuple(range(n))
    for I in basis_k:
        Ic = tuple(i for i in full if i not in I)
        entries = []
        sI = sum(i + 1 for i in I)
        for J in basis_k:
            Jc = tuple(j for j in full if j not in J)
            sJ = sum(j + 1 for j in J)
            m = minor_det(Jc, Ic)
            if (sI + sJ) % 2 == 1:
                m = -m
            entries.append(m)
        gens.append(FreeElement(entries) if entries else FreeElement([Poly.zero(nv)]))
    if k == 0:
        gens = [FreeElement([basis.divisor.h.scale(basis.unit)])]
    return gens
