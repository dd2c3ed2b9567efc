"""Deformation theory of almost free divisors and map germs.

Normal spaces are presented as cokernels over the source ring; singular
Milnor numbers come from three independent routes (de Rham cokernel slices,
alternating sums of relative T1 dimensions, and the annihilator route through
a good defining equation) that must agree on weighted homogeneous data.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .forms import (
    CheckedFormsModule,
    cokernel_slice_dims,
    forms_pullback,
    stabilized_sum,
)
from .groebner import (
    StabilizationError,
    groebner_basis,
    normal_form,
    normal_form_with_cofactors,
    quotient_dimension,
)
from .logarithmic import Divisor, LogBasis, apply_field, derlog_h, euler_field
from .module import INFINITE, FreeElement, ModulePresentation, ModuleError
from .order import MonomialOrder
from .poly import Poly, PolyError


class DeformationError(ValueError):
    pass


INFINITE_OR_UNSTABLE = "INFINITE-OR-UNSTABLE"


class InducingMap:
    """A polynomial map germ, stored as one source-ring component per target
    variable; deformation and extension parameters are marked source variables."""

    def __init__(self, source_names: Sequence[str], target_names: Sequence[str],
                 components: Sequence[Poly], s_indices: Sequence[int] = (),
                 t_indices: Sequence[int] = ()):
        if len(components) != len(target_names):
            raise DeformationError("one component per target variable required")
        for c in components:
            if c.nvars != len(source_names):
                raise DeformationError("components must live in the source ring")
        self.source_names = tuple(source_names)
        self.target_names = tuple(target_names)
        self.components = list(components)
        self.s_indices = tuple(s_indices)
        self.t_indices = tuple(t_indices)
        overlap = set(self.s_indices) & set(self.t_indices)
        if overlap:
            raise DeformationError("a variable cannot be both deformation and extension parameter")

    @property
    def source_dim(self) -> int:
        return len(self.source_names)

    @property
    def target_dim(self) -> int:
        return len(self.target_names)

    def germ(self) -> "InducingMap":
        """The central germ: all parameters set to zero, parameters dropped."""
        params = set(self.s_indices) | set(self.t_indices)
        if not params:
            return self
        keep = [i for i in range(self.source_dim) if i not in params]
        names = [self.source_names[i] for i in keep]
        comps = []
        for c in self.components:
            c0 = c.set_vars_zero(params)
            terms = {}
            for e, v in c0.terms.items():
                terms[tuple(e[i] for i in keep)] = v
            comps.append(Poly(len(keep), terms))
        return InducingMap(names, self.target_names, comps)


class DeformationSetup:
    """A free target divisor with certificate, an inducing map, and parameters."""

    def __init__(self, e_basis: LogBasis, imap: InducingMap,
                 weights: Optional[Sequence[int]] = None):
        if e_basis.n != imap.target_dim:
            raise DeformationError("target divisor and map target dimension disagree")
        self.e_basis = e_basis
        self.map = imap
        self.weights = tuple(weights) if weights is not None else None

    def pulled_equation(self) -> Poly:
        return self.e_basis.divisor.h.compose(self.map.components)


def jacobian_columns(components: Sequence[Poly], source_n: int) -> list:
    """Columns of the Jacobian as elements of the rank-(target dim) free module."""
    m = len(components)
    cols = []
    for v in range(source_n):
        cols.append(FreeElement([components[a].derivative(v) for a in range(m)]))
    return cols


def pulled_field_columns(e_basis: LogBasis, components: Sequence[Poly]) -> list:
    """The target logarithmic fields composed with the map."""
    m = e_basis.n
    cols = []
    for j in range(m):
        cols.append(FreeElement([e_basis.theta[j][a].compose(list(components))
                                 for a in range(m)]))
    return cols


def kev_normal_space(setup: DeformationSetup, order: Optional[MonomialOrder] = None):
    """Presentation and dimension of the normal space of the inducing germ:
    target fields pulled back plus the Jacobian image, inside the free module
    of target directions."""
    imap = setup.map.germ()
    n = imap.source_dim
    rels = jacobian_columns(imap.components, n) + pulled_field_columns(setup.e_basis, imap.components)
    pres = ModulePresentation(imap.target_dim, rels, nvars=n)
    order = order or (MonomialOrder("wdegrevlex", setup.weights)
                      if setup.weights is not None and len(setup.weights) == n
                      else MonomialOrder())
    dim = quotient_dimension(pres, order.with_nvars(n))
    return pres, dim


def t1_log(total_basis: LogBasis, param_indices: Sequence[int],
           kill_indices: Sequence[int] = (), order: Optional[MonomialOrder] = None):
    """Relative T1 of the projection to the chosen parameters: the free module
    on the parameter directions modulo the parameter rows of the basis matrix,
    optionally reduced mod the ideal of the kill parameters."""
    n = total_basis.n
    nv = total_basis.divisor.h.nvars
    d = len(param_indices)
    if d == 0:
        raise DeformationError("at least one deformation parameter required")
    rels = []
    for j in range(n):
        col = FreeElement([total_basis.theta[j][i] for i in param_indices])
        if not col.is_zero():
            rels.append(col)
    for kill in kill_indices:
        s = Poly.variable(nv, kill)
        for a in range(d):
            rels.append(FreeElement.unit(d, nv, a).scale(s))
    pres = ModulePresentation(d, rels, nvars=nv)
    order = order or total_basis.divisor.order()
    dim = quotient_dimension(pres, order.with_nvars(nv))
    return pres, dim


def theta_prime_minors(total_basis: LogBasis, param_indices: Sequence[int],
                       t_indices: Sequence[int] = ()) -> list:
    """Maximal minors of the parameter-rows submatrix, restricted to the
    vanishing of the extension parameters."""
    from itertools import combinations

    from .logarithmic import poly_det

    n = total_basis.n
    rows = list(param_indices) + [t for t in t_indices if t not in param_indices]
    d = len(rows)
    minors = []
    for cols in combinations(range(n), d):
        sub = [[total_basis.theta[j][i] for j in cols] for i in rows]
        m = poly_det(sub)
        if t_indices:
            m = m.set_vars_zero(t_indices)
        if not m.is_zero():
            minors.append(m.primitive()[0])
    seen = set()
    out = []
    for m in minors:
        key = tuple(sorted(m.terms.items()))
        if key not in seen:
            seen.add(key)
            out.append(m)
    return out


def mu_e_alternating(total_basis: LogBasis, param_indices: Sequence[int],
                     order: Optional[MonomialOrder] = None) -> int:
    """Alternating sum of relative T1 dimensions along the parameter chain."""
    d = len(param_indices)
    total = 0
    for i in range(d):
        params = param_indices[i:]
        kills = param_indices[i + 1:]
        _, dim = t1_log(total_basis, params, kills, order)
        if dim == INFINITE:
            raise DeformationError(f"relative T1 at chain position {i + 1} is infinite")
        total += dim if i % 2 == 0 else -dim
    if total < 0:
        raise DeformationError("alternating sum came out negative; chain is not admissible")
    return total


def good_equation_witness(h: Poly, weights: Optional[Sequence[int]] = None) -> Optional[FreeElement]:
    """A field chi with chi(h) = h: the scaled radial field for weighted
    homogeneous h, otherwise a cofactor lift of h over its Jacobian ideal."""
    nv = h.nvars
    if weights is not None and all(w > 0 for w in weights) and h.is_homogeneous(weights):
        deg = h.weighted_degree(weights)
        if deg > 0:
            chi = euler_field(weights, nv)
            return FreeElement([c.scale(Fraction(1, deg)) for c in chi.entries])
    from .groebner import lift_over_generators

    partials = [FreeElement([h.derivative(i)]) for i in range(nv)]
    coeffs = lift_over_generators(FreeElement([h]), partials, MonomialOrder())
    if coeffs is None:
        return None
    chi = FreeElement(coeffs)
    return chi if apply_field(chi, h) == h else None


def mu_e_good_equation(total_h: Poly, param_indices: Sequence[int],
                       witness: FreeElement,
                       order: Optional[MonomialOrder] = None,
                       weights: Optional[Sequence[int]] = None):
    """Dimension of the parameter directions modulo the annihilating fields of
    the equation and the base maximal ideal; requires a good-equation witness."""
    if apply_field(witness, total_h) != total_h:
        raise DeformationError("good-equation witness fails chi(h) = h")
    nv = total_h.nvars
    d = len(param_indices)
    dummy = Divisor([f"v{i}" for i in range(nv)], total_h, check_reduced=False)
    fields = derlog_h(dummy, order)
    rels = []
    for f in fields:
        col = FreeElement([f.entries[i] for i in param_indices])
        if not col.is_zero():
            rels.append(col)
    for kill in param_indices:
        s = Poly.variable(nv, kill)
        for a in range(d):
            rels.append(FreeElement.unit(d, nv, a).scale(s))
    pres = ModulePresentation(d, rels, nvars=nv)
    use_order = order or (MonomialOrder("wdegrevlex", weights) if weights else MonomialOrder())
    return quotient_dimension(pres, use_order.with_nvars(nv))


def mu_e_derham(setup: DeformationSetup, bound: int = 20, window: int = 4) -> int:
    """Singular Milnor number as the dimension of the top checked forms of the
    central fibre modulo exact forms, accumulated over weighted-degree slices."""
    imap = setup.map.germ()
    n = imap.source_dim
    if setup.weights is None:
        raise DeformationError("the de Rham route needs positive weights")
    if len(setup.weights) == n:
        weights = setup.weights
    else:
        params = set(setup.map.s_indices) | set(setup.map.t_indices)
        weights = tuple(w for i, w in enumerate(setup.weights) if i not in params)
    p = n - 1
    mods = [forms_pullback(setup.e_basis, imap.components,
                           imap.source_names, k, weights=weights)
            for k in (p - 1, p)]
    table = cokernel_slice_dims(mods, p, bound)
    return stabilized_sum(table, bound, window)


# ---------------------------------------------------------------------------
# map germs


class SparseLinSpace:
    """Row space over Q with sparse rows keyed by hashable, orderable terms."""

    def __init__(self):
        self.rows: dict = {}

    def _reduce(self, row: dict) -> dict:
        row = {t: c for t, c in row.items() if c}
        while row:
            p = max(row)
            base = self.rows.get(p)
            if base is None:
                return row
            f = row[p]
            for t, c in base.items():
                s = row.get(t, 0) - f * c
                if s:
                    row[t] = s
                else:
                    row.pop(t, None)
        return row

    def add(self, row: dict) -> bool:
        r = self._reduce(row)
        if not r:
            return False
        p = max(r)
        inv = 1 / r[p]
        self.rows[p] = {t: c * inv for t, c in r.items()}
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)


def _truncate_vec(entries: Sequence[Poly], jet_order: int) -> dict:
    out = {}
    for a, poly in enumerate(entries):
        for e, c in poly.terms.items():
            if sum(e) <= jet_order:
                out[(a, e)] = c
    return out


def ae_normal_space_direct(components: Sequence[Poly], cap: int = 20):
    """Codimension of the extended tangent space of a map germ, assembled
    jet order by jet order until two consecutive answers agree.

    The target-pullback part is not finitely generated over the source ring,
    so each truncation spans the image of the tangent space inside the jet
    space exactly; the resulting dimensions increase to the true codimension
    for finite germs and run away for non-finite ones.
    """
    p = len(components)
    if p == 0:
        raise DeformationError("a map germ needs at least one component")
    n = components[0].nvars
    for c in components:
        if c.constant_value() != 0:
            raise DeformationError("map germ components must vanish at the origin")
    partial_cols = [[components[a].derivative(v) for a in range(p)] for v in range(n)]
    orders = []
    for c in components:
        if c.is_zero():
            orders.append(None)
        else:
            orders.append(min(sum(e) for e in c.terms))
    prev = None
    for N in range(1, cap + 1):
        span = SparseLinSpace()
        # source-field images: monomial times each Jacobian column
        for v in range(n):
            col = partial_cols[v]
            for e in _monomials_up_to(n, N):
                shifted = [Poly(n, {tuple(a + b for a, b in zip(e2, e)): c
                                    for e2, c in q.terms.items()}) for q in col]
                vec = _truncate_vec(shifted, N)
                if vec:
                    span.add(vec)
        # target-field images: products of components times each target direction
        for beta_poly in _component_powers(components, orders, N):
            for a in range(p):
                entries = [Poly.zero(n)] * p
                entries = list(entries)
                entries[a] = beta_poly
                vec = _truncate_vec(entries, N)
                if vec:
                    span.add(vec)
        jet_dim = p * comb(n + N, n)
        c_N = jet_dim - span.dim
        if prev is not None and c_N == prev:
            return c_N
        prev = c_N
    return INFINITE_OR_UNSTABLE


def _monomials_up_to(n: int, bound: int):
    out = []

    def rec(i, remaining, prefix):
        if i == n:
            out.append(tuple(prefix))
            return
        for a in range(remaining + 1):
            prefix.append(a)
            rec(i + 1, remaining - a, prefix)
            prefix.pop()

    rec(0, bound, [])
    return out


def _component_powers(components: Sequence[Poly], orders: Sequence[int], bound: int):
    """All products of component powers with vanishing order at most the bound."""
    p = len(components)
    n = components[0].nvars
    results: list = []

    def rec(idx: int, current: Poly, used: int):
        if idx == p:
            results.append(current)
            return
        rec(idx + 1, current, used)
        if orders[idx] is None:
            return
        power = current
        total = used
        while True:
            total += orders[idx]
            if total > bound:
                break
            power = power * components[idx]
            rec(idx + 1, power, total)

    rec(0, Poly.constant(n, 1), 0)
    return results


def ae_codim_damon(df_basis: LogBasis, inclusion: InducingMap,
                   weights: Optional[Sequence[int]] = None,
                   order: Optional[MonomialOrder] = None):
    """Codimension through the discriminant of a stable unfolding: the normal
    space of the inclusion against the discriminant's logarithmic fields."""
    setup = DeformationSetup(df_basis, inclusion, weights=weights)
    _, dim = kev_normal_space(setup, order)
    return dim


def ke_discriminant_reduced(total_basis: LogBasis, s_index: int,
                            order: Optional[MonomialOrder] = None):
    """Whether the zeroth Fitting ideal of the relative T1 over the base equals
    the base maximal ideal (one-parameter miniversal data)."""
    pres, dim = t1_log(total_basis, [s_index], (), order)
    if dim == INFINITE:
        raise DeformationError("relative T1 is infinite; hypotheses do not hold")
    if dim == 0:
        raise DeformationError("relative T1 vanishes (trivial family); no discriminant to test")
    order = (order or total_basis.divisor.order()).with_nvars(pres.nvars)
    gb = groebner_basis(pres.relations, order)
    from .groebner import _component_box, _lead_module
    from .order import mono_divides

    leads = _lead_module(gb, order, pres.rank)
    nv = pres.nvars
    # standard monomial basis of the finite quotient
    basis_terms = []
    for comp in range(pres.rank):
        if any(e == tuple([0] * nv) for e in leads[comp]):
            continue
        box = _component_box(leads[comp], nv)
        if box is None:
            raise DeformationError("relative T1 is not finite over the base point")

        def walk(prefix, i):
            if i == nv:
                e = tuple(prefix)
                if not any(mono_divides(l, e) for l in leads[comp]):
                    basis_terms.append((comp, e))
                return
            for a in range(box[i]):
                prefix.append(a)
                walk(prefix, i + 1)
                prefix.pop()

        walk([], 0)
    m = len(basis_terms)
    index = {t: i for i, t in enumerate(basis_terms)}
    s = Poly.variable(nv, s_index)
    cols = []
    for comp, e in basis_terms:
        el = FreeElement.unit(pres.rank, nv, comp).scale(Poly.monomial(nv, e)).scale(s)
        red = normal_form(el, gb, order)
        col = [Fraction(0)] * m
        for c2, poly in enumerate(red.entries):
            for e2, v in poly.terms.items():
                col[index[(c2, e2)]] = v
        cols.append(col)
    # characteristic polynomial det(sI - M) in one variable
    svar = Poly.variable(1, 0)
    mat = [[svar.scale(1) if i == j else Poly.zero(1) for j in range(m)] for i in range(m)]
    for j in range(m):
        for i in range(m):
            mat[i][j] = mat[i][j] - Poly.constant(1, cols[j][i])
    from .logarithmic import poly_det

    chi = poly_det(mat) if m else Poly.constant(1, 1)
    # Fitting ideal over the base is (chi); reduced iff it equals (s)
    reduced = chi == Poly.variable(1, 0) or chi == -Poly.variable(1, 0)
    return reduced, chi, dim


def cm_regular_sequence_proxy(pres: ModulePresentation, base_indices: Sequence[int],
                              seed: int = 0, retries: int = 5,
                              order: Optional[MonomialOrder] = None):
    """Desk-scale Cohen-Macaulay proxy: cutting by (dim base - 1) generic linear
    forms in the base variables must leave a finite module, with the same
    dimension for several pseudo-random choices."""
    d = len(base_indices)
    cuts = d - 1
    nv = pres.nvars
    order = (order or MonomialOrder()).with_nvars(nv)
    if cuts == 0:
        dim = quotient_dimension(pres, order)
        return dim != INFINITE, dim
    rng = random.Random(seed)
    dims = []
    for attempt in range(retries):
        rels = list(pres.relations)
        for _ in range(cuts):
            form = Poly.zero(nv)
            while form.is_zero():
                form = Poly(nv, {tuple(1 if i == b else 0 for i in range(nv)): Fraction(rng.randint(1, 9))
                                 for b in base_indices})
            for a in range(pres.rank):
                rels.append(FreeElement.unit(pres.rank, nv, a).scale(form))
        cut = ModulePresentation(pres.rank, rels, nvars=nv)
        dim = quotient_dimension(cut, order)
        if dim == INFINITE:
            continue
        dims.append(dim)
        if len(dims) >= 2:
            break
    ok = len(dims) >= 1 and all(x == dims[0] for x in dims)
    return ok, dims[0] if dims else INFINITE
