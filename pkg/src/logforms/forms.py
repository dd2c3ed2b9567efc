"""Torsion-reduced Kahler complexes on free and almost free divisors.

The degree-k module is presented as the quotient of the free module of
polynomial k-forms by a relation submodule: the logarithmic-form generators
for a free divisor, the pulled-back exterior ideal for an almost free one,
and additionally the parameter differentials in the relative case.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .exterior import contract, ext_d, form_basis, form_index, form_rank, monomial_form, wedge
from .groebner import (
    LinSpace,
    QuotientTable,
    StabilizationError,
    groebner_basis,
    is_member,
    kernel_of_map,
    normal_form,
    quotient_dimension,
    saturate,
    submodule_contains,
)
from .logarithmic import LogBasis, apply_field, log_form_generators
from .module import FreeElement, Grading, ModulePresentation, ModuleError
from .order import MonomialOrder
from .poly import Poly, PolyError, poly_exact_div


class FormsError(ValueError):
    pass


class GradedDimensionTable:
    """Weighted degree to dimension, with a stabilization flag.

    The flag is set only when the last two windows of the table agree, so a
    finite tail of zeros (or an eventually constant function) counts as
    stabilized and anything still moving does not.
    """

    def __init__(self, values: dict, window: int = 2):
        self.values = dict(values)
        self.window = window
        degrees = sorted(self.values)
        if len(degrees) >= 2 * window:
            last = [self.values[d] for d in degrees[-window:]]
            prev = [self.values[d] for d in degrees[-2 * window:-window]]
            self.stabilized = last == prev
        else:
            self.stabilized = False

    def total(self) -> int:
        return sum(self.values.values())

    def as_dict(self) -> dict:
        return {"values": {str(d): v for d, v in sorted(self.values.items())},
                "stabilized": self.stabilized}


class CheckedFormsModule:
    """Finite presentation of one degree of the torsion-reduced complex."""

    def __init__(self, names: Sequence[str], ambient_dim: int, k: int,
                 relations: Sequence[FreeElement], h: Poly,
                 weights: Optional[Sequence[int]] = None, kind: str = "free"):
        if k < 0 or k > ambient_dim:
            raise FormsError(f"form degree {k} out of range 0..{ambient_dim}")
        self.names = tuple(names)
        self.n = ambient_dim
        self.k = k
        self.h = h
        self.kind = kind
        self.rank = max(form_rank(self.n, k), 1)
        self.relations = [r for r in relations if not r.is_zero()]
        self.weights = tuple(weights) if weights is not None else None
        self._gb = None
        self._table = None

    @property
    def nvars(self) -> int:
        return self.h.nvars

    def order(self) -> MonomialOrder:
        if self.weights is not None and all(w > 0 for w in self.weights):
            return MonomialOrder("wdegrevlex", self.weights)
        return MonomialOrder("wdegrevlex", (1,) * self.nvars)

    def grading(self) -> Optional[Grading]:
        if self.weights is None or any(w <= 0 for w in self.weights):
            return None
        shifts = [sum(self.weights[i] for i in I) for I in form_basis(self.n, self.k)]
        if not shifts:
            shifts = [0]
        g = Grading(self.weights, shifts)
        for r in self.relations:
            if not r.is_homogeneous(g.weights, g.shifts):
                return None
        return g

    def presentation(self) -> ModulePresentation:
        return ModulePresentation(self.rank, self.relations, grading=self.grading(),
                                  nvars=self.nvars)

    def gb(self) -> list:
        if self._gb is None:
            self._gb = groebner_basis(self.relations, self.order())
        return self._gb

    def table(self) -> QuotientTable:
        if self._table is None:
            pres = self.presentation()
            if pres.grading is None:
                raise FormsError("graded dimension tables need positive weights")
            self._table = QuotientTable(pres, self.order())
        return self._table

    def class_is_zero(self, form: FreeElement) -> bool:
        return is_member(form, self.gb(), self.order())

    def dimension_table(self, bound: int) -> dict:
        return self.table().table(bound)

    def __repr__(self):
        return f"CheckedFormsModule(k={self.k}, kind={self.kind}, {len(self.relations)} relations)"


# ---------------------------------------------------------------------------
# construction


def forms_free(basis: LogBasis, k: int) -> CheckedFormsModule:
    """Degree-k forms modulo h times the logarithmic k-forms of a free divisor."""
    d = basis.divisor
    gens = log_form_generators(basis, k)
    return CheckedFormsModule(d.names, d.nvars, k, gens, d.h, weights=d.weights, kind="free")


def pullback_relation_generators(e_basis: LogBasis, components: Sequence[Poly],
                                 source_n: int, k: int) -> list:
    """Degree-k part of the exterior ideal generated by the pulled-back
    logarithmic form generators of the target divisor."""
    from .exterior import pullback

    m = e_basis.n
    nv = components[0].nvars
    gens: list = []
    for j in range(0, min(k, m) + 1):
        if k - j > source_n:
            continue
        for g in log_form_generators(e_basis, j):
            p = pullback(j, m, g, components, source_n)
            if p.is_zero():
                continue
            if j == k:
                gens.append(p)
            else:
                for M in form_basis(source_n, k - j):
                    unit = monomial_form(source_n, k - j, nv, M, Poly.constant(nv, 1))
                    w = wedge(source_n, j, p, k - j, unit)
                    if not w.is_zero():
                        gens.append(w)
    return gens


def forms_pullback(e_basis: LogBasis, components: Sequence[Poly], source_names: Sequence[str],
                   k: int, weights: Optional[Sequence[int]] = None) -> CheckedFormsModule:
    """Forms on the preimage divisor presented by the pulled-back ideal."""
    n = len(source_names)
    h0 = e_basis.divisor.h.compose(list(components))
    gens = pullback_relation_generators(e_basis, components, n, k)
    return CheckedFormsModule(source_names, n, k, gens, h0, weights=weights, kind="pullback")


def forms_relative(e_basis: LogBasis, components: Sequence[Poly], source_names: Sequence[str],
                   param_indices: Sequence[int], k: int,
                   weights: Optional[Sequence[int]] = None) -> CheckedFormsModule:
    """Relative forms of a family: pulled-back ideal plus parameter differentials."""
    n = len(source_names)
    nv = components[0].nvars
    gens = pullback_relation_generators(e_basis, components, n, k)
    params = set(param_indices)
    for I in form_basis(n, k):
        if set(I) & params:
            gens.append(monomial_form(n, k, nv, I, Poly.constant(nv, 1)))
    h0 = e_basis.divisor.h.compose(list(components))
    return CheckedFormsModule(source_names, n, k, gens, h0, weights=weights, kind="relative")


def forms_free_relative(basis: LogBasis, param_indices: Sequence[int], k: int) -> CheckedFormsModule:
    """Relative forms when the total space itself carries a free-divisor certificate."""
    d = basis.divisor
    n = d.nvars
    gens = log_form_generators(basis, k)
    params = set(param_indices)
    for I in form_basis(n, k):
        if set(I) & params:
            gens.append(monomial_form(n, k, d.h.nvars, I, Poly.constant(d.h.nvars, 1)))
    return CheckedFormsModule(d.names, n, k, gens, d.h, weights=d.weights, kind="relative")


# ---------------------------------------------------------------------------
# operations


def pd_check(m: CheckedFormsModule) -> bool:
    """True when the relation generators form a free basis of the relation module."""
    from .groebner import syzygy_module

    syz = syzygy_module(m.relations, m.order())
    return all(s.is_zero() for s in syz)


def contract_class(m: CheckedFormsModule, chi: FreeElement, form: FreeElement) -> FreeElement:
    """Interior product on classes; chi must be tangent to the divisor."""
    val = apply_field(chi, m.h)
    if not val.is_zero():
        try:
            poly_exact_div(val, m.h)
        except PolyError:
            raise FormsError("contraction field is not logarithmic for the divisor")
    return contract(m.n, m.k, chi, form)


def contraction_well_defined(m: CheckedFormsModule, lower: CheckedFormsModule,
                             chi: FreeElement) -> bool:
    """Check that contracting every relation generator lands in the lower relations."""
    gb = lower.gb()
    order = lower.order()
    for g in m.relations:
        c = contract(m.n, m.k, chi, g)
        if not is_member(c, gb, order):
            return False
    return True


def subquotient_dimension(big_gens: Sequence[FreeElement], small_gens: Sequence[FreeElement],
                          order: MonomialOrder, nvars: int):
    """Dimension of <big>/<small> for nested submodules."""
    big = [g for g in big_gens if not g.is_zero()]
    if not big:
        return 0
    K = kernel_of_map(big, list(small_gens), order)
    pres = ModulePresentation(len(big), K, nvars=nvars)
    return quotient_dimension(pres, order)


def torsion_length(m: CheckedFormsModule, max_steps: int = 30):
    """C-dimension of the elements killed by a power of the maximal ideal."""
    order = m.order()
    nv = m.nvars
    variables = [Poly.variable(nv, i) for i in range(nv)]
    sat = saturate(m.relations, m.rank, variables, order, max_steps=max_steps)
    dim = subquotient_dimension(sat, m.relations, order, nv)
    return dim


def torsion_saturation(m: CheckedFormsModule, max_steps: int = 30) -> list:
    order = m.order()
    nv = m.nvars
    variables = [Poly.variable(nv, i) for i in range(nv)]
    return saturate(m.relations, m.rank, variables, order, max_steps=max_steps)


def class_is_torsion(m: CheckedFormsModule, form: FreeElement) -> bool:
    sat = torsion_saturation(m)
    return is_member(form, sat, m.order())


# ---------------------------------------------------------------------------
# graded slices


class GradedSlices:
    """Standard-monomial slice bases of graded forms modules (indexed by their
    own form degree k), with the degree-preserving derivative matrices."""

    def __init__(self, modules: Sequence[CheckedFormsModule]):
        self.by_k = {}
        for m in modules:
            if m.grading() is None:
                raise FormsError("slice computations need positive weights and homogeneous relations")
            self.by_k[m.k] = m

    def basis(self, k: int, degree: int) -> list:
        m = self.by_k.get(k)
        if m is None:
            return []
        return m.table().standard_monomials(degree)

    def dim(self, k: int, degree: int) -> int:
        return len(self.basis(k, degree))

    def d_matrix(self, k: int, degree: int) -> list:
        """Columns: images under d of the degree-slice basis of level k, in the
        slice coordinates of level k+1."""
        src = self.basis(k, degree)
        mod_next = self.by_k.get(k + 1)
        if mod_next is None:
            return [[] for _ in src]
        tgt = self.basis(k + 1, degree)
        index = {t: i for i, t in enumerate(tgt)}
        cols = []
        gb = mod_next.gb()
        order = mod_next.order()
        n = mod_next.n
        nv = mod_next.nvars
        for comp, e in src:
            I = form_basis(n, k)[comp]
            f = monomial_form(n, k, nv, I, Poly.monomial(nv, e))
            df = ext_d(n, k, f)
            red = normal_form(df, gb, order)
            row = [Fraction(0)] * len(index)
            for c2, p in enumerate(red.entries):
                for e2, c in p.terms.items():
                    pos = index.get((c2, e2))
                    if pos is None:
                        raise FormsError("reduced form left the slice basis")
                    row[pos] = c
            cols.append(row)
        return cols

    def d_rank(self, k: int, degree: int) -> int:
        cols = self.d_matrix(k, degree)
        if not cols:
            return 0
        width = max(len(c) for c in cols)
        if width == 0:
            return 0
        sp = LinSpace(width)
        for c in cols:
            sp.add(c)
        return sp.dim

    def cohomology_dims(self, degree: int) -> list:
        """dim H^k of the degree slice, for k over the supplied modules."""
        ks = sorted(self.by_k)
        dims = {k: self.dim(k, degree) for k in ks}
        ranks = {k: self.d_rank(k, degree) for k in ks}
        out = []
        for k in ks:
            prev = ranks.get(k - 1, 0)
            out.append(dims[k] - ranks[k] - prev)
        return out


def de_rham_report_sliced(modules: Sequence[CheckedFormsModule], bound: int) -> dict:
    """Per-degree exactness report for the augmented complex (positive weights)."""
    slices = GradedSlices(modules)
    report = {}
    all_exact = True
    for degree in range(0, bound + 1):
        coh = slices.cohomology_dims(degree)
        if degree == 0:
            exact = coh[0] == 1 and all(c == 0 for c in coh[1:])
        else:
            exact = all(c == 0 for c in coh)
        report[degree] = {"cohomology": coh, "exact": exact}
        if not exact:
            all_exact = False
    return {"mode": "slice", "per_degree": report, "all_exact": all_exact}


def de_rham_report_homotopy(modules: Sequence[CheckedFormsModule],
                            semiweights: Sequence[int], bound: int) -> dict:
    """Exactness certificate via the contraction homotopy of the radial field of
    the positive-weight variables.

    Valid when every relation generator is homogeneous of positive weight and
    contraction maps each relation level into the one below; the weight-zero
    slice is then the polynomial de Rham complex of the zero-weight variables.
    """
    n = modules[0].n
    nv = modules[0].nvars
    chi = FreeElement([Poly.variable(nv, i).scale(semiweights[i]) for i in range(n)])
    shifts_cache = {}
    for m in modules:
        shifts = [sum(semiweights[i] for i in I) for I in form_basis(m.n, m.k)] or [0]
        shifts_cache[m.k] = shifts
        for r in m.relations:
            degs = r.weighted_degree(semiweights, shifts)
            if degs is None:
                continue
            if len(degs) != 1 or min(degs) <= 0:
                return {"mode": "homotopy", "all_exact": False,
                        "failure": "relation generator not homogeneous of positive weight"}
    for k in range(1, len(modules)):
        if not contraction_well_defined(modules[k], modules[k - 1], chi):
            return {"mode": "homotopy", "all_exact": False,
                    "failure": f"contraction does not preserve relations at degree {k}"}
    report = {degree: {"exact": True, "certificate": "radial-contraction homotopy"}
              for degree in range(0, bound + 1)}
    report[0]["certificate"] = "weight-zero slice is the de Rham complex of the zero-weight variables"
    return {"mode": "homotopy", "per_degree": report, "all_exact": True}


def cokernel_slice_dims(modules: Sequence[CheckedFormsModule], k_top: int, bound: int) -> dict:
    """Per-degree dimensions of level k_top modulo the image of d from below."""
    slices = GradedSlices(modules)
    out = {}
    for degree in range(0, bound + 1):
        dim = slices.dim(k_top, degree)
        rank = slices.d_rank(k_top - 1, degree) if k_top >= 1 else 0
        out[degree] = dim - rank
    return out


def stabilized_sum(table: dict, bound: int, window: int):
    """Sum the per-degree table, requiring a trailing window of zeros."""
    total = sum(table.values())
    tail = [table[d] for d in range(max(0, bound - window + 1), bound + 1)]
    if any(t != 0 for t in tail):
        raise StabilizationError(
            f"per-degree contributions did not vanish over the last {window} degrees")
    return total


def wedge_map_kernel_dims(source: CheckedFormsModule, target: CheckedFormsModule,
                          wedge_form: FreeElement, wedge_deg: int, bound: int) -> dict:
    """Per-degree kernel dimensions of (wedge with a fixed form) on slice bases."""
    t_table = target.table()
    gb = target.gb()
    order = target.order()
    n = target.n
    nv = target.nvars
    out = {}
    shift = None
    for degree in range(0, bound + 1):
        src = source.table().standard_monomials(degree)
        if not src:
            out[degree] = 0
            continue
        # weighted degree of the wedge form (homogeneous)
        if shift is None:
            degs = wedge_form.weighted_degree(
                target.weights,
                [sum(target.weights[i] for i in I) for I in form_basis(n, wedge_deg)])
            shift = min(degs)
        tgt = t_table.standard_monomials(degree + shift)
        index = {t: i for i, t in enumerate(tgt)}
        sp = LinSpace(len(index) if index else 1)
        kernel = 0
        for comp, e in src:
            I = form_basis(source.n, source.k)[comp] if form_rank(source.n, source.k) else ()
            f = monomial_form(source.n, source.k, nv, I, Poly.monomial(nv, e))
            w = wedge(n, wedge_deg, wedge_form, source.k, f)
            red = normal_form(w, gb, order)
            if red.is_zero():
                kernel += 1
                continue
            row = [Fraction(0)] * len(index)
            for c2, p in enumerate(red.entries):
                for e2, v in p.terms.items():
                    row[index[(c2, e2)]] = v
            if not sp.add(row):
                kernel += 1
        out[degree] = kernel
    return out
