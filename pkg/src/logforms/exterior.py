"""Exact exterior algebra on polynomial coefficients.

Degree-k forms on an n-variable ring are FreeElements of rank C(n, k); the
component basis is the list of strictly increasing index tuples in
lexicographic order (dx_I for I = (i_1 < ... < i_k)).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .module import FreeElement, ModuleError
from .poly import Poly


@lru_cache(maxsize=None)
def form_basis(n: int, k: int) -> tuple:
    """Index tuples of the dx_I basis of k-forms, lexicographic."""
    if k < 0 or k > n:
        return ()
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def form_index(n: int, k: int) -> dict:
    return {I: pos for pos, I in enumerate(form_basis(n, k))}


def form_rank(n: int, k: int) -> int:
    return len(form_basis(n, k))


def zero_form(n: int, k: int, nvars: int) -> FreeElement:
    return FreeElement.zero(max(form_rank(n, k), 1), nvars)


def merge_sign(I: tuple, J: tuple):
    """Sign of sorting the concatenation I+J; None when indices overlap."""
    if set(I) & set(J):
        return None, None
    inversions = sum(1 for i in I for j in J if j < i)
    merged = tuple(sorted(I + J))
    return (-1) ** inversions, merged


def wedge(n: int, ka: int, a: FreeElement, kb: int, b: FreeElement) -> FreeElement:
    """Exterior product of a k_a-form and a k_b-form."""
    k = ka + kb
    nv = a.nvars
    if k > n:
        return zero_form(n, 0, nv).scale(0) if form_rank(n, k) == 0 else FreeElement.zero(form_rank(n, k), nv)
    basis_a = form_basis(n, ka)
    basis_b = form_basis(n, kb)
    idx = form_index(n, k)
    out = [Poly.zero(nv) for _ in range(form_rank(n, k))]
    for pa, I in enumerate(basis_a):
        ca = a.entries[pa]
        if ca.is_zero():
            continue
        for pb, J in enumerate(basis_b):
            cb = b.entries[pb]
            if cb.is_zero():
                continue
            sign, merged = merge_sign(I, J)
            if sign is None:
                continue
            term = ca * cb
            if sign < 0:
                term = -term
            pos = idx[merged]
            out[pos] = out[pos] + term
    return FreeElement(out)


def ext_d(n: int, k: int, a: FreeElement) -> FreeElement:
    """Exterior derivative of a k-form."""
    nv = a.nvars
    if k >= n:
        return FreeElement.zero(max(form_rank(n, k + 1), 1), nv)
    basis = form_basis(n, k)
    idx = form_index(n, k + 1)
    out = [Poly.zero(nv) for _ in range(form_rank(n, k + 1))]
    for pos, I in enumerate(basis):
        c = a.entries[pos]
        if c.is_zero():
            continue
        for v in range(n):
            if v in I:
                continue
            dc = c.derivative(v)
            if dc.is_zero():
                continue
            sign, merged = merge_sign((v,), I)
            p = idx[merged]
            out[p] = out[p] + (dc if sign > 0 else -dc)
    return FreeElement(out)


def contract(n: int, k: int, field: FreeElement, a: FreeElement) -> FreeElement:
    """Interior product of a k-form with a vector field (rank-n element)."""
    if field.rank != n:
        raise ModuleError("vector field must have one component per variable")
    nv = a.nvars
    if k == 0:
        return FreeElement.zero(1, nv)
    basis = form_basis(n, k)
    idx = form_index(n, k - 1)
    out = [Poly.zero(nv) for _ in range(form_rank(n, k - 1))]
    for pos, I in enumerate(basis):
        c = a.entries[pos]
        if c.is_zero():
            continue
        for p, i in enumerate(I):
            coeff = field.entries[i]
            if coeff.is_zero():
                continue
            rest = I[:p] + I[p + 1:]
            term = c * coeff
            if p % 2 == 1:
                term = -term
            out[idx[rest]] = out[idx[rest]] + term
    return FreeElement(out)


def pullback(k: int, target_n: int, form: FreeElement, components: Sequence[Poly],
             source_n: int) -> FreeElement:
    """Pull a k-form on the target back along the map with the given components.

    `form` has rank C(target_n, k) with coefficients in the target ring;
    `components` are target coordinates expressed in source-ring polynomials.
    """
    if len(components) != target_n:
        raise ModuleError("one component per target variable required")
    nv = source_n if not components else components[0].nvars
    if k == 0:
        return FreeElement([form.entries[0].compose(list(components))])
    basis = form_basis(target_n, k)
    # differentials of the components as source 1-forms
    dcomp = []
    for f in components:
        entries = [f.derivative(v) for v in range(source_n)]
        dcomp.append(FreeElement(entries))
    out = FreeElement.zero(max(form_rank(source_n, k), 1), nv)
    for pos, J in enumerate(basis):
        c = form.entries[pos]
        if c.is_zero():
            continue
        pulled_c = c.compose(list(components))
        if pulled_c.is_zero():
            continue
        block = None
        deg = 0
        for j in J:
            if block is None:
                block = dcomp[j]
                deg = 1
            else:
                block = wedge(source_n, deg, block, 1, dcomp[j])
                deg += 1
        if block is None or block.is_zero():
            continue
        out = out + block.scale(pulled_c)
    return out


def vol_form(n: int, nvars: int) -> FreeElement:
    """dx_1 ^ ... ^ dx_n as an n-form."""
    e = FreeElement.zero(1, nvars)
    return FreeElement([Poly.constant(nvars, 1)])


def monomial_form(n: int, k: int, nvars: int, I: tuple, coeff: Poly) -> FreeElement:
    entries = [Poly.zero(nvars) for _ in range(form_rank(n, k))]
    entries[form_index(n, k)[I]] = coeff
    return FreeElement(entries)
