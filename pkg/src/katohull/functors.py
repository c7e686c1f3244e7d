"""Duality functors and the projective-injective classifications.

``star`` is Hom_A(-, A) landing in modules over the opposite algebra,
``dual`` is the vector-space dual, and the Nakayama functor and its
inverse are their two composites.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fp
from .algebra import Algebra
from .modules import (
    Module,
    ModuleMap,
    cokernel,
    decompose,
    dual,
    hom_basis,
    is_injective,
    is_isomorphic_indecomposable,
    is_projective,
    injective_hull,
    proj_sum,
    projective_cover,
    projective_module,
    regular_module,
    resolution,
)


@dataclass
class StarData:
    """x* together with the Hom basis that its coordinates refer to."""

    module: Module
    basis: np.ndarray  # (h, dim x, dim A)
    solver: np.ndarray  # flattened-hom -> coordinates


def star_data(x: Module) -> StarData:
    alg, p = x.alg, x.p
    op = alg.opposite()
    basis = hom_basis(x, regular_module(alg))
    h = basis.shape[0]
    if h == 0:
        return StarData(Module(op, np.zeros((alg.dim, 0, 0), dtype=np.int64), check=False),
                        basis, fp.zeros(x.dim * alg.dim, 0))
    flat = basis.reshape(h, -1)
    solver = fp.right_inverse(flat, p)
    # (a . phi) = phi followed by left multiplication by a
    moved = np.mod(np.einsum("kin,anm->akim", basis, alg.left_mult), p).reshape(alg.dim, h, -1)
    action = np.mod(moved @ solver, p)
    return StarData(Module(op, action, check=False), basis, solver)


def star(x: Module) -> Module:
    if x.proj_types is not None:
        return proj_sum(x.alg.opposite(), x.proj_types)
    return star_data(x).module


def star_map(f: ModuleMap) -> ModuleMap:
    """f* : Y* -> X*, psi -> f then psi."""
    if f.source.proj_types is not None and f.target.proj_types is not None:
        return star_proj_map(f)
    sx, sy = star_data(f.source), star_data(f.target)
    p = f.source.p
    if sy.basis.shape[0] == 0 or sx.basis.shape[0] == 0:
        return ModuleMap(sy.module, sx.module, fp.zeros(sy.module.dim, sx.module.dim))
    pulled = np.mod(np.einsum("ij,kjn->kin", f.matrix, sy.basis), p).reshape(sy.basis.shape[0], -1)
    return ModuleMap(sy.module, sx.module, fp.mul(pulled, sx.solver, p))


# ------------------------------------------------ maps between projective sums

def _block_sizes(alg, types):
    return [alg.projective_basis(alg.reps[t]).shape[0] for t in types]


def to_elements(f: ModuleMap):
    """Element matrix y[s][t] in e_t A e_s: generator of block s goes to y[s][t] * e_t."""
    alg, p = f.source.alg, f.source.p
    st, tt = f.source.proj_types, f.target.proj_types
    so, to = np.cumsum([0] + _block_sizes(alg, st)), np.cumsum([0] + _block_sizes(alg, tt))
    out = np.zeros((len(st), len(tt), alg.dim), dtype=np.int64)
    for s in range(len(st)):
        row = f.matrix[so[s]]
        for t, jt in enumerate(tt):
            w = alg.projective_basis(alg.reps[jt])
            out[s, t] = fp.mul(row[to[t]:to[t + 1]], w, p)
    return out


def from_elements(alg: Algebra, src_types, tgt_types, elems) -> ModuleMap:
    """Module map between projective sums given by left multiplication by elements."""
    p = alg.p
    src, tgt = proj_sum(alg, src_types), proj_sum(alg, tgt_types)
    m = fp.zeros(src.dim, tgt.dim)
    so, to = np.cumsum([0] + _block_sizes(alg, src_types)), np.cumsum([0] + _block_sizes(alg, tgt_types))
    elems = np.asarray(elems, dtype=np.int64).reshape(len(src_types), len(tgt_types), alg.dim)
    for s, i in enumerate(src_types):
        ws = alg.projective_basis(alg.reps[i])
        for t, j in enumerate(tgt_types):
            y = elems[s, t]
            if not np.any(y):
                continue
            wt = alg.projective_basis(alg.reps[j])
            prod = fp.mul(ws, alg.left_matrix(y), p)
            m[so[s]:so[s + 1], to[t]:to[t + 1]] = fp.coordinates(wt, prod, p)
    return ModuleMap(src, tgt, m)


def star_proj_map(f: ModuleMap) -> ModuleMap:
    op = f.source.alg.opposite()
    elems = to_elements(f).transpose(1, 0, 2)
    return from_elements(op, f.target.proj_types, f.source.proj_types, elems)


# -------------------------------------------------------------- Nakayama

def nakayama(x: Module) -> Module:
    return dual(star(x))


def nakayama_inverse(x: Module) -> Module:
    return star(dual(x))


def nakayama_map(f: ModuleMap) -> ModuleMap:
    s = star_map(f)
    return ModuleMap(dual(s.target), dual(s.source), s.matrix.T)


def evaluation_rank(x: Module) -> int:
    """Rank of the evaluation map x -> x**."""
    p = x.p
    sx = star_data(x)
    if sx.basis.shape[0] == 0:
        return 0
    sxx = star_data(sx.module)
    if sxx.basis.shape[0] == 0:
        return 0
    # ev_v(phi_k) = v @ phi_k, as a map x* -> A^op with matrix rows indexed by k
    ev = np.mod(np.einsum("vi,kin->vkn", fp.identity(x.dim), sx.basis), p).reshape(x.dim, -1)
    coords = fp.mul(ev, sxx.solver, p)
    return fp.rank(coords, p)


def is_reflexive(x: Module) -> bool:
    sxx = star(star(x))
    return sxx.dim == x.dim and evaluation_rank(x) == x.dim


def transpose(x: Module) -> Module:
    """Tr x = cokernel of the starred minimal presentation P_1 -> P_0."""
    res = resolution(x, 1)
    if len(res.diffs) == 0:
        op = x.alg.opposite()
        if res.terms[0].dim == x.dim:
            return Module(op, np.zeros((op.dim, 0, 0), dtype=np.int64), check=False)
        d = ModuleMap(proj_sum(x.alg, ()), res.terms[0], fp.zeros(0, res.terms[0].dim))
    else:
        d = res.diffs[0]
    mod, _ = cokernel(star_map(d))
    return mod


def syzygy_module(x: Module) -> Module:
    from .modules import syzygy

    return syzygy(x)[0]


def cosyzygy_module(x: Module) -> Module:
    i, emb = injective_hull(x)
    return cokernel(emb)[0]


def stable_hom_dim(x: Module, y: Module) -> int:
    """dim of Hom(x, y) modulo maps factoring through a projective."""
    p = x.p
    homs = hom_basis(x, y)
    if homs.shape[0] == 0:
        return 0
    cover, pi = projective_cover(y)
    via = hom_basis(x, cover)
    if via.shape[0] == 0:
        return homs.shape[0]
    through = np.mod(np.einsum("mij,jk->mik", via, pi.matrix), p).reshape(via.shape[0], -1)
    return homs.shape[0] - fp.rank(through, p)


# ---------------------------------------------- projective-injectives

def proj_injectives(alg: Algebra) -> list:
    """Indices of representative projectives that are also injective."""
    return [i for i in range(alg.num_projectives) if is_injective(projective_module(alg, i))]


def _projective_type(alg: Algebra, z: Module):
    """Index i with z isomorphic to P_i, or None."""
    for i in range(alg.num_projectives):
        pm = projective_module(alg, i)
        if pm.dim == z.dim and is_isomorphic_indecomposable(pm, z):
            return i
    return None


def nakayama_orbit(alg: Algebra, i: int):
    """Follow P_i, nu P_i, ... until it leaves the projectives or revisits a class.

    Returns (orbit of projective indices, stays_projective).  The orbit has
    at most (number of projectives + 1) steps by pigeonhole.
    """
    orbit = [i]
    z = projective_module(alg, i)
    while True:
        z = nakayama(z)
        j = _projective_type(alg, z) if is_projective(z) else None
        if j is None:
            return orbit, False
        if j in orbit:
            return orbit, True
        orbit.append(j)


def strongly_proj_injectives(alg: Algebra) -> list:
    return [i for i in range(alg.num_projectives) if nakayama_orbit(alg, i)[1]]


@dataclass(frozen=True)
class DominantDimension:
    value: int
    at_least: bool  # True when every computed term qualified

    def __str__(self):
        return f">={self.value}" if self.at_least else str(self.value)


def _in_add(alg: Algebra, x: Module, allowed) -> bool:
    if x.dim == 0:
        return True
    for mod, _ in decompose(x):
        j = _projective_type(alg, mod) if is_projective(mod) else None
        if j is None or j not in allowed:
            return False
    return True


def injective_resolution_terms(x: Module, count: int):
    terms = []
    cur = x
    for _ in range(count):
        if cur.dim == 0:
            terms.append(cur)
            continue
        i, emb = injective_hull(cur)
        terms.append(i)
        cur = cokernel(emb)[0]
    return terms


def nu_dominant_dimension(alg: Algebra, cap: int) -> DominantDimension:
    """Number of leading terms of the minimal injective resolution of A that lie in add(stp A)."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    stp = set(strongly_proj_injectives(alg))
    for k, term in enumerate(injective_resolution_terms(regular_module(alg), cap)):
        if not _in_add(alg, term, stp):
            return DominantDimension(k, False)
    return DominantDimension(cap, True)


@dataclass(frozen=True)
class SelfInjectivity:
    value: bool
    witness: int | None  # projective index that is not injective


def is_self_injective(alg: Algebra) -> SelfInjectivity:
    for i in range(alg.num_projectives):
        if not is_injective(projective_module(alg, i)):
            return SelfInjectivity(False, i)
    return SelfInjectivity(True, None)


def simple_projective_injectives(alg: Algebra) -> list:
    """Simple projective-injective summands (semisimple blocks) of A."""
    out = []
    for i in proj_injectives(alg):
        pm = projective_module(alg, i)
        if pm.radical_basis().shape[0] == 0:
            out.append(i)
    return out
