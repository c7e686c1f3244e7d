"""Stable and perfect Grothendieck groups from harvested short exact sequences.

Generators are isomorphism classes of indecomposable non-projective modules
collected in a ``ModulePool``; relations come from enumerating Ext^1 classes
among pool members and small sums of them.  The class maps between the perfect
group and complexes in H^P are ``sigma`` and ``sigma_tilde``.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from . import fp
from .algebra import Algebra
from .complexes import WindowedComplex
from .errors import DecompositionInconclusive, NotInPool, PoolOverflow
from .functors import cosyzygy_module, nakayama, nakayama_inverse, syzygy_module
from .kato import hull_membership, is_perfect_exact
from .modules import (
    Module,
    ModuleMap,
    cokernel,
    composition_factors,
    decompose,
    direct_sum,
    dual,
    ext1,
    injective_hull,
    is_isomorphic_indecomposable,
    is_projective,
    projective_module,
    radical,
    simple_module,
    quotient,
)

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 2 ** 16
SAMPLED_CLASSES = 256
POOL_SIZE_CAP = 64
POOL_ROUNDS = 8

PERFECT = "perfect"
STABLE = "stable"


# -------------------------------------------------------------------- pool

@dataclass
class ModulePool:
    alg: Algebra
    members: list
    origins: list
    converged: bool

    def __len__(self):
        return len(self.members)

    def labels(self):
        return [m.label or f"M{i}" for i, m in enumerate(self.members)]

    def index_of(self, x: Module) -> int:
        for i, m in enumerate(self.members):
            if m.dim == x.dim and is_isomorphic_indecomposable(m, x):
                return i
        raise NotInPool(f"indecomposable of dimension {x.dim} is not in the pool")

    def class_vector(self, x: Module) -> np.ndarray:
        """Coefficients of [x] in the pool basis; projective summands count as zero."""
        v = np.zeros(len(self.members), dtype=np.int64)
        if x.dim == 0:
            return v
        for mod, mult in decompose(x):
            if is_projective(mod):
                continue
            v[self.index_of(mod)] += mult
        return v


def _indecomposable_pieces(x: Module):
    if x.dim == 0:
        return []
    return [m for m, _ in decompose(x)]


def build_pool(alg: Algebra, dim_cap=12, seed=0, size_cap=POOL_SIZE_CAP, rounds=POOL_ROUNDS) -> ModulePool:
    members, origins = [], []

    def offer(x: Module, origin: str) -> bool:
        added = False
        for m in _indecomposable_pieces(x):
            if m.dim > dim_cap or is_projective(m):
                continue
            if any(o.dim == m.dim and is_isomorphic_indecomposable(o, m) for o in members):
                continue
            if len(members) >= size_cap:
                raise PoolOverflow(f"pool exceeded {size_cap} members")
            if not m.label:
                m.label = f"M{len(members)}"
            members.append(m)
            origins.append(origin)
            added = True
        return added

    n = alg.num_projectives
    for i in range(n):
        offer(simple_module(alg, i), f"simple {alg.rep_label(i)}")
    for i in range(n):
        inj = dual(projective_module(alg.opposite(), i))
        inj.label = f"I{alg.rep_label(i)}"
        offer(inj, f"injective {alg.rep_label(i)}")
    for i in range(n):
        offer(radical(projective_module(alg, i))[0], f"radical of P{alg.rep_label(i)}")

    converged = False
    done = set()
    for _ in range(rounds):
        grew = False
        snapshot = list(enumerate(members))
        for i, m in snapshot:
            if i in done:
                continue
            done.add(i)
            tag = m.label
            grew |= offer(syzygy_module(m), f"syzygy of {tag}")
            grew |= offer(cosyzygy_module(m), f"cosyzygy of {tag}")
            grew |= offer(radical(m)[0], f"radical of {tag}")
            grew |= offer(quotient(m, m.socle_basis())[0], f"socle quotient of {tag}")
            grew |= offer(nakayama(m), f"nu of {tag}")
            grew |= offer(nakayama_inverse(m), f"nu^-1 of {tag}")
        for (i, z), (j, x) in itertools.product(list(enumerate(members)), repeat=2):
            e = ext1(z, x)
            if e.dim == 0 or z.dim + x.dim > dim_cap:
                continue
            for coeffs in _ext_classes(e.dim, alg.p, seed):
                if not any(coeffs):
                    continue
                grew |= offer(e.middle_term(coeffs).y, f"extension of {z.label} by {x.label}")
        if not grew:
            converged = True
            break
    return ModulePool(alg, members, origins, converged)


def _ext_classes(dim: int, p: int, seed: int):
    if p ** dim <= EXHAUSTIVE_LIMIT:
        return list(itertools.product(range(p), repeat=dim))
    rng = np.random.default_rng(seed)
    return [tuple(int(c) for c in rng.integers(0, p, size=dim)) for _ in range(SAMPLED_CLASSES)]


# --------------------------------------------------------------- relations

@dataclass
class Harvest:
    rows: list
    sequences: int
    kept: int
    skipped: int
    exhaustive: bool


def _small_sums(pool: ModulePool, size=2):
    out = []
    idx = range(len(pool))
    for k in range(1, size + 1):
        for combo in itertools.combinations_with_replacement(idx, k):
            mods = [pool.members[i] for i in combo]
            out.append((combo, mods[0] if k == 1 else direct_sum(*mods)))
    return out


def _left_terms(pool: ModulePool, mode: str):
    """(stable part, module) pairs used as the left end of a sequence."""
    alg = pool.alg
    out = [(m, m) for _, m in _small_sums(pool)]
    if mode == STABLE:
        for i in range(alg.num_projectives):
            pi = projective_module(alg, i)
            out.append((None, pi))
            for _, m in _small_sums(pool, 1):
                out.append((m, direct_sum(m, pi)))
    return out


def harvest_relations(pool: ModulePool, mode=PERFECT, seed=0, sum_size=2) -> Harvest:
    rows, seen, total, kept, skipped = [], set(), 0, 0, 0
    exhaustive = True
    if not pool.members:
        return Harvest([], 0, 0, 0, True)
    rights = [m for _, m in _small_sums(pool, sum_size)]
    for z in rights:
        for xs, x in _left_terms(pool, mode):
            e = ext1(z, x)
            if e.dim and pool.alg.p ** e.dim > EXHAUSTIVE_LIMIT:
                exhaustive = False
            for coeffs in _ext_classes(e.dim, pool.alg.p, seed) if e.dim else [()]:
                total += 1
                seq = e.middle_term(coeffs) if e.dim else None
                if seq is None:
                    continue
                if mode == PERFECT and not is_perfect_exact(seq.left, seq.right):
                    continue
                try:
                    row = (pool.class_vector(xs) if xs is not None else np.zeros(len(pool), dtype=np.int64)) \
                        - pool.class_vector(seq.y) + pool.class_vector(z)
                except DecompositionInconclusive:
                    skipped += 1
                    log.warning("skipped a sequence whose middle term did not decompose")
                    continue
                kept += 1
                key = tuple(int(v) for v in row)
                if any(key) and key not in seen:
                    seen.add(key)
                    rows.append(key)
    rows.sort()
    return Harvest(rows, total, kept, skipped, exhaustive)


# --------------------------------------------------------- cocycle oracle

def derivations(z: Module, x: Module):
    """Basis of derivations delta (one dZ x dX block per algebra basis element).

    A derivation makes Y_a = [[X_a, 0], [delta_a, Z_a]] a module, i.e.
    delta_{ab} = delta_a X_b + Z_a delta_b.
    """
    alg, p = z.alg, z.p
    n, dz, dx = alg.dim, z.dim, x.dim
    size = n * dz * dx
    if size == 0:
        return np.zeros((0, n, dz, dx), dtype=np.int64)
    eye = np.eye(size, dtype=np.int64).reshape(size, n, dz, dx)
    eqs = []
    for i in range(n):
        for j in range(n):
            lhs = np.einsum("k,skab->sab", alg.mul[i, j], eye)
            rhs = np.einsum("sab,bc->sac", eye[:, i], x.action[j]) + \
                np.einsum("ab,sbc->sac", z.action[i], eye[:, j])
            eqs.append(np.mod(lhs - rhs, p).reshape(size, -1))
    sol = fp.left_nullspace(np.hstack(eqs), p)
    return sol.reshape(-1, n, dz, dx)


def inner_derivations(z: Module, x: Module):
    p = z.p
    out = []
    for h in np.eye(z.dim * x.dim, dtype=np.int64).reshape(-1, z.dim, x.dim):
        out.append(np.mod(np.einsum("aij,jk->aik", z.action, h) - np.einsum("ij,ajk->aik", h, x.action), p))
    return np.array(out, dtype=np.int64).reshape(-1, z.alg.dim, z.dim, x.dim)


def cocycle_extensions(z: Module, x: Module, seed=0):
    """Representatives of Ext^1(z, x) built directly from derivations.

    Yields (coefficients, middle module, inclusion x -> Y, projection Y -> z).
    """
    p = z.p
    der = derivations(z, x)
    inner = inner_derivations(z, x)
    flat_i = fp.row_basis(inner.reshape(inner.shape[0], z.alg.dim * z.dim * x.dim), p) if inner.size else \
        fp.zeros(0, z.alg.dim * z.dim * x.dim)
    chosen = []
    span = flat_i
    for d in der.reshape(der.shape[0], z.alg.dim * z.dim * x.dim):
        if not fp.in_span(span, d, p):
            chosen.append(d)
            span = np.vstack([span, d[None, :]])
    reps = np.array(chosen, dtype=np.int64).reshape(-1, z.alg.dim, z.dim, x.dim)
    for coeffs in _ext_classes(len(chosen), p, seed):
        delta = np.mod(np.einsum("m,maij->aij", np.array(coeffs, dtype=np.int64), reps), p) if chosen \
            else np.zeros((z.alg.dim, z.dim, x.dim), dtype=np.int64)
        act = np.zeros((z.alg.dim, x.dim + z.dim, x.dim + z.dim), dtype=np.int64)
        act[:, :x.dim, :x.dim] = x.action
        act[:, x.dim:, :x.dim] = delta
        act[:, x.dim:, x.dim:] = z.action
        y = Module(z.alg, act, check=True)
        inc = ModuleMap(x, y, np.hstack([fp.identity(x.dim), fp.zeros(x.dim, z.dim)]))
        proj = ModuleMap(y, z, np.vstack([fp.zeros(x.dim, z.dim), fp.identity(z.dim)]))
        yield coeffs, y, inc, proj


def oracle_relations(pool: ModulePool, mode=PERFECT, seed=0, sum_size=2) -> list:
    """Relation rows from the cocycle construction, independent of the pushout path."""
    rows = set()
    for _, z in _small_sums(pool, sum_size):
        for xs, x in _left_terms(pool, mode):
            for _, y, inc, proj in cocycle_extensions(z, x, seed):
                if mode == PERFECT and not is_perfect_exact(inc, proj):
                    continue
                row = (pool.class_vector(xs) if xs is not None else np.zeros(len(pool), dtype=np.int64)) \
                    - pool.class_vector(y) + pool.class_vector(z)
                if np.any(row):
                    rows.add(tuple(int(v) for v in row))
    return sorted(rows)


# ------------------------------------------------------------------ groups

@dataclass
class GroupPresentation:
    generators: list
    relations: list
    invariant_factors: tuple  # torsion part, each > 1
    free_rank: int
    stamp: str
    census: dict = field(default_factory=dict)

    def describe(self):
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def as_dict(self):
        return {
            "generators": list(self.generators),
            "relationCount": len(self.relations),
            "invariantFactors": list(self.invariant_factors),
            "freeRank": self.free_rank,
            "group": self.describe(),
            "exactnessStamp": self.stamp,
        }

    def contains(self, vector) -> bool:
        """Is the integer vector zero in the presented group?"""
        if not self.relations:
            return not any(int(v) for v in vector)
        return fp.in_row_lattice([int(v) for v in vector], self.relations)


def _snf(rows, n):
    if not rows:
        return (), n
    snf = fp.smith_normal_form(rows)
    return snf.torsion, snf.free_rank


def g0(alg: Algebra, mode=PERFECT, dim_cap=12, seed=0, pool: ModulePool | None = None) -> GroupPresentation:
    pool = pool if pool is not None else build_pool(alg, dim_cap=dim_cap, seed=seed)
    n = len(pool)
    harvest = harvest_relations(pool, mode, seed)
    torsion, free = _snf(harvest.rows, n)
    oracle = oracle_relations(pool, mode, seed)
    o_torsion, o_free = _snf(oracle, n)
    agree = (torsion, free) == (o_torsion, o_free) and all(
        fp.in_row_lattice(list(r), harvest.rows) if harvest.rows else not any(r) for r in oracle)
    exact = agree and pool.converged and harvest.exhaustive and harvest.skipped == 0
    census = {"sequences": harvest.sequences, "kept": harvest.kept, "skipped": harvest.skipped,
              "poolConverged": pool.converged, "oracleRelations": len(oracle)}
    return GroupPresentation(pool.labels(), harvest.rows, torsion, free,
                             "exact" if exact else "upper bound", census)


# ------------------------------------------------------------ sigma maps

def sigma(pool: ModulePool, x: Module) -> np.ndarray:
    """[x] -> [F_x], recorded in the pool basis (projective summands vanish)."""
    return pool.class_vector(x)


def hull_classes(pool: ModulePool, h: Module):
    """([I_h], [C_h]): injective hulls of the composition factors and their cokernels."""
    alg = h.alg
    i_vec = np.zeros(len(pool), dtype=np.int64)
    c_vec = np.zeros(len(pool), dtype=np.int64)
    for idx, mult in composition_factors(h).items():
        s = simple_module(alg, idx)
        inj, emb = injective_hull(s)
        i_vec += mult * pool.class_vector(inj)
        c_vec += mult * pool.class_vector(cokernel(emb)[0])
    return i_vec, c_vec


def sigma_tilde(pool: ModulePool, f: WindowedComplex, l=None, r=None) -> np.ndarray:
    """sum_{k=l}^{r-1} (-1)^k ([I_{H^k}] - [C_{H^k}]) + (-1)^r [H^r(tau<=r F)]."""
    if l is None or r is None:
        cert = hull_membership(f)
        l = cert.l if l is None else l
        r = cert.r if r is None else r
    if l > r:
        raise ValueError("need l <= r")
    out = np.zeros(len(pool), dtype=np.int64)
    for k in range(l, r):
        h = f.cohomology(k)
        if h.dim == 0:
            continue
        i_vec, c_vec = hull_classes(pool, h)
        out += (-1) ** (k % 2) * (i_vec - c_vec)
    g = f if f.lo <= r - 1 and f.hi >= r else f.extend(min(f.lo, r - 1), max(f.hi, r))
    residue = cokernel(g.diff(r - 1))[0]
    out += (-1) ** (r % 2) * pool.class_vector(residue)
    return out
