"""Windowed cochain complexes of projective modules.

A complex F stores projective sums F^k (as lists of projective types) and
differentials d^k : F^k -> F^{k+1} for lo <= k <= hi.  Outside the window the
tails carry what is known:

* left ``"zero"``: F^k = 0 for k < lo.
* left ``"resolution"``: H^k(F) = 0 for every k <= lo.
* right ``"zero"``: F^k = 0 for k > hi.
* right ``"dual_resolution"``: H_k(F*) = 0 for every k >= hi.

Every complex remembers the expression that produced it, so it can be
rebuilt on a wider window.  Rebuilding is deterministic and agrees with the
old window on the overlap.
"""
from __future__ import annotations


import numpy as np

from . import fp
from .algebra import Algebra
from .errors import (
    IncompatibleTails,
    Inconclusive,
    LiftObstruction,
    Unknowable,
    WindowUnderflow,
)
from .functors import star_proj_map
from .modules import (
    Module,
    ModuleMap,
    hom_basis,
    proj_sum,
    quotient,
    submodule,
    zero_module,
)

ZERO = "zero"
RESOLUTION = "resolution"
DUAL_RESOLUTION = "dual_resolution"

CHAIN_ISO_TRIALS = 256


class WindowedComplex:
    def __init__(self, alg: Algebra, lo: int, hi: int, terms: dict, diffs: dict,
                 left_tail=ZERO, right_tail=ZERO, expr=None):
        if lo > hi:
            raise ValueError("window must satisfy lo <= hi")
        self.alg = alg
        self.lo, self.hi = lo, hi
        self.terms = {k: tuple(terms.get(k, ())) for k in range(lo, hi + 1)}
        self.diffs = {}
        for k in range(lo, hi):
            src, tgt = self.term(k), self.term(k + 1)
            m = diffs.get(k)
            m = fp.zeros(src.dim, tgt.dim) if m is None else np.mod(np.asarray(m, dtype=np.int64), alg.p)
            self.diffs[k] = m.reshape(src.dim, tgt.dim)
        self.left_tail, self.right_tail = left_tail, right_tail
        self.expr = expr if expr is not None else Literal(self)

    # -- access -------------------------------------------------------------
    @property
    def p(self):
        return self.alg.p

    def __repr__(self):
        body = ", ".join(f"{k}:{list(self.terms[k])}" for k in range(self.lo, self.hi + 1) if self.terms[k])
        return f"WindowedComplex([{self.lo},{self.hi}] {self.left_tail}/{self.right_tail} {{{body}}})"

    @property
    def is_bounded(self):
        return self.left_tail == ZERO and self.right_tail == ZERO

    def term(self, k) -> Module:
        if self.lo <= k <= self.hi:
            return proj_sum(self.alg, self.terms[k])
        if (k < self.lo and self.left_tail == ZERO) or (k > self.hi and self.right_tail == ZERO):
            return proj_sum(self.alg, ())
        raise Unknowable(f"degree {k} lies outside the materialized window [{self.lo}, {self.hi}]")

    def types(self, k):
        return self.terms[k] if self.lo <= k <= self.hi else tuple(self.term(k).proj_types)

    def diff(self, k) -> ModuleMap:
        if self.lo <= k < self.hi:
            return ModuleMap(self.term(k), self.term(k + 1), self.diffs[k])
        src, tgt = self.term(k), self.term(k + 1)
        if src.dim and tgt.dim:
            raise Unknowable(f"differential {k} lies outside the window")
        return ModuleMap(src, tgt, fp.zeros(src.dim, tgt.dim))

    def diff_matrix(self, k):
        return self.diff(k).matrix

    def nonzero_degrees(self):
        return [k for k in range(self.lo, self.hi + 1) if self.terms[k]]

    def is_zero_window(self):
        return not self.nonzero_degrees()

    def extend(self, lo, hi) -> "WindowedComplex":
        if lo >= self.lo and hi <= self.hi:
            return self
        return self.expr.build(min(lo, self.lo), max(hi, self.hi))

    def check_square_zero(self):
        for k in range(self.lo, self.hi - 1):
            if np.any(fp.mul(self.diffs[k], self.diffs[k + 1], self.p)):
                return False
        return True

    # -- cohomology ---------------------------------------------------------
    def known_acyclic_at(self, k) -> bool:
        """True when H^k vanishes by a tail certificate."""
        if k < self.lo or (k == self.lo and self.left_tail == RESOLUTION):
            return True
        return k > self.hi and self.right_tail == ZERO

    def cohomology(self, k) -> Module:
        if self.known_acyclic_at(k):
            return zero_module(self.alg)
        if k >= self.hi and self.right_tail != ZERO:
            return self.extend(self.lo, k + 1).cohomology(k)
        return cohomology_of(self.term(k), self.diff_matrix(k - 1) if k > self.lo else None,
                             self.diff_matrix(k) if k < self.hi else None)[0]

    def cohomology_data(self, k):
        """(H^k, cycles rows, boundaries rows) for a degree inside the window."""
        if self.known_acyclic_at(k):
            return zero_module(self.alg), None, None
        if k >= self.hi and self.right_tail != ZERO:
            return self.extend(self.lo, k + 1).cohomology_data(k)
        return cohomology_of(self.term(k), self.diff_matrix(k - 1) if k > self.lo else None,
                             self.diff_matrix(k) if k < self.hi else None)

    def dual(self) -> "WindowedComplex":
        return dual_complex(self)

    def dual_homology(self, k) -> Module:
        """H_k(F*) = ker(d*_{k-1}) / im(d*_k), a module over the opposite algebra."""
        return self.dual().cohomology(-k)


def cohomology_of(term: Module, incoming, outgoing):
    p = term.p
    if outgoing is None or outgoing.shape[1] == 0:
        cycles = fp.identity(term.dim)
    else:
        cycles = fp.row_basis(fp.left_nullspace(outgoing, p), p)
    bounds = fp.row_basis(incoming, p) if incoming is not None and incoming.shape[0] else fp.zeros(0, term.dim)
    zmod, zinc = submodule(term, cycles)
    if bounds.shape[0] == 0:
        return zmod, cycles, bounds
    coords = fp.coordinates(zinc.matrix, bounds, p)
    h, _ = quotient(zmod, coords)
    return h, cycles, bounds


def zero_complex(alg: Algebra, lo=0, hi=0) -> WindowedComplex:
    return WindowedComplex(alg, lo, hi, {}, {})


def stalk(mod_types, degree, alg: Algebra) -> WindowedComplex:
    """Projective sum concentrated in one degree."""
    return WindowedComplex(alg, degree, degree, {degree: tuple(mod_types)}, {})


def literal(alg, terms: dict, diffs: dict) -> WindowedComplex:
    degs = [k for k in terms] or [0]
    return WindowedComplex(alg, min(degs), max(degs), terms, diffs)


# ------------------------------------------------------------- expressions

class Expr:
    """Lazy description of a complex; ``build`` memoizes per window."""

    def __init__(self):
        self._cache = {}

    def natural_window(self):
        raise NotImplementedError

    def _build(self, lo, hi) -> WindowedComplex:
        raise NotImplementedError

    def build(self, lo=None, hi=None) -> WindowedComplex:
        nlo, nhi = self.natural_window()
        lo = nlo if lo is None else min(lo, nlo)
        hi = nhi if hi is None else max(hi, nhi)
        key = (lo, hi)
        if key not in self._cache:
            c = self._build(lo, hi)
            c.expr = self
            self._cache[key] = c
        return self._cache[key]

    def materialize(self, window=None):
        if window is None:
            return self.build()
        return self.build(*window)


def pad(c: WindowedComplex, lo, hi) -> WindowedComplex:
    """Zero-extend a complex whose tails are zero on the corresponding sides."""
    if lo < c.lo and c.left_tail != ZERO:
        raise WindowUnderflow("cannot pad below a non-zero left tail")
    if hi > c.hi and c.right_tail != ZERO:
        raise WindowUnderflow("cannot pad above a non-zero right tail")
    lo, hi = min(lo, c.lo), max(hi, c.hi)
    return WindowedComplex(c.alg, lo, hi, c.terms, c.diffs, c.left_tail, c.right_tail, c.expr)


class Literal(Expr):
    def __init__(self, complex_):
        super().__init__()
        self.complex = complex_

    def natural_window(self):
        return self.complex.lo, self.complex.hi

    def _build(self, lo, hi):
        c = self.complex
        if (lo, hi) == (c.lo, c.hi):
            return WindowedComplex(c.alg, lo, hi, c.terms, c.diffs, c.left_tail, c.right_tail)
        return pad(c, lo, hi)


class ResolutionOf(Expr):
    """Minimal projective resolution of a module, P_k in degree -k."""

    def __init__(self, module: Module):
        super().__init__()
        self.module = module

    def natural_window(self):
        return -1, 0

    def _build(self, lo, hi):
        from .modules import resolution

        res = resolution(self.module, -lo)
        terms = {-k: t.proj_types for k, t in enumerate(res.terms)}
        diffs = {-k - 1: d.matrix for k, d in enumerate(res.diffs)}
        left = ZERO if res.complete and len(res.terms) - 1 <= -lo else RESOLUTION
        return WindowedComplex(self.module.alg, lo, hi, terms, diffs, left, ZERO)


class Shift(Expr):
    """F[n]^k = F^{k+n}, with differential multiplied by (-1)^n."""

    def __init__(self, inner: Expr, n: int):
        super().__init__()
        self.inner, self.n = inner, n

    def natural_window(self):
        lo, hi = self.inner.natural_window()
        return lo - self.n, hi - self.n

    def _build(self, lo, hi):
        c = self.inner.build(lo + self.n, hi + self.n)
        return shift_complex(c, self.n)


def shift_complex(c: WindowedComplex, n: int) -> WindowedComplex:
    sign = -1 if n % 2 else 1
    terms = {k - n: t for k, t in c.terms.items()}
    diffs = {k - n: np.mod(sign * d, c.p) for k, d in c.diffs.items()}
    return WindowedComplex(c.alg, c.lo - n, c.hi - n, terms, diffs, c.left_tail, c.right_tail)


class TruncateAbove(Expr):
    """Brutal truncation keeping degrees <= n."""

    def __init__(self, inner: Expr, n: int):
        super().__init__()
        self.inner, self.n = inner, n

    def natural_window(self):
        lo, hi = self.inner.natural_window()
        return min(lo, self.n - 1), self.n

    def _build(self, lo, hi):
        n = self.n
        c = self.inner.build(min(lo, n - 1), n)
        if c.left_tail == RESOLUTION and c.lo > n - 1:
            raise WindowUnderflow("truncation point too close to the left tail")
        keep = range(c.lo, n + 1)
        terms = {k: c.terms[k] for k in keep if k <= c.hi}
        diffs = {k: c.diffs[k] for k in keep if k < n and k < c.hi}
        out = WindowedComplex(c.alg, c.lo, n, terms, diffs, c.left_tail, ZERO)
        return pad(out, lo, hi) if hi > n else out


class TruncateBelow(Expr):
    """Brutal truncation keeping degrees >= n."""

    def __init__(self, inner: Expr, n: int):
        super().__init__()
        self.inner, self.n = inner, n

    def natural_window(self):
        lo, hi = self.inner.natural_window()
        return self.n, max(hi, self.n + 1)

    def _build(self, lo, hi):
        n = self.n
        c = self.inner.build(n, max(hi, n + 1))
        if c.right_tail == DUAL_RESOLUTION and c.hi < n + 1:
            raise WindowUnderflow("truncation point too close to the right tail")
        terms = {k: c.terms[k] for k in range(n, c.hi + 1) if k >= c.lo}
        diffs = {k: c.diffs[k] for k in range(n, c.hi) if k >= c.lo}
        out = WindowedComplex(c.alg, n, c.hi, terms, diffs, ZERO, c.right_tail)
        return pad(out, lo, hi) if lo < n else out


def truncate_above(c: WindowedComplex, n: int) -> WindowedComplex:
    if c.right_tail != ZERO and c.hi < n and c.expr is None:
        raise WindowUnderflow("truncation beyond the window of a complex with a certified tail")
    return TruncateAbove(c.expr, n).build()


def truncate_below(c: WindowedComplex, n: int) -> WindowedComplex:
    return TruncateBelow(c.expr, n).build()


def shift(c: WindowedComplex, n: int) -> WindowedComplex:
    return Shift(c.expr, n).build(c.lo - n, c.hi - n)


# --------------------------------------------------------------- dual complex

def dual_complex(c: WindowedComplex) -> WindowedComplex:
    """G^j = (F^{-j})* over the opposite algebra, so H_k(F*) = H^{-k}(G)."""
    op = c.alg.opposite()
    terms = {-k: t for k, t in c.terms.items()}
    diffs = {}
    for k, d in c.diffs.items():
        f = ModuleMap(c.term(k), c.term(k + 1), d)
        diffs[-k - 1] = star_proj_map(f).matrix
    left = RESOLUTION if c.right_tail == DUAL_RESOLUTION else ZERO
    right = DUAL_RESOLUTION if c.left_tail == RESOLUTION else ZERO
    g = WindowedComplex(op, -c.hi, -c.lo, terms, diffs, left, right)
    g.expr = DualOf(c.expr)
    g.expr._cache[(g.lo, g.hi)] = g
    return g


class DualOf(Expr):
    def __init__(self, inner: Expr):
        super().__init__()
        self.inner = inner

    def natural_window(self):
        lo, hi = self.inner.natural_window()
        return -hi, -lo

    def _build(self, lo, hi):
        c = self.inner.build(-hi, -lo)
        g = dual_complex(c)
        return WindowedComplex(g.alg, g.lo, g.hi, g.terms, g.diffs, g.left_tail, g.right_tail)


# ---------------------------------------------------------------- chain maps

def _solve_module_map(src: Module, tgt: Module, left_factor, right_factor, rhs):
    """Find a module map u : src -> tgt with left_factor @ u @ right_factor = rhs.

    ``left_factor`` / ``right_factor`` may be None (identity).  Returns None
    when no solution exists.
    """
    p = src.p
    basis = hom_basis(src, tgt)
    rhs = np.mod(np.asarray(rhs, dtype=np.int64), p)
    if basis.shape[0] == 0:
        return fp.zeros(src.dim, tgt.dim) if not np.any(rhs) else None
    imgs = basis
    if left_factor is not None:
        imgs = np.mod(np.einsum("ij,mjk->mik", left_factor, imgs), p)
    if right_factor is not None:
        imgs = np.mod(np.einsum("mij,jk->mik", imgs, right_factor), p)
    flat = imgs.reshape(basis.shape[0], -1)
    if flat.shape[1] == 0:
        return fp.zeros(src.dim, tgt.dim)
    coeffs = fp.solve_left(flat, rhs.reshape(1, -1), p)
    if coeffs is None:
        return None
    return np.mod(np.einsum("m,mij->ij", coeffs[0], basis), p)


class ChainMap:
    """Chain map between two complex expressions, extended on demand.

    Components are stored per degree; extension to the left lifts through the
    target, extension to the right solves against the source.  Both choose
    the deterministic particular solution, so earlier components never change.
    """

    def __init__(self, source: Expr, target: Expr, components: dict):
        self.source, self.target = source, target
        self.components = {k: np.asarray(v, dtype=np.int64) for k, v in components.items()}
        if not self.components:
            raise ValueError("a chain map needs at least one seed component")

    @classmethod
    def between(cls, f: WindowedComplex, g: WindowedComplex, components: dict):
        return cls(f.expr, g.expr, components)

    @property
    def alg(self):
        return self.source.build().alg

    def component(self, k, lo=None, hi=None):
        self.extend(min(k, lo if lo is not None else k), max(k, hi if hi is not None else k))
        return self.components[k]

    def extend(self, lo, hi):
        known = sorted(self.components)
        klo, khi = known[0], known[-1]
        if lo >= klo and hi <= khi:
            return self
        f = self.source.build(min(lo, klo) - 1, max(hi, khi) + 1)
        g = self.target.build(min(lo, klo) - 1, max(hi, khi) + 1)
        p = f.p
        for k in range(khi + 1, hi + 1):
            # d_F^{k-1} u^k = u^{k-1} d_G^{k-1}
            rhs = fp.mul(self.components[k - 1], g.diff_matrix(k - 1), p)
            u = _solve_module_map(f.term(k), g.term(k), f.diff_matrix(k - 1), None, rhs)
            if u is None:
                raise LiftObstruction(f"cannot extend chain map to degree {k}")
            self.components[k] = u
        for k in range(klo - 1, lo - 1, -1):
            # u^k d_G^k = d_F^k u^{k+1}
            rhs = fp.mul(f.diff_matrix(k), self.components[k + 1], p)
            u = _solve_module_map(f.term(k), g.term(k), None, g.diff_matrix(k), rhs)
            if u is None:
                raise LiftObstruction(f"cannot extend chain map to degree {k}")
            self.components[k] = u
        return self

    def is_chain_map(self, lo, hi) -> bool:
        self.extend(lo, hi + 1)
        f, g = self.source.build(lo, hi + 1), self.target.build(lo, hi + 1)
        p = f.p
        for k in range(lo, hi + 1):
            lhs = fp.mul(f.diff_matrix(k), self.components[k + 1], p)
            rhs = fp.mul(self.components[k], g.diff_matrix(k), p)
            if not np.array_equal(lhs, rhs):
                return False
        return True


def identity_chain_map(c: WindowedComplex) -> ChainMap:
    k = c.nonzero_degrees()[0] if c.nonzero_degrees() else c.lo
    return ChainMap(c.expr, c.expr, {k: fp.identity(c.term(k).dim)})


def zero_chain_map(f: WindowedComplex, g: WindowedComplex, lo=None, hi=None) -> ChainMap:
    lo = min(f.lo, g.lo) if lo is None else lo
    hi = max(f.hi, g.hi) if hi is None else hi
    ff, gg = f.extend(lo, hi), g.extend(lo, hi)
    comps = {k: fp.zeros(ff.term(k).dim, gg.term(k).dim) for k in range(lo, hi + 1)}
    return ChainMap(f.expr, g.expr, comps)


# ----------------------------------------------------------------------- cone

class Cone(Expr):
    """C^k = F^{k+1} (+) G^k with differential [[-d_F, u], [0, d_G]]."""

    def __init__(self, u: ChainMap):
        super().__init__()
        self.u = u

    def natural_window(self):
        flo, fhi = self.u.source.natural_window()
        glo, ghi = self.u.target.natural_window()
        return min(flo - 1, glo) - 1, max(fhi - 1, ghi) + 1

    def _build(self, lo, hi):
        f = self.u.source.build(lo + 1, hi + 1)
        g = self.u.target.build(lo, hi)
        if f.alg is not g.alg:
            raise IncompatibleTails("cone of a map between complexes over different algebras")
        self.u.extend(lo + 1, hi + 1)
        p = f.p
        terms, diffs = {}, {}
        for k in range(lo, hi + 1):
            terms[k] = f.types(k + 1) + g.types(k)
        for k in range(lo, hi):
            fa, fb = f.term(k + 1).dim, f.term(k + 2).dim
            ga, gb = g.term(k).dim, g.term(k + 1).dim
            m = fp.zeros(fa + ga, fb + gb)
            m[:fa, :fb] = np.mod(-f.diff_matrix(k + 1), p)
            m[:fa, fb:] = self.u.components[k + 1]
            m[fa:, fb:] = g.diff_matrix(k)
            diffs[k] = m
        left = ZERO if (f.left_tail == ZERO and g.left_tail == ZERO) else RESOLUTION
        right = ZERO if (f.right_tail == ZERO and g.right_tail == ZERO) else DUAL_RESOLUTION
        if left == RESOLUTION:
            if (f.left_tail == ZERO and any(f.types(k) for k in range(f.lo, lo + 2))) or \
               (g.left_tail == ZERO and any(g.types(k) for k in range(g.lo, lo + 1))):
                raise IncompatibleTails("window too small to certify the cone's left tail")
        if right == DUAL_RESOLUTION:
            if (f.right_tail == ZERO and any(f.types(k) for k in range(hi + 1, f.hi + 1))) or \
               (g.right_tail == ZERO and g.types(hi)):
                raise IncompatibleTails("window too small to certify the cone's right tail")
        return WindowedComplex(f.alg, lo, hi, terms, diffs, left, right)


def cone(u: ChainMap) -> WindowedComplex:
    return Cone(u).build()


# -------------------------------------------------------------- minimalize

def _block_ranges(alg, types):
    sizes = [alg.projective_basis(alg.reps[t]).shape[0] for t in types]
    offs = np.cumsum([0] + sizes)
    return [(int(offs[i]), int(offs[i + 1])) for i in range(len(types))]


def _find_unit(c_terms, c_diffs, alg, p):
    for k in sorted(c_diffs):
        d = c_diffs[k]
        src, tgt = c_terms[k], c_terms[k + 1]
        sr, tr = _block_ranges(alg, src), _block_ranges(alg, tgt)
        for s, (a, b) in enumerate(sr):
            for t, (c, e) in enumerate(tr):
                if src[s] != tgt[t]:
                    continue
                blk = d[a:b, c:e]
                if np.any(blk) and fp.is_invertible(blk, p):
                    return k, s, t
    return None


def minimalize(c: WindowedComplex) -> WindowedComplex:
    """Strip contractible summands P --iso--> P by Gaussian elimination."""
    if not c.is_bounded:
        raise ValueError("minimalize needs a bounded complex (zero tails)")
    alg, p = c.alg, c.p
    terms = {k: list(v) for k, v in c.terms.items()}
    diffs = {k: v.copy() for k, v in c.diffs.items()}
    while True:
        hit = _find_unit(terms, diffs, alg, p)
        if hit is None:
            break
        k, s, t = hit
        src_r, tgt_r = _block_ranges(alg, terms[k]), _block_ranges(alg, terms[k + 1])
        a, b = src_r[s]
        c0, e0 = tgt_r[t]
        d = diffs[k]
        keep_rows = np.r_[0:a, b:d.shape[0]]
        keep_cols = np.r_[0:c0, e0:d.shape[1]]
        phi_inv = fp.inverse(d[a:b, c0:e0], p)
        beta = d[a:b][:, keep_cols]
        gamma = d[keep_rows][:, c0:e0]
        delta = d[np.ix_(keep_rows, keep_cols)]
        diffs[k] = np.mod(delta - gamma @ phi_inv @ beta, p)
        if k - 1 in diffs:
            diffs[k - 1] = diffs[k - 1][:, keep_rows]
        if k + 1 in diffs:
            diffs[k + 1] = diffs[k + 1][keep_cols]
        del terms[k][s]
        del terms[k + 1][t]
    lo, hi = c.lo, c.hi
    nz = [k for k in terms if terms[k]]
    if nz:
        lo, hi = min(nz), max(nz)
    else:
        lo = hi = max(min(0, c.hi), c.lo)
    out_terms = {k: tuple(terms[k]) for k in range(lo, hi + 1)}
    out_diffs = {k: diffs[k] for k in range(lo, hi)}
    return WindowedComplex(alg, lo, hi, out_terms, out_diffs)


def is_minimal(c: WindowedComplex) -> bool:
    return _find_unit(c.terms, c.diffs, c.alg, c.p) is None


# --------------------------------------------------------- chain map spaces

def chain_map_space(f: WindowedComplex, g: WindowedComplex, lo: int, hi: int):
    """Basis of chain maps f -> g supported on [lo, hi] (both complexes bounded there).

    Returns a list of dicts degree -> matrix.
    """
    p = f.p
    degs = list(range(lo, hi + 1))
    bases = {k: hom_basis(f.term(k), g.term(k)) for k in degs}
    offs, total = {}, 0
    for k in degs:
        offs[k] = total
        total += bases[k].shape[0]
    if total == 0:
        return []
    rows = []
    for k in range(lo - 1, hi + 1):
        # d_F^k u^{k+1} - u^k d_G^k = 0
        a, b = f.term(k).dim, g.term(k + 1).dim
        if a == 0 or b == 0:
            continue
        eq = np.zeros((total, a * b), dtype=np.int64)
        if k + 1 in bases and bases[k + 1].shape[0]:
            img = np.mod(np.einsum("ij,mjk->mik", f.diff_matrix(k), bases[k + 1]), p)
            eq[offs[k + 1]:offs[k + 1] + img.shape[0]] = img.reshape(img.shape[0], -1)
        if k in bases and bases[k].shape[0]:
            img = np.mod(np.einsum("mij,jk->mik", bases[k], g.diff_matrix(k)), p)
            eq[offs[k]:offs[k] + img.shape[0]] -= img.reshape(img.shape[0], -1)
        rows.append(np.mod(eq, p))
    sols = fp.left_nullspace(np.hstack(rows), p) if rows else fp.identity(total)
    out = []
    for s in sols:
        comp = {}
        for k in degs:
            n = bases[k].shape[0]
            coeff = s[offs[k]:offs[k] + n]
            comp[k] = (np.mod(np.einsum("m,mij->ij", coeff, bases[k]), p) if n
                       else fp.zeros(f.term(k).dim, g.term(k).dim))
        out.append(comp)
    return out


def null_homotopic_space(f: WindowedComplex, g: WindowedComplex, lo: int, hi: int):
    """Span of chain maps of the form h d_G + d_F h on [lo, hi], flattened per degree."""
    p = f.p
    degs = list(range(lo, hi + 1))
    out = []
    for k in range(lo, hi + 2):
        # homotopy component h^k : F^k -> G^{k-1}
        hb = hom_basis(f.term(k), g.term(k - 1))
        for h in hb:
            comp = {}
            for j in degs:
                comp[j] = fp.zeros(f.term(j).dim, g.term(j).dim)
            if k - 1 in comp:
                comp[k - 1] = np.mod(comp[k - 1] + fp.mul(f.diff_matrix(k - 1), h, p), p)
            if k in comp:
                comp[k] = np.mod(comp[k] + fp.mul(h, g.diff_matrix(k - 1), p), p)
            out.append(comp)
    return out


def _flatten(comp, degs):
    return np.concatenate([comp[k].reshape(-1) for k in degs]) if degs else np.zeros(0, dtype=np.int64)


def homotopy_classes_dim(f: WindowedComplex, g: WindowedComplex, lo: int, hi: int) -> int:
    """dim of chain maps modulo null-homotopic ones, for complexes bounded inside [lo, hi]."""
    p = f.p
    degs = list(range(lo, hi + 1))
    maps = chain_map_space(f, g, lo, hi)
    if not maps:
        return 0
    m = np.array([_flatten(c, degs) for c in maps])
    hs = null_homotopic_space(f, g, lo, hi)
    if not hs:
        return fp.rank(m, p)
    h = np.array([_flatten(c, degs) for c in hs])
    return fp.rank(np.vstack([m, h]), p) - fp.rank(h, p)


def is_null_homotopic(f, g, comp: dict, lo, hi) -> bool:
    degs = list(range(lo, hi + 1))
    hs = null_homotopic_space(f, g, lo, hi)
    v = _flatten(comp, degs)
    if not hs:
        return not np.any(np.mod(v, f.p))
    return fp.in_span(np.array([_flatten(c, degs) for c in hs]), v, f.p)


def homotopy_equivalent(f: WindowedComplex, g: WindowedComplex, seed=0,
                        trials=None) -> bool:
    """Decide F ~ G for bounded complexes via their minimal representatives."""
    trials = CHAIN_ISO_TRIALS if trials is None else trials
    if f.alg is not g.alg:
        return False
    mf, mg = minimalize(f), minimalize(g)
    degs = sorted(set(mf.nonzero_degrees()) | set(mg.nonzero_degrees()))
    if not degs:
        return True
    for k in degs:
        tf = sorted(mf.types(k)) if mf.lo <= k <= mf.hi else []
        tg = sorted(mg.types(k)) if mg.lo <= k <= mg.hi else []
        if tf != tg:
            return False
    lo, hi = degs[0], degs[-1]
    mf, mg = pad(mf, lo, hi), pad(mg, lo, hi)
    maps = chain_map_space(mf, mg, lo, hi)
    if not maps:
        return False
    p = f.p

    def invertible(comp):
        return all(fp.is_invertible(comp[k], p) for k in degs if comp[k].size)

    for c in maps:
        if invertible(c):
            return True
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        coeffs = rng.integers(0, p, size=len(maps))
        comp = {k: np.mod(sum(int(a) * m[k] for a, m in zip(coeffs, maps)), p) for k in degs}
        if invertible(comp):
            return True
    raise Inconclusive("no chain isomorphism found between minimal complexes with equal terms")


def direct_sum_complex(f: WindowedComplex, g: WindowedComplex) -> WindowedComplex:
    if not (f.is_bounded and g.is_bounded):
        raise ValueError("direct sums are formed of bounded complexes")
    lo, hi = min(f.lo, g.lo), max(f.hi, g.hi)
    f, g = pad(f, lo, hi), pad(g, lo, hi)
    terms = {k: f.terms[k] + g.terms[k] for k in range(lo, hi + 1)}
    diffs = {}
    for k in range(lo, hi):
        a, b = f.diffs[k], g.diffs[k]
        m = fp.zeros(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
        m[:a.shape[0], :a.shape[1]] = a
        m[a.shape[0]:, a.shape[1]:] = b
        diffs[k] = m
    return WindowedComplex(f.alg, lo, hi, terms, diffs)
