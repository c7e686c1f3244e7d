"""Bimodules, tensor functors and stable equivalences of Morita type.

An A-B bimodule is stored as a right module over A^op (x) B.  The helpers
here keep the left and right actions at hand as well, since tensor products
are built directly from them as coequalizers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fp
from .algebra import Algebra, build_structure_constant_algebra, enveloping_algebra
from .complexes import Expr, WindowedComplex
from .errors import AlgebraMismatch, UnverifiedBimodule
from .modules import (
    Module,
    ModuleMap,
    decompose,
    direct_sum,
    hom_basis,
    is_isomorphic_indecomposable,
    is_projective,
    proj_sum,
    projective_cover,
    regular_module,
)


class Bimodule:
    def __init__(self, left: Algebra, right: Algebra, left_action, right_action, check=True, label=""):
        self.left_alg, self.right_alg = left, right
        self.left_action = np.mod(np.asarray(left_action, dtype=np.int64), left.p)
        self.right_action = np.mod(np.asarray(right_action, dtype=np.int64), left.p)
        self.label = label
        self._module = None
        if check:
            self.validate()

    @property
    def p(self):
        return self.left_alg.p

    @property
    def dim(self):
        return self.left_action.shape[1]

    def __repr__(self):
        return f"Bimodule({self.left_alg.name} | dim {self.dim} | {self.right_alg.name})"

    def validate(self):
        Module(self.left_alg.opposite(), self.left_action, check=True)
        Module(self.right_alg, self.right_action, check=True)
        p = self.p
        for la in self.left_action:
            for rb in self.right_action:
                if not np.array_equal(fp.mul(la, rb, p), fp.mul(rb, la, p)):
                    raise AlgebraMismatch("left and right actions do not commute")

    @property
    def envelope(self) -> Algebra:
        return enveloping_algebra(self.left_alg, self.right_alg)

    @property
    def module(self) -> Module:
        """The bimodule as a right module over A^op (x) B."""
        if self._module is None:
            act = np.mod(np.einsum("iab,jbc->ijac", self.left_action, self.right_action),
                         self.p).reshape(-1, self.dim, self.dim)
            self._module = Module(self.envelope, act, check=False)
        return self._module

    def as_left_module(self) -> Module:
        return Module(self.left_alg.opposite(), self.left_action, check=False)

    def as_right_module(self) -> Module:
        return Module(self.right_alg, self.right_action, check=False)


def bimodule_from_module(m: Module) -> Bimodule:
    """Inverse of ``Bimodule.module`` for a module over an enveloping algebra."""
    a, b = m.alg.factors
    nb = b.dim
    left = np.array([m.element_matrix(np.kron(a.basis_vector(i), b.unit)) for i in range(a.dim)])
    right = np.array([m.element_matrix(np.kron(a.unit, b.basis_vector(j))) for j in range(nb)])
    return Bimodule(a, b, left, right, check=False)


def regular_bimodule(alg: Algebra) -> Bimodule:
    return Bimodule(alg, alg, alg.left_mult, alg.right_mult, check=False, label="A")


def zero_bimodule(a: Algebra, b: Algebra) -> Bimodule:
    return Bimodule(a, b, np.zeros((a.dim, 0, 0), dtype=np.int64), np.zeros((b.dim, 0, 0), dtype=np.int64),
                    check=False)


def direct_sum_bimodules(*ms: Bimodule) -> Bimodule:
    a, b = ms[0].left_alg, ms[0].right_alg
    d = sum(m.dim for m in ms)
    la = np.zeros((a.dim, d, d), dtype=np.int64)
    ra = np.zeros((b.dim, d, d), dtype=np.int64)
    off = 0
    for m in ms:
        k = m.dim
        la[:, off:off + k, off:off + k] = m.left_action
        ra[:, off:off + k, off:off + k] = m.right_action
        off += k
    return Bimodule(a, b, la, ra, check=False)


# ------------------------------------------------------------------ tensors

@dataclass
class Coequalizer:
    """x (x)_k n modulo the balancing relations, with its projection and a section."""

    dim: int
    projection: np.ndarray  # (dx * dn, dim)
    section: np.ndarray  # (dim, dx * dn)

    def descend(self, op: np.ndarray, p: int) -> np.ndarray:
        return fp.mul(fp.mul(self.section, op, p), self.projection, p)


def _coequalizer(x_right, n_left, p) -> Coequalizer:
    """Quotient of X (x) N by (u a) (x) w - u (x) (a w) over the middle algebra basis."""
    dx, dn = x_right.shape[1], n_left.shape[1]
    total = dx * dn
    if total == 0:
        return Coequalizer(0, fp.zeros(total, 0), fp.zeros(0, total))
    rows = [np.mod(np.kron(xa, np.eye(dn, dtype=np.int64)) - np.kron(np.eye(dx, dtype=np.int64), na), p)
            for xa, na in zip(x_right, n_left)]
    k = fp.row_basis(np.vstack(rows), p) if rows else fp.zeros(0, total)
    comp = fp.complement(k, total, p)
    full = np.vstack([k, comp])
    proj = fp.inverse(full, p)[:, k.shape[0]:]
    return Coequalizer(comp.shape[0], proj, comp)


def tensor_over(x: Module, m: Bimodule) -> Module:
    """x (x)_A M as a right B-module."""
    if x.alg is not m.left_alg:
        raise AlgebraMismatch("module and bimodule live over different algebras")
    p = x.p
    co = _coequalizer(x.action, m.left_action, p)
    eye = np.eye(x.dim, dtype=np.int64)
    act = np.array([co.descend(np.kron(eye, rb), p) for rb in m.right_action], dtype=np.int64)
    return Module(m.right_alg, act.reshape(m.right_alg.dim, co.dim, co.dim), check=False)


def tensor_map(f: ModuleMap, m: Bimodule, source: Module = None, target: Module = None) -> ModuleMap:
    """f (x)_A M between the tensored modules."""
    p = f.source.p
    cs = _coequalizer(f.source.action, m.left_action, p)
    ct = _coequalizer(f.target.action, m.left_action, p)
    op = np.kron(f.matrix, np.eye(m.dim, dtype=np.int64))
    mat = fp.mul(fp.mul(cs.section, op, p), ct.projection, p)
    source = source if source is not None else tensor_over(f.source, m)
    target = target if target is not None else tensor_over(f.target, m)
    return ModuleMap(source, target, mat)


def tensor_bimodules(m: Bimodule, n: Bimodule) -> Bimodule:
    """M (x)_B N for an A-B bimodule M and a B-C bimodule N."""
    if m.right_alg is not n.left_alg:
        raise AlgebraMismatch("inner algebras differ")
    p = m.p
    co = _coequalizer(m.right_action, n.left_action, p)
    em, en = np.eye(m.dim, dtype=np.int64), np.eye(n.dim, dtype=np.int64)
    left = np.array([co.descend(np.kron(la, en), p) for la in m.left_action], dtype=np.int64)
    right = np.array([co.descend(np.kron(em, rc), p) for rc in n.right_action], dtype=np.int64)
    left = left.reshape(m.left_alg.dim, co.dim, co.dim)
    right = right.reshape(n.right_alg.dim, co.dim, co.dim)
    return Bimodule(m.left_alg, n.right_alg, left, right, check=False)


# ------------------------------------------------------------ projectivity

def is_projective_bimodule(b: Bimodule) -> bool:
    """Projective over the enveloping algebra: its projective cover is an isomorphism."""
    if b.dim == 0:
        return True
    cover, _ = projective_cover(b.module)
    return cover.dim == b.dim


@dataclass
class BimoduleSplit:
    """Matching of M (x) N against the regular bimodule plus a remainder."""

    contains_regular: bool
    remainder_dims: list
    remainder_projective: bool


def _split_off_regular(t: Bimodule, reg: Bimodule) -> BimoduleSplit:
    pieces_t = decompose(t.module)
    pieces_r = decompose(reg.module)
    remaining = [[m, k] for m, k in pieces_t]
    for m, k in pieces_r:
        for r in remaining:
            if r[0].dim == m.dim and r[1] >= k and is_isomorphic_indecomposable(r[0], m):
                r[1] -= k
                break
        else:
            return BimoduleSplit(False, [], False)
    rest = [(m, k) for m, k in remaining if k]
    proj = all(is_projective(m) for m, _ in rest)
    return BimoduleSplit(True, [m.dim for m, k in rest for _ in range(k)], proj)


def projective_bimodule_summands(b: Bimodule) -> list:
    """Dimensions of indecomposable summands of b that are projective bimodules."""
    if b.dim == 0:
        return []
    return [m.dim for m, k in decompose(b.module) if is_projective(m) for _ in range(k)]


@dataclass
class MoritaReport:
    m_left_projective: bool
    m_right_projective: bool
    n_left_projective: bool
    n_right_projective: bool
    mn: BimoduleSplit
    nm: BimoduleSplit
    m_projective_summands: list
    n_projective_summands: list

    @property
    def one_sided_projective(self):
        return all((self.m_left_projective, self.m_right_projective,
                    self.n_left_projective, self.n_right_projective))

    @property
    def passes(self):
        return (self.one_sided_projective and self.mn.contains_regular and self.mn.remainder_projective
                and self.nm.contains_regular and self.nm.remainder_projective)

    @property
    def summand_free(self):
        return not self.m_projective_summands and not self.n_projective_summands

    def as_dict(self):
        return {
            "passes": self.passes,
            "oneSidedProjective": self.one_sided_projective,
            "MN": {"containsRegular": self.mn.contains_regular, "remainderDims": self.mn.remainder_dims,
                   "remainderProjective": self.mn.remainder_projective},
            "NM": {"containsRegular": self.nm.contains_regular, "remainderDims": self.nm.remainder_dims,
                   "remainderProjective": self.nm.remainder_projective},
            "projectiveSummands": {"M": self.m_projective_summands, "N": self.n_projective_summands},
            "summandFree": self.summand_free,
        }


def verify_stable_morita_type(m: Bimodule, n: Bimodule) -> MoritaReport:
    a, b = m.left_alg, m.right_alg
    if n.left_alg is not b or n.right_alg is not a:
        raise AlgebraMismatch("expected bimodules A M B and B N A")
    mn = tensor_bimodules(m, n)
    nm = tensor_bimodules(n, m)
    report = MoritaReport(
        is_projective(m.as_left_module()), is_projective(m.as_right_module()),
        is_projective(n.as_left_module()), is_projective(n.as_right_module()),
        _split_off_regular(mn, regular_bimodule(a)),
        _split_off_regular(nm, regular_bimodule(b)),
        projective_bimodule_summands(m), projective_bimodule_summands(n),
    )
    return report


# ------------------------------------------------------------ Morita pairs

@dataclass
class MoritaPair:
    a: Algebra
    b: Algebra
    m: Bimodule  # A-B: Hom_A(P, A)
    n: Bimodule  # B-A: P
    progenerator: Module


def endomorphism_algebra(x: Module, name="") -> tuple:
    """(End(x) as an algebra acting on the left of x, basis of maps)."""
    p = x.p
    basis = hom_basis(x, x)
    h = basis.shape[0]
    flat = basis.reshape(h, -1)
    solver = fp.right_inverse(flat, p)
    mul = np.zeros((h, h, h), dtype=np.int64)
    for i in range(h):
        for j in range(h):
            # b_i b_j acts as "apply b_j, then b_i" on the left of x
            mul[i, j] = fp.mul(fp.mul(basis[j], basis[i], p).reshape(1, -1), solver, p)[0]
    unit = fp.mul(np.eye(x.dim, dtype=np.int64).reshape(1, -1), solver, p)[0]
    alg = build_structure_constant_algebra(h, mul, unit, p, name=name or f"End({x.label or 'P'})")
    return alg, basis


def morita_pair(a: Algebra, extra=(0,)) -> MoritaPair:
    """A and B = End_A(A (+) P_extra) with the canonical bimodules."""
    p = a.p
    prog = direct_sum(regular_module(a), proj_sum(a, extra)) if extra else regular_module(a)
    b, ends = endomorphism_algebra(prog, name=f"End_{a.name}(A+{'+'.join(str(e) for e in extra)})")
    # N = P with B acting on the left
    n = Bimodule(b, a, ends, prog.action, check=True, label="P")
    # M = Hom_A(P, A): left A by post-multiplication, right B by pre-composition
    homs = hom_basis(prog, regular_module(a))
    h = homs.shape[0]
    flat = homs.reshape(h, -1)
    solver = fp.right_inverse(flat, p)
    left = np.array([fp.mul(np.mod(np.einsum("kin,nm->kim", homs, a.left_mult[i]), p).reshape(h, -1),
                            solver, p) for i in range(a.dim)])
    right = np.array([fp.mul(np.mod(np.einsum("ij,kjn->kin", ends[j], homs), p).reshape(h, -1),
                             solver, p) for j in range(b.dim)])
    m = Bimodule(a, b, left, right, check=True, label="P*")
    return MoritaPair(a, b, m, n, prog)


# -------------------------------------------------------------- transport

class TensorBimodule(Expr):
    """Componentwise F (x)_A M, rewritten in standard projective sums over B."""

    def __init__(self, inner: Expr, m: Bimodule):
        super().__init__()
        self.inner, self.m = inner, m

    def natural_window(self):
        return self.inner.natural_window()

    def _build(self, lo, hi):
        c = self.inner.build(lo, hi)
        m, p = self.m, c.p
        terms, covers = {}, {}
        for k in range(c.lo, c.hi + 1):
            t = tensor_over(c.term(k), m)
            cover, pi = projective_cover(t)
            if cover.dim != t.dim:
                raise UnverifiedBimodule("tensoring a projective did not give a projective")
            terms[k] = cover.proj_types
            covers[k] = (t, pi.matrix)
        diffs = {}
        for k in range(c.lo, c.hi):
            src, pi_s = covers[k]
            tgt, pi_t = covers[k + 1]
            d = tensor_map(c.diff(k), m, src, tgt).matrix
            diffs[k] = fp.mul(fp.mul(pi_s, d, p), fp.inverse(pi_t, p), p) if pi_t.size else \
                fp.zeros(pi_s.shape[0], 0)
        return WindowedComplex(m.right_alg, c.lo, c.hi, terms, diffs, c.left_tail, c.right_tail)


def transport_complex(f: WindowedComplex, m: Bimodule, report: MoritaReport | None = None) -> WindowedComplex:
    if report is not None and not report.passes:
        raise UnverifiedBimodule("bimodule pair failed verification")
    if not is_projective(m.as_right_module()):
        raise UnverifiedBimodule("bimodule is not projective over the right algebra")
    return TensorBimodule(f.expr, m).build(f.lo, f.hi)
