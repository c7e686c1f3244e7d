"""Finite-dimensional algebras over F_p given by structure constants.

An algebra stores ``mul[i, j, k]``, the coefficient of basis element k in
b_i * b_j.  Bound quiver algebras are reduced to structure constants by
normal forms of paths; opposite and enveloping algebras are derived from
existing tables.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy

from . import fp
from .errors import (
    FieldMismatch,
    InadmissibleRelations,
    NoUnit,
    NotAssociative,
    NotNilpotent,
    ParseError,
)


class Algebra:
    """Associative unital algebra with primitive idempotent data.

    Args:
        p: field characteristic.
        mul: structure constants, shape (n, n, n).
        unit: coordinates of the identity.
        labels: names of the basis elements.
        idempotents: primitive orthogonal idempotents summing to the unit.
        reps: indices into ``idempotents``, one per isomorphism class of
            indecomposable projective e A.
        radical: row basis of the Jacobson radical (computed when omitted).
        generators: elements generating the algebra (unit implied).
    """

    def __init__(self, p, mul, unit, labels=None, idempotents=None, reps=None,
                 radical=None, generators=None, idempotent_labels=None, name="",
                 quiver=None):
        self.p = fp.check_prime(p)
        self.mul = fp.asfp(mul, p)
        n = self.mul.shape[0]
        if self.mul.shape != (n, n, n):
            raise ValueError("structure constants must have shape (n, n, n)")
        self.dim = n
        self.unit = fp.asfp(unit, p).reshape(n)
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(n)]
        self.name = name
        self.quiver = quiver
        self._idempotents = None if idempotents is None else [fp.asfp(e, p).reshape(n) for e in idempotents]
        self._idem_labels = idempotent_labels
        self._reps = None if reps is None else list(reps)
        self._radical = None if radical is None else fp.row_basis(fp.asfp(radical, p).reshape(-1, n), p)
        self._generators = None if generators is None else [fp.asfp(g, p).reshape(n) for g in generators]
        self._opposite = None
        self._mirror = None  # for an opposite algebra: the algebra it was built from

    def __repr__(self):
        return f"Algebra({self.name or 'unnamed'}, dim={self.dim}, p={self.p})"

    # -- arithmetic ---------------------------------------------------------
    def basis_vector(self, i):
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def product(self, x, y):
        return np.mod(np.einsum("i,j,ijk->k", x, y, self.mul), self.p)

    @cached_property
    def left_mult(self):
        """left_mult[a] maps row w to a*w."""
        return self.mul

    @cached_property
    def right_mult(self):
        """right_mult[b] maps row w to w*b."""
        return np.ascontiguousarray(self.mul.transpose(1, 0, 2))

    def left_matrix(self, x):
        return np.mod(np.einsum("a,aik->ik", x, self.mul), self.p)

    def right_matrix(self, x):
        return np.mod(np.einsum("b,ibk->ik", x, self.mul), self.p)

    def power(self, x, k):
        out = self.unit.copy()
        for _ in range(k):
            out = self.product(out, x)
        return out

    # -- idempotents and projectives -----------------------------------------
    @property
    def idempotents(self):
        if self._idempotents is None:
            self._find_idempotents()
        return self._idempotents

    @property
    def idempotent_labels(self):
        if self._idem_labels is None:
            self._idem_labels = [str(i + 1) for i in range(len(self.idempotents))]
        return self._idem_labels

    @property
    def reps(self):
        if self._reps is None:
            self._find_idempotents()
        return self._reps

    @property
    def num_projectives(self):
        return len(self.reps)

    def rep_idempotent(self, i):
        return self.idempotents[self.reps[i]]

    def rep_label(self, i):
        return self.idempotent_labels[self.reps[i]]

    def _find_idempotents(self):
        if self._mirror is not None:
            src = self._mirror
            self._idempotents = src.idempotents
            self._reps = src.reps
            self._idem_labels = src.idempotent_labels
            return
        from .modules import decompose_summands, regular_module, is_isomorphic_indecomposable

        reg = regular_module(self)
        pieces = decompose_summands(reg, seed=0)
        stacked = np.vstack([w for _, w in pieces])
        coords = fp.coordinates(stacked, self.unit, self.p)
        idem, offset = [], 0
        for mod, w in pieces:
            k = w.shape[0]
            idem.append(fp.mul(coords[offset:offset + k], w, self.p))
            offset += k
        self._idempotents = idem
        reps = []
        for i, (mod, _) in enumerate(pieces):
            if not any(is_isomorphic_indecomposable(mod, pieces[r][0]) for r in reps):
                reps.append(i)
        self._reps = reps

    def projective_basis(self, idx):
        """Row basis of e A for idempotent number idx, starting with e itself."""
        return self._projective_bases[idx]

    @cached_property
    def _projective_bases(self):
        out = []
        for e in self.idempotents:
            rows = np.vstack([e[None, :], self.left_matrix(e)])
            out.append(greedy_basis(rows, self.p))
        return out

    def corner(self, e, f):
        """Row basis of e A f."""
        rows = fp.mul(self.left_matrix(e), self.right_matrix(f), self.p)
        return fp.row_basis(rows, self.p)

    # -- radical ------------------------------------------------------------
    @property
    def radical(self):
        if self._radical is None:
            self._radical = self._mirror.radical if self._mirror is not None else jacobson_radical(self)
        return self._radical

    @property
    def generators(self):
        if self._generators is None:
            self._generators = algebra_generators(self)
        return self._generators

    # -- derived algebras ---------------------------------------------------
    def opposite(self):
        if self._opposite is None:
            op = Algebra(
                self.p, self.mul.transpose(1, 0, 2), self.unit, self.labels,
                idempotents=self._idempotents, reps=self._reps, radical=self._radical,
                generators=self._generators, idempotent_labels=self._idem_labels,
                name=f"{self.name}^op" if self.name else "",
            )
            op._mirror = self
            op._opposite = self
            self._opposite = op
        return self._opposite


def greedy_basis(rows, p):
    """Independent subset of rows, kept in order."""
    rows = np.mod(np.asarray(rows, dtype=np.int64), p)
    chosen = []
    current = np.zeros((0, rows.shape[1]), dtype=np.int64)
    r = 0
    for row in rows:
        if not np.any(row):
            continue
        trial = np.vstack([current, row[None, :]])
        rk = fp.rank(trial, p)
        if rk > r:
            chosen.append(row)
            current = trial
            r = rk
    if not chosen:
        return np.zeros((0, rows.shape[1]), dtype=np.int64)
    return np.vstack(chosen)


def span_closure(alg: Algebra, seed_rows, left=True, right=True):
    """Smallest subspace containing seed_rows closed under the chosen multiplications."""
    p = alg.p
    basis = fp.row_basis(np.asarray(seed_rows, dtype=np.int64).reshape(-1, alg.dim), p)
    while True:
        parts = [basis]
        if basis.shape[0]:
            if left:
                parts.append(np.mod(np.einsum("aik,ri->rak", alg.mul, basis).reshape(-1, alg.dim), p))
            if right:
                parts.append(np.mod(np.einsum("ibk,ri->rbk", alg.mul, basis).reshape(-1, alg.dim), p))
        new = fp.row_basis(np.vstack(parts), p)
        if new.shape[0] == basis.shape[0]:
            return new
        basis = new


def subalgebra_span(alg: Algebra, elements):
    rows = np.vstack([alg.unit[None, :]] + [np.asarray(e).reshape(1, -1) for e in elements])
    basis = fp.row_basis(rows, alg.p)
    while True:
        prods = np.mod(np.einsum("ri,sj,ijk->rsk", basis, basis, alg.mul).reshape(-1, alg.dim), alg.p)
        new = fp.row_basis(np.vstack([basis, prods]), alg.p)
        if new.shape[0] == basis.shape[0]:
            return new
        basis = new


def algebra_generators(alg: Algebra):
    gens = []
    span = subalgebra_span(alg, [])
    for i in range(alg.dim):
        if span.shape[0] == alg.dim:
            break
        v = alg.basis_vector(i)
        if not fp.in_span(span, v, alg.p):
            gens.append(v)
            span = subalgebra_span(alg, gens)
    return gens


def minimal_polynomial(alg: Algebra, x, one=None):
    """Coefficients (low to high, monic) of the minimal polynomial of x."""
    p = alg.p
    one = alg.unit if one is None else one
    powers = [one]
    while True:
        nxt = alg.product(powers[-1], x)
        stack = np.vstack(powers)
        sol = fp.solve_left(stack, nxt[None, :], p) if fp.in_span(stack, nxt, p) else None
        if sol is not None:
            coeffs = [int(-c) % p for c in sol[0]] + [1]
            return coeffs
        powers.append(nxt)


def squarefree_part(coeffs, p):
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(coeffs)), t, modulus=p)
    _, factors = poly.factor_list()
    out = sympy.Poly(1, t, modulus=p)
    for f, _ in factors:
        out = out * f
    return [int(c) % p for c in reversed(out.all_coeffs())]


def evaluate_polynomial(alg: Algebra, coeffs, x, one):
    out = np.zeros(alg.dim, dtype=np.int64)
    power = one
    for c in coeffs:
        out = np.mod(out + c * power, alg.p)
        power = alg.product(power, x)
    return out


def jacobson_radical(alg: Algebra):
    """Radical via corners e_i A e_j of a complete set of primitive idempotents.

    In a local corner E = eAe the radical is the ideal generated by all
    commutators and by s(x) for basis elements x, where s is the squarefree
    part of the minimal polynomial of x.  Off-diagonal pieces are the x in
    e_i A e_j with x * e_j A e_i inside rad(e_i A e_i).
    """
    p = alg.p
    idem = alg.idempotents
    local_rads = []
    for e in idem:
        corner = alg.corner(e, e)
        seeds = []
        for a in corner:
            for b in corner:
                seeds.append(np.mod(alg.product(a, b) - alg.product(b, a), p))
            mp = minimal_polynomial(alg, a, one=e)
            seeds.append(evaluate_polynomial(alg, squarefree_part(mp, p), a, e))
        ideal = _corner_ideal(alg, corner, seeds)
        local_rads.append(ideal)
    pieces = []
    for i, e in enumerate(idem):
        for j, f in enumerate(idem):
            if i == j:
                pieces.append(local_rads[i])
                continue
            cij = alg.corner(e, f)
            cji = alg.corner(f, e)
            if cij.shape[0] == 0:
                continue
            if cji.shape[0] == 0:
                pieces.append(cij)
                continue
            # x = c @ cij; require x * y in local_rads[i] for every y in cji
            constraints = []
            quot = _quotient_map(local_rads[i], alg.dim, p)
            for y in cji:
                prods = np.mod(np.stack([alg.product(row, y) for row in cij]), p)
                constraints.append(fp.mul(prods, quot, p))
            sysm = np.hstack(constraints)
            ker = fp.left_nullspace(sysm, p)
            if ker.shape[0]:
                pieces.append(fp.mul(ker, cij, p))
    rows = [q for q in pieces if q.shape[0]]
    if not rows:
        return np.zeros((0, alg.dim), dtype=np.int64)
    return fp.row_basis(np.vstack(rows), p)


def _quotient_map(sub, n, p):
    """Matrix sending a vector to its coordinates modulo the row space of sub."""
    comp = fp.complement(sub, n, p)
    full = np.vstack([sub, comp]) if sub.shape[0] else comp
    inv = fp.inverse(full, p)
    return inv[:, sub.shape[0]:]


def _corner_ideal(alg, corner, seeds):
    p = alg.p
    seeds = [s for s in seeds if np.any(s)]
    if not seeds:
        return np.zeros((0, alg.dim), dtype=np.int64)
    basis = fp.row_basis(np.vstack(seeds), p)
    while True:
        prods = [basis]
        for c in corner:
            prods.append(np.mod(np.stack([alg.product(c, r) for r in basis]), p))
            prods.append(np.mod(np.stack([alg.product(r, c) for r in basis]), p))
        new = fp.row_basis(np.vstack(prods), p)
        if new.shape[0] == basis.shape[0]:
            return new
        basis = new


# ------------------------------------------------------------ constructors

def build_structure_constant_algebra(dim, mul, unit, p=2, labels=None, name="",
                                     radical=None, check=True):
    """Algebra from raw structure constants, with exhaustive axiom checks."""
    p = fp.check_prime(p)
    table = fp.asfp(mul, p).reshape(dim, dim, dim)
    one = fp.asfp(unit, p).reshape(dim)
    if check:
        lhs = np.mod(np.einsum("ijm,mkl->ijkl", table, table), p)
        rhs = np.mod(np.einsum("jkm,iml->ijkl", table, table), p)
        if not np.array_equal(lhs, rhs):
            bad = np.argwhere(np.any(lhs != rhs, axis=3))[0]
            raise NotAssociative(f"(b{bad[0]} b{bad[1]}) b{bad[2]} != b{bad[0]} (b{bad[1]} b{bad[2]})")
        ident = np.eye(dim, dtype=np.int64)
        left = np.mod(np.einsum("i,ijk->jk", one, table), p)
        right = np.mod(np.einsum("j,ijk->ik", one, table), p)
        if not (np.array_equal(left, ident) and np.array_equal(right, ident)):
            raise NoUnit("given unit is not a two-sided identity")
    return Algebra(p, table, one, labels, radical=radical, name=name)


@dataclass(frozen=True)
class QuiverSpec:
    vertices: tuple
    arrows: tuple  # (name, source, target)
    relations: tuple = ()
    p: int = 2
    nilpotency_cap: int = 2

    def __post_init__(self):
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        verts = set(self.vertices)
        for name, s, t in self.arrows:
            if s not in verts or t not in verts:
                raise ValueError(f"arrow {name} uses an unknown vertex")
        if self.nilpotency_cap < 2:
            raise ValueError("nilpotency cap must be at least 2")


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+)\s*\*\s*)?([A-Za-z_][\w]*(?:\s*\*\s*[A-Za-z_][\w]*)*)\s*")


def parse_relation(text, arrow_names, p):
    """'a*b - 2*c*d' -> list of (coefficient mod p, arrow tuple)."""
    s = text.strip()
    if not s:
        raise ParseError("empty relation")
    pos, terms = 0, []
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse relation {text!r} at offset {pos}")
        sign, coef, word = m.groups()
        if terms and not sign:
            raise ParseError(f"missing operator in relation {text!r}")
        c = int(coef) if coef else 1
        if sign == "-":
            c = -c
        path = tuple(w.strip() for w in word.split("*"))
        for a in path:
            if a not in arrow_names:
                raise ParseError(f"unknown arrow {a!r} in relation {text!r}")
        terms.append((c % p, path))
        pos = m.end()
    return terms


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: tuple

    def __len__(self):
        return len(self.arrows)

    def label(self):
        return "*".join(self.arrows) if self.arrows else f"e{self.source}"


def _enumerate_paths(spec: QuiverSpec, max_len):
    by_len = [[Path(v, v, ()) for v in spec.vertices]]
    arrows = [Path(s, t, (n,)) for n, s, t in spec.arrows]
    if max_len >= 1:
        by_len.append(arrows)
    for _ in range(2, max_len + 1):
        nxt = []
        for q in by_len[-1]:
            for a in arrows:
                if a.source == q.target:
                    nxt.append(Path(q.source, a.target, q.arrows + a.arrows))
        by_len.append(nxt)
    return by_len


def _concat(x: Path, y: Path):
    if x.target != y.source:
        return None
    if not x.arrows:
        return y
    if not y.arrows:
        return x
    return Path(x.source, y.target, x.arrows + y.arrows)


def build_bound_quiver_algebra(spec: QuiverSpec, name=""):
    """Path algebra modulo the ideal generated by the relations.

    Paths compose left to right: x*y is nonzero when x ends where y starts.
    """
    p = fp.check_prime(spec.p)
    cap = spec.nilpotency_cap
    by_len = _enumerate_paths(spec, cap)
    paths = [q for level in by_len for q in level]
    index = {q: i for i, q in enumerate(paths)}
    arrow_names = {a[0] for a in spec.arrows}
    arrow_paths = by_len[1] if cap >= 1 else []

    rel_rows = []
    for text in spec.relations:
        terms = parse_relation(text, arrow_names, p) if isinstance(text, str) else list(text)
        row = np.zeros(len(paths), dtype=np.int64)
        ends = set()
        for c, word in terms:
            if len(word) < 2:
                raise InadmissibleRelations(f"relation {text!r} has a term of length < 2")
            q = _word_to_path(spec, word)
            if q is None:
                continue  # non-composable words vanish in the path algebra
            ends.add((q.source, q.target))
            if len(q) <= cap:
                row[index[q]] = (row[index[q]] + c) % p
        if len(ends) > 1:
            raise InadmissibleRelations(f"relation {text!r} mixes non-parallel paths")
        rel_rows.append(row)

    ideal = np.zeros((0, len(paths)), dtype=np.int64)
    if rel_rows:
        ideal = fp.row_basis(np.vstack(rel_rows), p)
    while ideal.shape[0]:
        new_rows = [ideal]
        for a in arrow_paths:
            for side in (0, 1):
                shifted = np.zeros_like(ideal)
                for j, q in enumerate(paths):
                    col = ideal[:, j]
                    if not np.any(col):
                        continue
                    r = _concat(a, q) if side == 0 else _concat(q, a)
                    if r is None or len(r) > cap:
                        continue
                    k = index[r]
                    shifted[:, k] = (shifted[:, k] + col) % p
                new_rows.append(shifted)
        grown = fp.row_basis(np.vstack(new_rows), p)
        if grown.shape[0] == ideal.shape[0]:
            break
        ideal = grown

    for q in by_len[cap] if cap < len(by_len) else []:
        e = np.zeros(len(paths), dtype=np.int64)
        e[index[q]] = 1
        if not fp.in_span(ideal, e, p):
            raise NotNilpotent(f"path {q.label()} of length {cap} survives the relations")

    # normal forms: order columns longest first so that leading terms are pivots
    order = sorted(range(len(paths)), key=lambda i: (-len(paths[i]), i))
    pivot_paths = {}
    if ideal.shape[0]:
        red, piv = fp.rref(ideal[:, order], p)
        for r, c in enumerate(piv):
            pivot_paths[order[c]] = np.mod(-red[r, np.argsort(order)], p)
    basis_idx = [i for i in range(len(paths)) if i not in pivot_paths and len(paths[i]) < cap]
    pos = {i: k for k, i in enumerate(basis_idx)}
    n = len(basis_idx)

    def reduce(path):
        v = np.zeros(n, dtype=np.int64)
        if path is None or len(path) > cap:
            return v
        i = index[path]
        if i in pos:
            v[pos[i]] = 1
            return v
        if i in pivot_paths:
            row = pivot_paths[i].copy()
            row[i] = 0
            for j in np.flatnonzero(row):
                if j in pos:
                    v[pos[j]] = (v[pos[j]] + row[j]) % p
            return v
        return v

    mul = np.zeros((n, n, n), dtype=np.int64)
    for a, i in enumerate(basis_idx):
        for b, j in enumerate(basis_idx):
            mul[a, b] = reduce(_concat(paths[i], paths[j]))
    unit = np.zeros(n, dtype=np.int64)
    idem = []
    for v in spec.vertices:
        k = pos[index[Path(v, v, ())]]
        unit[k] = 1
        e = np.zeros(n, dtype=np.int64)
        e[k] = 1
        idem.append(e)
    radical = np.eye(n, dtype=np.int64)[[pos[i] for i in basis_idx if len(paths[i]) > 0]]
    gens = [e for e in idem] + [np.eye(n, dtype=np.int64)[pos[index[a]]]
                                for a in arrow_paths if index[a] in pos]
    labels = [paths[i].label() for i in basis_idx]
    quiver = {
        "vertices": list(spec.vertices),
        "arrows": {a[0]: (a[1], a[2]) for a in spec.arrows},
        "basis_paths": [paths[i] for i in basis_idx],
        "spec": spec,
    }
    return Algebra(p, mul, unit, labels, idempotents=idem, reps=list(range(len(idem))),
                   radical=radical.reshape(-1, n), generators=gens,
                   idempotent_labels=list(spec.vertices), name=name, quiver=quiver)


def _word_to_path(spec, word):
    arrows = {a[0]: a for a in spec.arrows}
    first = arrows[word[0]]
    q = Path(first[1], first[2], (first[0],))
    for w in word[1:]:
        nxt = arrows[w]
        if nxt[1] != q.target:
            return None
        q = Path(q.source, nxt[2], q.arrows + (nxt[0],))
    return q


def opposite_algebra(a: Algebra) -> Algebra:
    return a.opposite()


_ENVELOPING = {}


def enveloping_algebra(a: Algebra, b: Algebra) -> Algebra:
    """A^op (x) B, whose right modules are A-B bimodules.

    Basis element (i, j) has index i * dim(B) + j and acts on a bimodule
    by m -> b_i m b_j.
    """
    if a.p != b.p:
        raise FieldMismatch(f"fields differ: F_{a.p} vs F_{b.p}")
    key = (id(a), id(b))
    if key in _ENVELOPING and _ENVELOPING[key][0] is a and _ENVELOPING[key][1] is b:
        return _ENVELOPING[key][2]
    p = a.p
    na, nb = a.dim, b.dim
    n = na * nb
    # (x (x) y)(x' (x) y') = (x' x) (x) (y y')
    mul = np.einsum("kim,jln->ijklmn", a.mul, b.mul).reshape(n, n, n)
    unit = np.kron(a.unit, b.unit)
    idem, idem_labels = [], []
    for ia, ea in enumerate(a.idempotents):
        for ib, eb in enumerate(b.idempotents):
            idem.append(np.kron(ea, eb))
            idem_labels.append(f"{a.idempotent_labels[ia]}|{b.idempotent_labels[ib]}")
    reps = [ra * len(b.idempotents) + rb for ra in a.reps for rb in b.reps]
    rad_rows = []
    if a.radical.shape[0]:
        rad_rows.append(np.vstack([np.kron(r, np.eye(nb, dtype=np.int64)[j])
                                   for r in a.radical for j in range(nb)]))
    if b.radical.shape[0]:
        rad_rows.append(np.vstack([np.kron(np.eye(na, dtype=np.int64)[i], r)
                                   for i in range(na) for r in b.radical]))
    radical = fp.row_basis(np.vstack(rad_rows), p) if rad_rows else np.zeros((0, n), dtype=np.int64)
    gens = [np.kron(g, b.unit) for g in a.generators] + [np.kron(a.unit, g) for g in b.generators]
    labels = [f"{la}(x){lb}" for la in a.labels for lb in b.labels]
    env = Algebra(p, np.mod(mul, p), unit, labels, idempotents=idem, reps=reps, radical=radical,
                  generators=gens, idempotent_labels=idem_labels,
                  name=f"({a.name})^op(x)({b.name})")
    env.factors = (a, b)
    _ENVELOPING[key] = (a, b, env)
    return env


def field_algebra(p=2) -> Algebra:
    return Algebra(p, np.ones((1, 1, 1), dtype=np.int64), [1], ["1"], idempotents=[[1]],
                   reps=[0], radical=np.zeros((0, 1), dtype=np.int64), generators=[],
                   idempotent_labels=["1"], name=f"F{p}")
