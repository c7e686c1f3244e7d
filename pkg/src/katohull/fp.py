"""Dense linear algebra over a prime field F_p and integer Smith normal form.

Matrices are numpy int64 arrays holding residues in [0, p).  Vectors are
rows; a matrix ``m`` acts on a row vector ``v`` as ``v @ m``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp

from .errors import ShapeMismatch

MAX_PRIME = 97


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def check_prime(p: int) -> int:
    if not (is_prime(p) and p <= MAX_PRIME):
        raise ValueError(f"field characteristic must be a prime <= {MAX_PRIME}, got {p}")
    return p


@lru_cache(maxsize=None)
def inverses(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, p - 2, p)
    return table


def asfp(m, p: int, shape=None) -> np.ndarray:
    a = np.asarray(m, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    return np.mod(a, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.mod(a @ b, p)


def rref(m: np.ndarray, p: int):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    a = np.mod(np.array(m, dtype=np.int64, copy=True), p)
    if a.ndim != 2:
        raise ShapeMismatch("rref expects a 2-d matrix")
    rows, cols = a.shape
    inv = inverses(p)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * inv[a[r, c]]) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _kernel_from_rref(red: np.ndarray, pivots, cols: int) -> np.ndarray:
    free = [c for c in range(cols) if c not in set(pivots)]
    ker = np.zeros((len(free), cols), dtype=np.int64)
    for j, f in enumerate(free):
        ker[j, f] = 1
        for i, pc in enumerate(pivots):
            ker[j, pc] = -red[i, f]
    return ker


def nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {x : m @ x = 0}."""
    m = np.asarray(m, dtype=np.int64)
    if m.shape[0] == 0:
        return identity(m.shape[1])
    red, piv = rref(m, p)
    return np.mod(_kernel_from_rref(red, piv, m.shape[1]), p)


def left_nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {v : v @ m = 0}."""
    return nullspace(np.asarray(m, dtype=np.int64).T, p)


def rank(m: np.ndarray, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


@dataclass(frozen=True)
class RowReduction:
    rank: int
    rref: np.ndarray
    kernel: np.ndarray


def row_reduce(m, p: int) -> RowReduction:
    m = asfp(m, p)
    if m.ndim != 2:
        m = m.reshape(0, 0)
    red, piv = rref(m, p) if m.shape[0] else (zeros(0, m.shape[1]), [])
    return RowReduction(len(piv), red, np.mod(_kernel_from_rref(red, piv, m.shape[1]), p))


@dataclass(frozen=True)
class Solution:
    particular: np.ndarray
    kernel: np.ndarray


def solve(a, b, p: int):
    """Solve a @ x = b.  Returns a Solution, or None when inconsistent."""
    a = asfp(a, p)
    b = asfp(b, p)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ShapeMismatch(f"row counts differ: {a.shape[0]} vs {b.shape[0]}")
    n = a.shape[1]
    red, piv = rref(np.hstack([a, b]), p)
    if any(c >= n for c in piv):
        return None
    x = zeros(n, b.shape[1])
    for i, c in enumerate(piv):
        x[c] = red[i, n:]
    ker = np.mod(_kernel_from_rref(red[:, :n], piv, n), p)
    return Solution(x[:, 0] if vector else x, ker)


def solve_left(a: np.ndarray, b: np.ndarray, p: int):
    """Particular solution x of x @ a = b (rows), or None."""
    sol = solve(np.asarray(a).T, np.asarray(b).T, p)
    if sol is None:
        return None
    return sol.particular.T


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    m = asfp(m, p)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ShapeMismatch("inverse of a non-square matrix")
    red, piv = rref(np.hstack([m, identity(n)]), p)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return red[:n, n:]


def is_invertible(m: np.ndarray, p: int) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def row_basis(m: np.ndarray, p: int) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    if m.shape[0] == 0:
        return m.reshape(0, m.shape[1] if m.ndim == 2 else 0)
    return rref(m, p)[0]


def complement(rows: np.ndarray, n: int, p: int) -> np.ndarray:
    """Standard basis vectors completing independent ``rows`` to a basis of F_p^n."""
    rows = np.asarray(rows, dtype=np.int64)
    rows = rows.reshape(-1, n) if rows.size else zeros(0, n)
    piv = rref(rows, p)[1] if rows.shape[0] else []
    free = [c for c in range(n) if c not in set(piv)]
    return identity(n)[free]


def coordinates(basis: np.ndarray, vectors: np.ndarray, p: int) -> np.ndarray:
    """Coefficients c with c @ basis = vectors; basis rows must be independent."""
    basis = np.asarray(basis, dtype=np.int64)
    vectors = np.asarray(vectors, dtype=np.int64)
    single = vectors.ndim == 1
    v = vectors.reshape(-1, basis.shape[1]) if vectors.size else zeros(0, basis.shape[1])
    if basis.shape[0] == 0:
        if np.any(np.mod(v, p)):
            raise ValueError("vector not in span")
        out = zeros(v.shape[0], 0)
    else:
        out = solve_left(basis, v, p)
        if out is None:
            raise ValueError("vector not in span")
    return out[0] if single else out


def in_span(basis: np.ndarray, vectors: np.ndarray, p: int) -> bool:
    basis = np.asarray(basis, dtype=np.int64)
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    if vectors.shape[0] == 0:
        return True
    if basis.shape[0] == 0:
        return not np.any(np.mod(vectors, p))
    return rank(np.vstack([basis, vectors]), p) == rank(basis, p)


def intersect(u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Row basis of the intersection of the row spaces of u and v."""
    u = row_basis(u, p)
    v = row_basis(v, p)
    n = u.shape[1]
    if u.shape[0] == 0 or v.shape[0] == 0:
        return zeros(0, n)
    ker = left_nullspace(np.vstack([u, v]), p)
    if ker.shape[0] == 0:
        return zeros(0, n)
    return row_basis(mul(ker[:, : u.shape[0]], u, p), p)


def right_inverse(w: np.ndarray, p: int) -> np.ndarray:
    """R with w @ R = I for a matrix w with independent rows."""
    w = np.asarray(w, dtype=np.int64)
    k, n = w.shape
    sol = solve(w, identity(k), p)
    if sol is None:
        raise ValueError("rows are dependent")
    return sol.particular


# ---------------------------------------------------------------- integers

@dataclass(frozen=True)
class SmithForm:
    """Invariant factors d_1 | d_2 | ... of an integer relation matrix.

    Rows of the input are relations and columns are generators, so the
    presented group is Z^cols / rowspace = (+) Z/d_i (+) Z^free_rank.
    ``left`` and ``right`` are unimodular with left @ m @ right diagonal.
    """

    factors: tuple
    free_rank: int
    left: Matrix
    right: Matrix
    diagonal: Matrix

    @property
    def torsion(self) -> tuple:
        return tuple(d for d in self.factors if d != 1)


def smith_normal_form(m) -> SmithForm:
    mat = Matrix(m) if not isinstance(m, Matrix) else m
    rows, cols = mat.shape
    if rows == 0 or cols == 0:
        return SmithForm((), cols, Matrix.eye(rows), Matrix.eye(cols), mat)
    diag, left, right = smith_normal_decomp(mat, domain=ZZ)
    factors = []
    for i in range(min(rows, cols)):
        d = abs(int(diag[i, i]))
        if d:
            factors.append(d)
    return SmithForm(tuple(factors), cols - len(factors), left, right, diag)


def in_row_lattice(v, m) -> bool:
    """True when the integer vector v is a Z-combination of the rows of m."""
    mat = Matrix(m)
    vec = Matrix([list(v)])
    if mat.shape[0] == 0:
        return all(x == 0 for x in vec)
    snf = smith_normal_form(mat)
    w = vec * snf.right
    r = len(snf.factors)
    for i in range(w.shape[1]):
        if i < r:
            if w[0, i] % snf.factors[i]:
                return False
        elif w[0, i] != 0:
            return False
    return True
