import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from katohull import fp
from katohull.errors import ShapeMismatch


def brute_rank(m, p):
    """Largest k such that some k rows are independent, by enumerating combinations."""
    rows, cols = m.shape
    vectors = {tuple(np.mod(np.array(c) @ m, p)) for c in itertools.product(range(p), repeat=rows)}
    size = len(vectors)
    k = 0
    while p ** k < size:
        k += 1
    return k


def matrices(max_rows=4, max_cols=4, primes=(2, 3, 5)):
    return st.tuples(st.sampled_from(primes), st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda t: st.tuples(st.just(t[0]), st.lists(st.integers(0, t[0] - 1), min_size=t[1] * t[2],
                                                     max_size=t[1] * t[2]).map(
            lambda xs, r=t[1], c=t[2]: np.array(xs, dtype=np.int64).reshape(r, c))))


def test_rank_of_frozen_matrix_over_f3():
    m = np.array([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    # row 2 = 2 * row 1 mod 3
    assert fp.rank(m, 3) == 2


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_brute_force(pm):
    p, m = pm
    assert fp.rank(m, p) == brute_rank(m, p)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_is_kernel_of_full_dimension(pm):
    p, m = pm
    k = fp.nullspace(m, p)
    assert k.shape[0] == m.shape[1] - fp.rank(m, p)
    if k.size:
        assert not np.any(fp.mul(m, k.T, p))


@settings(max_examples=60, deadline=None)
@given(matrices(max_rows=3, max_cols=3))
def test_inverse_roundtrip_when_invertible(pm):
    p, m = pm
    if m.shape[0] != m.shape[1]:
        return
    if fp.is_invertible(m, p):
        assert np.array_equal(fp.mul(m, fp.inverse(m, p), p), fp.identity(m.shape[0]))
    else:
        with pytest.raises(ValueError):
            fp.inverse(m, p)


def test_solve_reports_inconsistency():
    a = np.array([[1, 1], [1, 1]])
    assert fp.solve(a, np.array([0, 1]), 2) is None
    sol = fp.solve(a, np.array([1, 1]), 2)
    assert np.array_equal(np.mod(a @ sol.particular, 2), [1, 1])
    assert sol.kernel.shape[0] == 1


def test_solve_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        fp.solve(np.eye(2, dtype=np.int64), np.array([1, 0, 0]), 2)


def test_complement_and_coordinates():
    rows = np.array([[1, 1, 0]])
    comp = fp.complement(rows, 3, 2)
    assert fp.rank(np.vstack([rows, comp]), 2) == 3
    basis = np.array([[1, 0, 1], [0, 1, 1]])
    c = fp.coordinates(basis, np.array([1, 1, 0]), 2)
    assert np.array_equal(np.mod(c @ basis, 2), [1, 1, 0])
    with pytest.raises(ValueError):
        fp.coordinates(basis, np.array([1, 0, 0]), 2)


def test_empty_inputs():
    assert fp.complement(np.zeros((0, 3), dtype=np.int64), 3, 2).shape == (3, 3)
    assert fp.coordinates(np.zeros((0, 2), dtype=np.int64), np.zeros((0, 2), dtype=np.int64), 2).shape == (0, 0)
    assert fp.rank(np.zeros((0, 4), dtype=np.int64), 5) == 0


def test_intersect_of_planes_over_f2():
    u = np.array([[1, 0, 0], [0, 1, 0]])
    v = np.array([[0, 1, 0], [0, 0, 1]])
    w = fp.intersect(u, v, 2)
    assert w.shape[0] == 1 and np.array_equal(w[0], [0, 1, 0])


def test_smith_normal_form_frozen_values():
    # Z^2 / <(2, 4), (6, 8)>: determinant -8, gcd of entries 2 -> Z/2 + Z/4
    snf = fp.smith_normal_form([[2, 4], [6, 8]])
    assert snf.factors == (2, 4) and snf.free_rank == 0
    snf = fp.smith_normal_form([[1, 1]])
    assert snf.torsion == () and snf.free_rank == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=3))
def test_smith_factors_multiply_to_gcd_of_minors(rows):
    snf = fp.smith_normal_form(rows)
    import sympy

    m = sympy.Matrix(rows)
    r = m.rank()
    assert len(snf.factors) == r
    minors = [m.extract(list(ri), list(ci)).det()
              for ri in itertools.combinations(range(m.rows), r)
              for ci in itertools.combinations(range(m.cols), r)] if r else [1]
    g = 0
    for x in minors:
        g = sympy.gcd(g, x)
    prod = 1
    for d in snf.factors:
        prod *= d
    assert prod == abs(g)
    for a, b in zip(snf.factors, snf.factors[1:]):
        assert b % a == 0


def test_row_lattice_membership():
    rel = [[2, 0], [0, 3]]
    assert fp.in_row_lattice([4, 3], rel)
    assert not fp.in_row_lattice([1, 0], rel)
    assert fp.in_row_lattice([0, 0], [])


def test_check_prime_rejects_composites():
    with pytest.raises(ValueError):
        fp.check_prime(4)
