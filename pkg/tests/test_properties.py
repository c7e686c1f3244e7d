"""Property tests on randomly generated modules and complexes."""
import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from katohull import catalog, fp
from katohull.complexes import Cone, Shift, direct_sum_complex, homotopy_equivalent, identity_chain_map, minimalize
from katohull.functors import star
from katohull.grothendieck import build_pool
from katohull.kato import hull_membership, kato_complex, stable_inverse, stably_isomorphic
from katohull.modules import (
    Module,
    composition_factors,
    decompose,
    direct_sum,
    hom_basis,
    is_isomorphic,
    kernel,
    projective_cover,
    quiver_module,
)

SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def a2_modules(draw):
    alg = catalog.a2()
    d1, d2 = draw(st.integers(0, 2)), draw(st.integers(0, 2))
    if d1 + d2 == 0:
        d1 = 1
    entries = draw(st.lists(st.integers(0, 1), min_size=d1 * d2, max_size=d1 * d2))
    a = np.array(entries, dtype=np.int64).reshape(d1, d2)
    return quiver_module(alg, {"1": d1, "2": d2}, {"a": a})


@st.composite
def dual_number_modules(draw):
    """x acts by a random square-zero matrix, built as a conjugate of a Jordan form."""
    alg = catalog.dual_numbers()
    d = draw(st.integers(1, 4))
    r = draw(st.integers(0, d // 2))
    n = np.zeros((d, d), dtype=np.int64)
    for i in range(r):
        n[i, r + i] = 1
    while True:
        t = np.array(draw(st.lists(st.integers(0, 1), min_size=d * d, max_size=d * d)), dtype=np.int64).reshape(d, d)
        if fp.is_invertible(t, 2):
            break
        t = np.mod(t + np.eye(d, dtype=np.int64), 2)
        if fp.is_invertible(t, 2):
            break
    x = fp.mul(fp.mul(fp.inverse(t, 2), n, 2), t, 2)
    return Module(alg, np.array([np.eye(d, dtype=np.int64), x]))


modules = st.one_of(a2_modules(), dual_number_modules())


@SETTINGS
@given(modules)
def test_decomposition_accounts_for_every_dimension(x):
    assert sum(m.dim * k for m, k in decompose(x)) == x.dim


@SETTINGS
@given(modules)
def test_kato_round_trip(x):
    f = kato_complex(x)
    assert f.check_square_zero()
    assert hull_membership(f).in_l
    assert stably_isomorphic(stable_inverse(f), x)


@SETTINGS
@given(modules)
def test_projective_cover_is_minimal_epimorphism(x):
    cover, pi = projective_cover(x)
    assert pi.is_surjective()
    _, incl = kernel(pi)
    # minimal: the kernel sits in the radical of the cover
    assert fp.in_span(cover.radical_basis(), incl.matrix, x.p)


@SETTINGS
@given(modules, modules)
def test_star_is_additive(x, y):
    if x.alg is not y.alg:
        return
    assert star(direct_sum(x, y)).dim == star(x).dim + star(y).dim


@SETTINGS
@given(modules, modules)
def test_hom_is_additive(x, y):
    if x.alg is not y.alg:
        return
    s = direct_sum(x, y)
    assert hom_basis(s, s).shape[0] == sum(hom_basis(u, v).shape[0] for u in (x, y) for v in (x, y))


@SETTINGS
@given(modules, modules)
def test_class_vectors_are_additive(x, y):
    if x.alg is not y.alg:
        return
    pool = build_pool(x.alg)
    assert np.array_equal(pool.class_vector(direct_sum(x, y)), pool.class_vector(x) + pool.class_vector(y))


@SETTINGS
@given(modules)
def test_composition_factors_sum_to_dimension(x):
    factors = composition_factors(x)
    assert sum(factors.values()) == x.dim  # every simple here has dimension 1


@SETTINGS
@given(a2_modules(), st.integers(-2, 2))
def test_shift_round_trip(x, n):
    f = kato_complex(x)
    g = Shift(Shift(f.expr, n), -n).build(f.lo, f.hi)
    assert g.terms == f.terms
    for k in f.diffs:
        assert np.array_equal(g.diffs[k], f.diffs[k])


@SETTINGS
@given(a2_modules())
def test_cone_of_identity_is_contractible(x):
    f = kato_complex(x)
    c = Cone(identity_chain_map(f)).build(-4, 3)
    assert minimalize(c).is_zero_window()


@SETTINGS
@given(a2_modules(), a2_modules())
def test_minimalize_preserves_homotopy_type(x, y):
    f = direct_sum_complex(kato_complex(x), kato_complex(y))
    assert homotopy_equivalent(minimalize(f), f)


@SETTINGS
@given(modules)
def test_isomorphism_is_reflexive_under_base_change(x):
    t = np.eye(x.dim, dtype=np.int64)
    t[0] = 1  # first row all ones keeps t invertible
    ti = fp.inverse(t, 2)
    y = Module(x.alg, np.array([fp.mul(fp.mul(t, a, 2), ti, 2) for a in x.action]))
    assert is_isomorphic(x, y)
