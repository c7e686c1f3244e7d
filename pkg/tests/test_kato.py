import numpy as np
import pytest

from katohull import catalog
from katohull.complexes import Shift, direct_sum_complex, homotopy_equivalent, shift, stalk
from katohull.errors import NotInL, NotMinimalDegree
from katohull.kato import (
    IN_HP,
    IN_HSTP,
    IN_L,
    check_perfect_triangle,
    eae_acyclic_test,
    hull_membership,
    is_perfect_exact,
    kato_complex,
    lift_module_map,
    nu_k,
    probe_modules,
    reduce_to_resolutions,
    remove_lowest_cohomology,
    self_injective_suite,
    stable_inverse,
    stably_isomorphic,
    totally_acyclic_on_window,
)
from katohull.modules import (
    ModuleMap,
    direct_sum,
    dual,
    ext1,
    hom_basis,
    projective_module,
    simple_module,
    split_sequence,
)

ALGEBRAS = ["a2", "dual", "cyclic", "a3", "a3r2"]


@pytest.mark.parametrize("name", ALGEBRAS)
def test_kato_round_trip_on_probe_modules(name):
    alg = catalog.by_name(name)
    for x in probe_modules(alg):
        f = kato_complex(x)
        assert f.check_square_zero()
        assert hull_membership(f).verdict == IN_L
        assert stably_isomorphic(stable_inverse(f), x)


def test_kato_complex_of_simple_over_a2(a2):
    f = kato_complex(simple_module(a2, 0))
    assert f.nonzero_degrees() == [-1, 0]
    assert f.terms[-1] == (1,) and f.terms[0] == (0,)


def test_kato_complex_splices_nontrivially():
    alg = catalog.a3_radical_square_zero()
    f = kato_complex(simple_module(alg, 1))
    # resolution P3 -> P2 in degrees -1, 0 continued by P1 in degree 1
    assert f.terms[-1] == (2,) and f.terms[0] == (1,) and f.terms[1] == (0,)
    assert np.any(f.diffs[0])
    assert all(f.cohomology(k).dim == 0 for k in range(-5, 1))
    assert f.cohomology(1).dim == 1


def test_kato_complex_of_projective_vanishes(a2):
    assert kato_complex(projective_module(a2, 0)).is_zero_window()
    f = kato_complex(direct_sum(simple_module(a2, 0), projective_module(a2, 1)))
    assert homotopy_equivalent(f, kato_complex(simple_module(a2, 0)))


def test_self_injective_kato_complexes_are_periodic(dual_numbers):
    f = kato_complex(simple_module(dual_numbers, 0))
    assert all(f.terms[k] == (0,) for k in range(f.lo, f.hi + 1))
    assert totally_acyclic_on_window(f) == (True, None)


def test_stalk_projective_injective_witness_over_a2(a2):
    cert = hull_membership(stalk((0,), 0, a2))
    assert cert.verdict == IN_HSTP
    assert (cert.l, cert.r) == (0, 1)
    [fail] = cert.failures
    assert (fail.degree, fail.kind, fail.target) == (0, "P_A", 0)
    assert cert.as_dict()["failures"][0]["degree"] == 0


def test_shifted_kato_complex_leaves_l(a2):
    cert = hull_membership(shift(kato_complex(simple_module(a2, 0)), 1))
    assert cert.verdict == IN_HP
    assert cert.cohomology_dims[-1] == 1


def test_stable_inverse_requires_l(a2):
    with pytest.raises(NotInL):
        stable_inverse(stalk((0,), 0, a2))


def test_perfect_exact_sequences(a2):
    s1, s2 = simple_module(a2, 0), simple_module(a2, 1)
    seq = ext1(s1, s2).middle_term([1])
    assert not is_perfect_exact(seq.left, seq.right)
    assert not check_perfect_triangle(seq.left, seq.right)
    split = split_sequence(s2, s1)
    assert is_perfect_exact(split.left, split.right)
    assert check_perfect_triangle(split.left, split.right)


def test_dual_numbers_nonsplit_sequence_is_perfect(dual_numbers):
    s = simple_module(dual_numbers, 0)
    seq = ext1(s, s).middle_term([1])
    assert is_perfect_exact(seq.left, seq.right)
    assert check_perfect_triangle(seq.left, seq.right)


def test_lift_is_chain_map(a2):
    s1 = simple_module(a2, 0)
    for m in hom_basis(s1, s1):
        u = lift_module_map(ModuleMap(s1, s1, m))
        assert u.is_chain_map(-3, 2)


def test_remove_all_lowest_cohomology(a2):
    f = kato_complex(simple_module(a2, 0))
    rem = remove_lowest_cohomology(f)
    assert rem.degree == 0
    assert all(rem.checks.values())


def test_remove_submodule_of_cohomology():
    alg = catalog.a3_linear()
    inj2 = dual(projective_module(alg.opposite(), 1))
    f = kato_complex(inj2)
    f = Shift(f.expr, -1).build(-6, 6)
    k = next(k for k in range(-6, 7) if f.cohomology(k).dim)
    with pytest.raises(NotMinimalDegree):
        remove_lowest_cohomology(f, degree=k + 1)
    rem = remove_lowest_cohomology(f)
    assert rem.degree == k and all(rem.checks.values())


def test_reduce_to_resolutions_formula(a2):
    f = shift(kato_complex(simple_module(a2, 0)), 1)
    red = reduce_to_resolutions(f, -1, 0)
    assert [(s, kind) for s, kind, _ in red.formula] == [(-1, "P"), (1, "F")]
    assert red.tail_module.dim == 0


def test_nu_k_over_a2(a2):
    assert homotopy_equivalent(nu_k(stalk((1,), 0, a2)), stalk((0,), 0, a2))
    out = nu_k(stalk((0,), 0, a2))
    assert sorted(out.nonzero_degrees()) == [-1, 0]
    assert out.terms[-1] == (1,) and out.terms[0] == (0,)


def test_nu_k_rotates_cyclic_nakayama(cyclic):
    assert nu_k(stalk((0,), 0, cyclic)).terms[0] == (1,)
    assert nu_k(stalk((1,), 0, cyclic)).terms[0] == (0,)


def test_nu_k_rejects_unbounded(dual_numbers):
    with pytest.raises(ValueError):
        nu_k(kato_complex(simple_module(dual_numbers, 0)))


def test_corner_test(a2, dual_numbers):
    assert eae_acyclic_test(kato_complex(simple_module(a2, 0))).note
    assert eae_acyclic_test(kato_complex(simple_module(dual_numbers, 0))).acyclic
    bad = eae_acyclic_test(stalk((0,), 0, dual_numbers))
    assert not bad.acyclic and bad.failing_degree == 0


def test_self_injective_suite_reports(a2, dual_numbers):
    rep = self_injective_suite(a2)
    assert not rep.self_injective and rep.witness == 1 and rep.consistent
    assert "H^-1" in rep.conditions["shift_closed"].witness
    good = self_injective_suite(dual_numbers)
    assert good.self_injective and good.consistent
    assert all(c.holds for c in good.conditions.values())
    assert good.as_dict()["consistent"]


def test_semisimple_suite_has_notes():
    rep = self_injective_suite(catalog.semisimple())
    assert rep.self_injective and rep.notes


def test_kato_complex_of_repeated_summand_over_asymmetric_algebra():
    # the star of S2 is covered by a projective whose size differs between A and A^op
    alg = catalog.a3_radical_square_zero()
    s2 = simple_module(alg, 1)
    f = kato_complex(direct_sum(s2, s2))
    assert f.check_square_zero()
    assert homotopy_equivalent(f, direct_sum_complex(kato_complex(s2), kato_complex(s2)))
