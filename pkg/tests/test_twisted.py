import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from azurep import linalg as la
from azurep.errors import InputError
from azurep.exactalg.algebra import (
    AlgebraMorphism,
    identity_morphism,
    inner_automorphism,
    matrix_algebra,
    matrix_unit,
    quaternion,
)
from azurep.exactalg.structure import random_unit, reduced_trace
from azurep.fields import GF, QQ
from azurep.quiverrep.quiver import Arrow, QuiverPresentation, Term, single_arrow
from azurep.quiverrep.reps import gl_action
from azurep.twisted import (
    RightModule,
    automorphism_to_tuple,
    block_iso,
    conjugate_twisted,
    dictionary_roundtrip,
    dimvec_from_idempotents,
    direct_sum,
    endo_algebra,
    endo_then_peirce,
    hom_space,
    identity_iso,
    inner_twist_isomorphism,
    iso_to_automorphism,
    module_obstruction,
    peirce_decompose,
    peirce_then_endo,
    regular_module,
    row_module,
    semilinear_space,
    twist,
    twist_identification,
    twisted_to_algebra_map,
    twisting_iso,
    TwistedRep,
)
from azurep.twisted.endo import seeded_split_instance
from azurep.twisted.modules import ideal_module, modules_equal

H = quaternion(-1, -1, QQ)
F5 = GF(5)
I_H, J_H = H.basis(1), H.basis(2)


def qq_module(n):
    return RightModule(matrix_algebra(1, QQ), n, [la.identity(QQ, n)])


def loop_at_two():
    # 1   2 with a loop a at 2 and relation a a + e_2
    return QuiverPresentation(2, [Arrow("a", 1, 1)],
                              [[Term(Fraction(1), ("a", "a")), Term(Fraction(1), (), 1)]])


# modules


def test_module_validation():
    A = matrix_algebra(2, QQ)
    with pytest.raises(InputError):
        RightModule(A, 2, [la.identity(QQ, 2)] * 3)
    bad = [la.identity(QQ, 2)] * 4  # every basis element acting as 1
    with pytest.raises(InputError):
        RightModule(A, 2, bad)
    assert row_module(A).dim == 2 and regular_module(A).dim == 4


def test_hom_spaces_between_row_modules():
    A = matrix_algebra(2, F5)
    R = row_module(A)
    assert len(hom_space(R, R)) == 1
    assert len(hom_space(direct_sum([R, R]), R)) == 2
    assert len(hom_space(regular_module(A), R)) == 2


def test_twist_functoriality_and_identity():
    P = regular_module(H)
    u = (QQ(1), QQ(1), QQ(0), QQ(0))
    s = inner_automorphism(H, u)
    assert modules_equal(twist(P, identity_morphism(H)), P)
    assert modules_equal(twist(twist(P, s), s.inverse()), P)


@pytest.mark.parametrize("u", [(1, 1, 0, 0), (1, 2, 3, 4), (0, 0, 1, 1)])
def test_inner_twist_is_isomorphic(u):
    u = tuple(QQ(x) for x in u)
    sigma, Ps, f = inner_twist_isomorphism(regular_module(H), u)
    assert la.is_invertible(QQ, f)
    assert sigma(I_H) == H.mul(H.mul(u, I_H), H.inverse(u))


def test_ideal_module_is_right_ideal():
    A = matrix_algebra(2, QQ)
    row0 = [matrix_unit(2, 0, 0), matrix_unit(2, 0, 1)]
    S = ideal_module(A, row0)
    assert S.dim == 2
    S.validate()
    with pytest.raises(InputError):
        ideal_module(A, [matrix_unit(2, 0, 0), matrix_unit(2, 1, 0)])


# endo_algebra and the Peirce decomposition


def test_endo_algebra_untwisted():
    D = endo_algebra(matrix_algebra(1, QQ), [qq_module(2)], (1, 2))
    assert D.B.dim == 9 and D.to_json()["traces"] == [1, 2]


def test_endo_algebra_quaternion():
    D = endo_algebra(H, [regular_module(H)], (2, 2))
    js = D.to_json()
    assert (js["dim"], js["degree"], js["centerDim"], js["traces"]) == (16, 4, 1, [2, 2])


def test_endo_algebra_split_prime_field():
    A = matrix_algebra(2, F5)
    D = endo_algebra(A, [row_module(A)], (2, 1))
    assert D.to_json()["degree"] == 3 and D.alpha == (2, 1)


def test_endo_algebra_rank_condition():
    with pytest.raises(InputError):
        endo_algebra(H, [qq_module(2)], (2, 1))
    with pytest.raises(InputError):
        endo_algebra(H, [regular_module(H)], (2, 1))


def test_peirce_of_m3_and_m4():
    B = matrix_algebra(3, QQ)
    e1 = matrix_unit(3, 0, 0)
    e2 = B.sub(B.one, e1)
    pd = peirce_decompose(dimvec_from_idempotents(B, [e1, e2], (1, 2)))
    assert pd.algebra.dim == 1 and pd.modules[1].dim == 2
    B = matrix_algebra(4, F5)
    e1 = B.add(matrix_unit(4, 0, 0, F5), matrix_unit(4, 1, 1, F5))
    pd = peirce_decompose(dimvec_from_idempotents(B, [e1, B.sub(B.one, e1)], (2, 2)))
    assert pd.algebra.dim == 4 and pd.modules[1].dim == 4
    assert reduced_trace(B, e1) == 2


def test_round_trips_for_quaternion_example():
    mods = [regular_module(H)]
    assert endo_then_peirce(H, mods, (2, 2)).ok
    assert peirce_then_endo(endo_algebra(H, mods, (2, 2))).ok


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trips_on_seeded_split_instances(seed):
    A, mods, alpha = seeded_split_instance(seed)
    D = endo_algebra(A, mods, alpha)
    assert [reduced_trace(D.B, e) for e in D.idems.elements] == list(alpha)
    assert endo_then_peirce(A, mods, alpha, D).ok
    assert peirce_then_endo(D).ok


# twisted representations and algebra maps


def test_quaternion_loop_squares_to_minus_one():
    rho = {"a": H.left_matrix(I_H)}
    t = TwistedRep(H, [regular_module(H)], rho, loop_at_two())
    phi = twisted_to_algebra_map(t)
    B = phi.target.B
    sq = B.mul(phi.arrow_images["a"], phi.arrow_images["a"])
    assert sq == B.scale(QQ(-1), phi.vertex_images[1])


def test_relation_failure_is_rejected():
    with pytest.raises(InputError):
        TwistedRep(H, [regular_module(H)], {"a": H.left_matrix(H.one)}, loop_at_two())


def test_non_linear_rho_rejected():
    # right multiplication by i is not right-A-linear
    with pytest.raises(InputError):
        TwistedRep(H, [regular_module(H)], {"a": H.right_matrix(I_H)}, QuiverPresentation(2, [Arrow("a", 1, 1)]))


def test_zero_rep_maps_arrows_to_zero():
    A = matrix_algebra(2, F5)
    Q = QuiverPresentation(2, [Arrow("a", 0, 1)])
    t = TwistedRep(A, [row_module(A)], {"a": la.zeros(F5, 2, 4)}, Q)
    phi = twisted_to_algebra_map(t)
    assert not any(phi.arrow_images["a"])
    assert phi.vertex_images == list(phi.target.idems.elements)


def test_untwisted_algebra_map_is_block_matrix():
    A = matrix_algebra(1, QQ)
    Q = single_arrow()
    M = [[QQ(2)], [QQ(3)]]
    t = TwistedRep(A, [qq_module(2)], {"a": M}, Q)
    phi = twisted_to_algebra_map(t)
    big = phi.matrix(phi.arrow_images["a"])
    assert big == [[0, 0, 0], [2, 0, 0], [3, 0, 0]]


# isomorphisms and the automorphism dictionary


def test_untwisted_conjugation_matches_gl_action():
    F = GF(3)
    A = matrix_algebra(1, F)
    # x-loop at vertex 2, with P_1 = A one-dimensional
    Q = QuiverPresentation(2, [Arrow("x", 1, 1)], [[Term(Fraction(1), ("x", "x"))]])
    P2 = RightModule(A, 2, [la.identity(F, 2)])
    pt = {"x": [[F(0), F(1)], [F(0), F(0)]]}
    g = [[F(1), F(1)], [F(0), F(2)]]
    t = TwistedRep(A, [P2], pt, Q)
    got = conjugate_twisted(t, block_iso(A, [P2], identity_morphism(A), [g])).rho["x"]
    want = gl_action(Q, (1, 2), [[[F(1)]], g], pt, F)["x"]
    assert got == [list(r) for r in want]


def test_identity_iso_acts_trivially_and_composes():
    rho = {"a": H.left_matrix(I_H)}
    t = TwistedRep(H, [regular_module(H)], rho, loop_at_two())
    assert conjugate_twisted(t, identity_iso(H, t.modules[1:])).same_as(t)
    psi = iso_to_automorphism(identity_iso(H, t.modules[1:]))
    assert psi.matrix == la.identity(QQ, 16)


def test_double_conjugation_is_conjugation_by_composite():
    rho = {"a": H.left_matrix(I_H)}
    t = TwistedRep(H, [regular_module(H)], rho, loop_at_two())
    u = tuple(QQ(x) for x in (1, 1, 0, 0))
    v = tuple(QQ(x) for x in (1, 0, 2, 0))
    s1 = twisting_iso(H, t.modules[1:], inner_automorphism(H, u))
    t1 = conjugate_twisted(t, s1)
    s2 = twisting_iso(H, t1.modules[1:], inner_automorphism(H, v))
    both = conjugate_twisted(t1, s2)
    direct = conjugate_twisted(t, s2.compose(s1))
    assert both.same_as(direct)


def test_quaternion_inner_tuple_dictionary():
    u = tuple(QQ(x) for x in (1, 2, 0, 1))
    sigma = inner_automorphism(H, u)
    P = regular_module(H)
    # sigma_2(x) = x u^-1, so sigma_2(x a) = x u^-1 . u a u^-1
    s2 = H.right_matrix(H.inverse(u))
    iso = block_iso(H, [P], sigma, [s2])
    psi = iso_to_automorphism(iso)
    psi.validate()
    assert dictionary_roundtrip(iso).ok
    f = twist_identification(iso, 2)
    assert la.is_invertible(QQ, f)


def test_untwisted_automorphism_to_tuple():
    A = matrix_algebra(1, QQ)
    D = endo_algebra(A, [qq_module(2)], (1, 2))
    g = [[QQ(1), QQ(2)], [QQ(0), QQ(1)]]
    iso = block_iso(A, [qq_module(2)], identity_morphism(A), [g])
    psi = iso_to_automorphism(iso, D, D)
    back = automorphism_to_tuple(psi, D, D)
    assert back.sigma.matrix == [[1]]
    assert dictionary_roundtrip(iso).ok


def test_automorphism_to_tuple_rejects_swaps():
    A = matrix_algebra(1, QQ)
    D = endo_algebra(A, [qq_module(1)], (1, 1))
    # conjugation by the swap exchanges e_1 and e_2
    real = D.realization
    swap = [[QQ(0), QQ(1)], [QQ(1), QQ(0)]]
    images = [real.coordinates(la.matmul(QQ, la.matmul(QQ, swap, real.matrix(D.B.basis(k))), swap))
              for k in range(D.B.dim)]
    psi = AlgebraMorphism.from_images(D.B, D.B, images)
    with pytest.raises(InputError):
        automorphism_to_tuple(psi, D, D)


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 10**6))
def test_seeded_automorphism_tuples_round_trip(seed):
    rng = random.Random(seed)
    A, mods, alpha = seeded_split_instance(seed)
    u = random_unit(A, rng)
    sigma = inner_automorphism(A, u)
    maps = []
    for P in mods:
        basis = semilinear_space(P, P, sigma)
        while True:
            coeffs = [A.field(rng.randrange(5)) for _ in basis]
            f = la.zeros(A.field, P.dim, P.dim)
            for c, B in zip(coeffs, basis):
                f = la.mat_add(A.field, f, la.mat_scale(A.field, c, B))
            if la.is_invertible(A.field, f):
                break
        maps.append(f)
    iso = block_iso(A, mods, sigma, maps)
    assert dictionary_roundtrip(iso).ok


# obstruction


def test_obstruction_quaternion_23_is_infeasible():
    r = module_obstruction(H, (2, 3))
    assert not r.feasible and r.first_failure == 2
    assert r.to_json()["simpleModuleDimF"] == 4


def test_obstruction_quaternion_22_builds_witness():
    r = module_obstruction(H, (2, 2))
    assert r.feasible and r.witness.B.dim == 16 and r.witness_index == 2


def test_obstruction_split_is_feasible():
    r = module_obstruction(matrix_algebra(2, F5), (2, 3))
    assert r.feasible and r.index == 1 and r.witness_index == 1


def test_obstruction_degree_mismatch():
    with pytest.raises(InputError):
        module_obstruction(H, (3, 1))

