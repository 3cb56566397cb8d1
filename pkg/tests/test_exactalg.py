from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from azurep import linalg as la
from azurep.errors import InputError, PreconditionError, RetryError
from azurep.exactalg.algebra import (
    AlgebraMorphism,
    StructureAlgebra,
    algebra_from_json,
    block_diagonal_embedding,
    corner,
    direct_sum,
    field_algebra,
    full_tensor,
    kronecker_embedding,
    matrix_algebra,
    matrix_unit,
    opposite,
    quaternion,
    quaternion_norm,
    split_commutative,
    truncated_polynomial,
)
from azurep.exactalg.structure import (
    IdempotentFamily,
    center,
    degree,
    double_centralizer_check,
    intertwiners,
    is_separable,
    reduced_charpoly,
    reduced_trace,
    seeded_embedding_pairs,
    separability_idempotent,
    skolem_noether,
    verify_conjugator,
)
from azurep.fields import GF, QQ

import oracles

F5 = GF(5)
H = quaternion(-1, -1, QQ)


def test_matrix_algebra_products_are_matrix_products():
    A = matrix_algebra(2, QQ)
    assert A.mul(matrix_unit(2, 0, 1), matrix_unit(2, 1, 0)) == matrix_unit(2, 0, 0)
    assert A.mul(matrix_unit(2, 1, 0), matrix_unit(2, 1, 0)) == A.zero


def test_quaternion_relations():
    i, j, k = H.basis(1), H.basis(2), H.basis(3)
    minus_one = H.scale(QQ(-1), H.one)
    assert H.mul(i, i) == minus_one and H.mul(j, j) == minus_one
    assert H.mul(i, j) == k and H.mul(j, i) == H.scale(QQ(-1), k)
    assert quaternion_norm(H, (1, 2, 3, 4)) == 30
    with pytest.raises(InputError):
        quaternion(1, 1, GF(2))


def test_bad_structure_constants_are_rejected():
    table = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: 1, 1: 1}}
    StructureAlgebra(QQ, 2, table, (1, 0))  # F[x]/(x^2 - x - 1) is fine
    with pytest.raises(InputError):
        StructureAlgebra(QQ, 2, {(0, 0): {0: 1}, (1, 1): {1: 1}}, (1, 0))


def test_degree_and_center():
    assert degree(matrix_algebra(3, F5)) == 3
    assert degree(H) == 2
    assert len(center(direct_sum(H, H))) == 2
    with pytest.raises(PreconditionError):
        degree(truncated_polynomial(4, QQ))


def test_reduced_trace_examples():
    # trace of a matrix unit, and of 1 in a quaternion algebra
    assert reduced_trace(matrix_algebra(3, QQ), matrix_unit(3, 1, 1)) == 1
    assert reduced_trace(H, (1, 2, 3, 4)) == 2
    # characteristic dividing the degree: tr(1) = 2 = 0 in GF(2), charpoly (t - 1)^2
    M2 = matrix_algebra(2, GF(2))
    assert reduced_trace(M2, M2.one) == 0
    assert reduced_charpoly(M2, (1, 1, 0, 1)) == [1, 0, 1]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_reduced_trace_of_matrix_is_ordinary_trace(entries):
    A = matrix_algebra(2, QQ)
    assert reduced_trace(A, entries) == entries[0] + entries[3]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_quaternion_reduced_norm_is_determinant_of_left_matrix(x):
    # det(L_x) = nrd(x)^2 for a quaternion algebra
    d = oracles.rational_det(H.left_matrix(x))
    assert d == Fraction(quaternion_norm(H, x)) ** 2


def test_separability_idempotents():
    e = separability_idempotent(matrix_algebra(2, QQ))
    assert e is not None and e.verify()
    assert separability_idempotent(truncated_polynomial(2, QQ)) is None
    assert is_separable(split_commutative(2, F5))
    assert is_separable(H)


def test_tensor_and_opposite_of_quaternions():
    T = full_tensor(H, H)
    assert T.dim == 16 and len(center(T)) == 1
    assert degree(opposite(H)) == 2


def test_morphism_validation():
    A, B = matrix_algebra(2, QQ), matrix_algebra(4, QQ)
    f = block_diagonal_embedding(2, 2, QQ, source=A, target=B)
    assert f.is_injective() and not f.is_bijective()
    with pytest.raises(InputError):
        AlgebraMorphism(A, B, la.zeros(QQ, 16, 4))


def test_skolem_noether_on_seeded_pairs():
    for f, g in seeded_embedding_pairs(2, 2, F5, 5, seed=3):
        u = skolem_noether(f, g, seed=1)
        assert verify_conjugator(f, g, u)


def test_skolem_noether_fails_for_non_conjugate_maps():
    # x -> diag(x, x) and x -> x (x) I_2 are conjugate; a map into a non-simple target is not
    S = matrix_algebra(1, QQ)
    T = split_commutative(2, QQ)
    f = AlgebraMorphism.from_images(S, T, [T.one])
    assert verify_conjugator(f, f, T.one)
    blk = block_diagonal_embedding(2, 2, QQ)
    kro = kronecker_embedding(2, 2, QQ)
    assert len(intertwiners(blk, kro)) == 4


def test_double_centralizer_for_block_embedding():
    rep = double_centralizer_check(matrix_algebra(4, F5), block_diagonal_embedding(2, 2, F5).image())
    assert rep.holds and rep.centralizer_dim == 4 and rep.double_centralizer_dim == 4


def test_idempotent_family_checks_traces():
    A = matrix_algebra(3, QQ)
    e1 = matrix_unit(3, 0, 0)
    e2 = A.add(matrix_unit(3, 1, 1), matrix_unit(3, 2, 2))
    fam = IdempotentFamily(A, [e1, e2], [1, 2])
    assert fam.traces() == [1, 2]
    with pytest.raises(InputError):
        IdempotentFamily(A, [e1, e2], [2, 1])
    with pytest.raises(InputError):
        IdempotentFamily(A, [e1, e1], [1, 1])


def test_corner_of_matrix_algebra():
    A = matrix_algebra(3, QQ)
    e = A.add(matrix_unit(3, 0, 0), matrix_unit(3, 1, 1))
    C, basis = corner(A, e)
    assert C.dim == 4 and degree(C) == 2


def test_named_algebras_from_json():
    assert algebra_from_json({"name": "matrix", "n": 2, "field": {"p": 5}}).dim == 4
    assert algebra_from_json({"name": "quaternion", "a": -1, "b": 3}).dim == 4
    A = algebra_from_json({"field": "Q", "dim": 1, "constants": [[[1]]], "unit": [1]})
    assert A.dim == 1 and field_algebra(QQ).dim == 1
    with pytest.raises(InputError):
        algebra_from_json({"name": "octonion"})
    with pytest.raises(InputError):
        algebra_from_json({"field": "Q", "dim": 1})


def test_retry_error_is_a_precondition_error():
    assert issubclass(RetryError, PreconditionError)
