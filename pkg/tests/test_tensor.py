import pytest

from azurep.errors import InputError, PreconditionError
from azurep.exactalg.algebra import (
    AlgebraMorphism,
    block_diagonal_embedding,
    field_algebra,
    identity_morphism,
    kronecker_embedding,
    matrix_algebra,
    quaternion,
    split_commutative,
    unit_embedding,
)
from azurep.exactalg.structure import center, degree
from azurep.exactalg.tensor import amitsur_exactness, relative_tensor
from azurep.fields import GF, QQ

F5 = GF(5)


def test_tensor_over_the_field_is_full_tensor():
    u = unit_embedding(matrix_algebra(2, QQ))
    T = relative_tensor(u, u)
    assert T.dim == 16 and T.ambient_dim == 16
    assert len(center(T.algebra)) == 1 and degree(T.algebra) == 4


def test_tensor_over_itself_collapses():
    i = identity_morphism(matrix_algebra(2, QQ))
    T = relative_tensor(i, i)
    assert T.dim == 4


def test_tensor_with_block_embedding_obeys_dimension_law():
    f1 = identity_morphism(matrix_algebra(2, F5))
    f2 = block_diagonal_embedding(2, 2, F5)
    T = relative_tensor(f1, f2)
    assert T.dim == 4 * 16 // 4


@pytest.mark.parametrize("n,k", [(2, 2), (1, 3), (2, 1)])
def test_dimension_law_over_prime_field(n, k):
    f = kronecker_embedding(n, k, F5)
    T = relative_tensor(f, f)
    assert T.dim == f.target.dim ** 2 // f.source.dim


def test_relations_vanish_in_the_quotient():
    f = block_diagonal_embedding(2, 2, F5)
    T = relative_tensor(f, f)
    A, B = f.source, f.target
    for k in range(A.dim):
        a = A.basis(k)
        for x in (B.one, B.basis(3)):
            lhs = T.pure(B.mul(x, f(a)), B.one)
            rhs = T.pure(x, f(a))
            assert lhs == rhs


def test_mixed_sources_are_rejected():
    f = unit_embedding(matrix_algebra(2, QQ))
    g = unit_embedding(matrix_algebra(2, F5))
    with pytest.raises(InputError):
        relative_tensor(f, g)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("F", [QQ, GF(2), F5], ids=["Q", "F2", "F5"])
def test_amitsur_for_unit_embeddings(n, F):
    r = amitsur_exactness(unit_embedding(matrix_algebra(n, F)))
    assert r.exact and r.retraction
    assert r.equalizer_dim == r.image_dim == 1
    assert r.tensor_dim == n ** 4


def test_amitsur_identity_and_block():
    r = amitsur_exactness(identity_morphism(matrix_algebra(2, QQ)))
    assert r.exact and r.tensor_dim == 4 and r.equalizer_dim == 4
    r = amitsur_exactness(block_diagonal_embedding(2, 2, F5))
    assert r.exact and r.equalizer_dim == 4 and r.tensor_dim == 16 * 16 // 4


def test_amitsur_for_quaternions():
    r = amitsur_exactness(unit_embedding(quaternion(-1, -1, QQ)))
    assert r.exact and r.equalizer_dim == 1


def test_amitsur_rejects_non_injective():
    # first projection Q x Q -> Q
    proj = AlgebraMorphism(split_commutative(2, QQ), field_algebra(QQ), [[QQ(1), QQ(0)]])
    with pytest.raises(PreconditionError):
        amitsur_exactness(proj)
