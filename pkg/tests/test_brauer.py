import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint

from azurep.errors import PreconditionError
from azurep.exactalg.algebra import full_tensor, matrix_algebra, quaternion, truncated_polynomial
from azurep.exactalg.brauer import (
    hilbert_symbol,
    index_of,
    minimal_polynomial,
    primitive_idempotent,
    quaternion_is_split,
)
from azurep.fields import GF, QQ

F5 = GF(5)


@pytest.mark.parametrize(
    "A,index",
    [
        (quaternion(-1, -1, QQ), 2),
        (quaternion(1, 1, QQ), 1),
        (quaternion(-1, 2, QQ), 1),
        (quaternion(-1, 3, QQ), 2),
        (matrix_algebra(2, QQ), 1),
        (matrix_algebra(3, F5), 1),
        (quaternion(2, 3, F5), 1),
    ],
    ids=["H", "(1,1)", "(-1,2)", "(-1,3)", "M2Q", "M3F5", "(2,3)F5"],
)
def test_index_table(A, index):
    r = index_of(A, seed=0)
    assert r.index == index
    # a simple right module has dimension deg * index over the field
    assert len(r.simple_ideal) == r.degree * r.index


def test_index_of_quaternions_tensor_matrices():
    r = index_of(full_tensor(quaternion(-1, -1, QQ), matrix_algebra(2, QQ)))
    assert (r.index, r.degree, len(r.simple_ideal)) == (2, 4, 8)


def test_hilbert_symbols():
    assert hilbert_symbol(-1, -1, 0) == -1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, 3) == 1
    assert hilbert_symbol(-1, 3, 3) == -1
    assert hilbert_symbol(2, 3, 3) == -1
    assert hilbert_symbol(5, 7, 2) == 1
    assert quaternion_is_split(1, 7)
    assert not quaternion_is_split(-1, -1)


def _norm_represents_one(a, b, p):
    # (a, b)_p = 1 iff z^2 = a x^2 + b y^2 has a nontrivial solution; test mod p for odd p not dividing ab
    return any((a * x * x + b * y * y - 1) % p == 0 for x in range(p) for y in range(p))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(1, 50), st.integers(1, 50))
def test_hilbert_symbol_for_units_at_odd_primes_is_one(p, a, b):
    if a % p == 0 or b % p == 0:
        return
    assert hilbert_symbol(a, b, p) == 1
    assert _norm_represents_one(a, b, p)


@settings(max_examples=60, deadline=None)
@given(st.integers(-30, 30).filter(bool), st.integers(-30, 30).filter(bool), st.sampled_from([0, 2, 3, 5, 7]))
def test_hilbert_symbol_is_symmetric(a, b, p):
    assert hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p)


@settings(max_examples=30, deadline=None)
@given(st.integers(-20, 20).filter(bool), st.integers(-20, 20).filter(bool))
def test_product_formula(a, b):
    places = {0, 2} | set(factorint(abs(a))) | set(factorint(abs(b)))
    prod = 1
    for p in places:
        prod *= hilbert_symbol(a, b, p)
    assert prod == 1


def test_minimal_polynomial():
    A = matrix_algebra(2, QQ)
    assert minimal_polynomial(A, A.one) == [1, -1]
    assert minimal_polynomial(A, (0, 1, 0, 0)) == [1, 0, 0]
    assert minimal_polynomial(truncated_polynomial(3, QQ), (0, 1, 0)) == [1, 0, 0, 0]


def test_primitive_idempotent_of_matrix_algebra_has_rank_one():
    e, C, lift = primitive_idempotent(matrix_algebra(3, F5), seed=2)
    assert C.dim == 1 and len(lift) == 1


def test_index_needs_central_simple_input():
    with pytest.raises(PreconditionError):
        index_of(truncated_polynomial(2, QQ))
