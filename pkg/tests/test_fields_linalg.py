from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from azurep import linalg as la
from azurep import modp
from azurep.errors import InputError, PreconditionError
from azurep.fields import GF, QQ, field_from_json

import numpy as np
import oracles


def test_rationals_reject_floats_and_bools():
    with pytest.raises(InputError):
        QQ(0.5)
    with pytest.raises(InputError):
        QQ(True)
    assert QQ("3/6") == Fraction(1, 2)


def test_prime_field_arithmetic():
    F = GF(7)
    assert F(10) == F(3)
    assert F(F.inv(F(3)) * F(3)) == F.one
    with pytest.raises(InputError):
        GF(8)


def test_field_from_json_forms():
    assert field_from_json("Q") is QQ or field_from_json("Q") == QQ
    assert field_from_json({"p": 5}) == GF(5)
    assert field_from_json(5) == GF(5)


def test_rref_nullspace_solve_small():
    F = QQ
    M = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert la.rank(F, M, 3) == 2
    ns = la.nullspace(F, M, 3)
    assert len(ns) == 1
    assert la.mat_vec(F, M, ns[0]) == (0, 0, 0) or list(la.mat_vec(F, M, ns[0])) == [0, 0, 0]
    assert la.solve(F, M, [1, 2, 0], 3) is not None
    assert la.solve(F, M, [1, 0, 0], 3) is None


def test_inverse_of_singular_matrix_raises():
    with pytest.raises(PreconditionError):
        la.inverse(QQ, [[1, 2], [2, 4]])


small_mats = st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(small_mats)
def test_rank_nullity(M):
    F = QQ
    r = la.rank(F, M, 3)
    assert r + len(la.nullspace(F, M, 3)) == 3


@settings(max_examples=60, deadline=None)
@given(small_mats, st.sampled_from([2, 3, 7]))
def test_span_coordinates_reconstruct(M, p):
    F = GF(p)
    span = la.Span(F, M, 3)
    for v in M:
        c = span.coordinates(v)
        assert c is not None
        rebuilt = [F(sum(ci * b[k] for ci, b in zip(c, span.basis))) for k in range(3)]
        assert rebuilt == [F(x) for x in v]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9))
def test_inverse_matches_determinant(entries):
    M = [entries[0:3], entries[3:6], entries[6:9]]
    d = oracles.rational_det(M)
    assert la.is_invertible(QQ, M) == (d != 0)
    if d != 0:
        assert la.matmul(QQ, M, la.inverse(QQ, M)) == la.identity(QQ, 3)


def test_incremental_span_grows_only_on_new_vectors():
    S = la.IncrementalSpan(QQ, 3)
    assert S.add([1, 0, 0])
    assert not S.add([2, 0, 0])
    assert S.add([1, 1, 0])
    assert [0, 3, 0] in S
    assert S.dim == 2


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_general_linear_group_against_naive_count(n, q):
    G, Ginv = modp.general_linear_group(n, q)
    assert len(G) == modp.gl_order(n, q) == len(oracles.gl(n, q))
    eye = np.eye(n, dtype=np.int64)
    assert all((modp.matmul(g, h, q) == eye).all() for g, h in zip(G, Ginv))
