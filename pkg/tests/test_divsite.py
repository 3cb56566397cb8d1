import math
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from azurep.divsite import (
    CofactorSetPredicate,
    FragmentBounds,
    SieveOnObject,
    TopologySpec,
    covers,
    intersect,
    jk_matrix_cover,
    maximal_sieve,
    member,
    multiply,
    normalize,
    pullback,
    replay_counterexample,
    separating_witness,
    verify_axioms,
)
from azurep.errors import InputError

K2, K23 = TopologySpec.sigma([2]), TopologySpec.sigma([2, 3])
ALL = [TopologySpec.minus(), K2, K23, TopologySpec.sigma([5]), TopologySpec.plus()]


def test_sieve_invariants_are_enforced():
    with pytest.raises(InputError):
        SieveOnObject(2, (3,))
    with pytest.raises(InputError):
        SieveOnObject(1, (2, 4))
    assert normalize(1, [4, 2, 6]).generators == (2,)


def test_membership_and_pullback():
    s = SieveOnObject(1, (4, 6))
    assert member(s, 12) and member(s, 8) and not member(s, 9)
    assert pullback(s, 2).generators == (4, 6)
    assert pullback(s, 3).generators == (6,)
    assert pullback(s, 4).is_maximal
    with pytest.raises(InputError):
        member(SieveOnObject(2, (4,)), 3)


def test_multiply_and_intersect():
    s = SieveOnObject(1, (2, 3))
    assert multiply(s, 5) == SieveOnObject(5, (10, 15))
    assert intersect(s, SieveOnObject(1, (4,))).generators == (4,)
    assert intersect(s, SieveOnObject(1, (5,))).generators == (10, 15)


def test_sigma_covering_examples():
    assert K23.covers(SieveOnObject(1, (12,)))
    assert not K2.covers(SieveOnObject(1, (12,)))
    assert TopologySpec.plus().covers(SieveOnObject(1, (35,)))
    assert not TopologySpec.plus().covers(SieveOnObject(1, ()))
    assert not TopologySpec.minus().covers(SieveOnObject(1, (2,)))
    assert TopologySpec.minus().covers(maximal_sieve(7))
    assert covers(K2, SieveOnObject(3, (6, 9)))


def test_topology_json_round_trip():
    for K in ALL:
        assert TopologySpec.from_json(K.to_json()) == K
    with pytest.raises(InputError):
        TopologySpec.sigma([4])
    with pytest.raises(InputError):
        TopologySpec.from_json({"kind": "weird"})


def test_fragment_bounds_json():
    b = FragmentBounds(5, 20, 2, 3)
    assert FragmentBounds.from_json(b.to_json()) == b


def test_separating_witness_pairs():
    sets = [(), (2,), (3,), (2, 3), (5,)]
    for a, b in combinations(sets, 2):
        w = separating_witness(a, b)
        assert w is not None and w.base == 1
        assert TopologySpec.sigma(a).covers(w) != TopologySpec.sigma(b).covers(w)
    assert separating_witness((2, 3), (3, 2)) is None


def test_jk_matrix_cover_by_degrees():
    assert jk_matrix_cover(K2, 2, [4, 8])
    assert not jk_matrix_cover(K2, 2, [6])
    assert jk_matrix_cover(TopologySpec.plus(), 2, [6])
    with pytest.raises(InputError):
        jk_matrix_cover(K2, 2, [3])


sieves = st.builds(
    lambda base, cofs: normalize(base, [base * c for c in cofs]),
    st.integers(1, 12), st.lists(st.integers(1, 30), max_size=4))


@settings(max_examples=150, deadline=None)
@given(sieves, st.integers(1, 8), st.integers(1, 8))
def test_pullback_composes(s, a, b):
    # pulling back along base*a then base*a*b equals pulling back along base*a*b
    n1, n2 = s.base * a, s.base * a * b
    assert pullback(pullback(s, n1), n2) == pullback(s, n2)


@settings(max_examples=150, deadline=None)
@given(sieves, st.integers(1, 8))
def test_pullback_membership(s, k):
    n = s.base * k
    t = pullback(s, n)
    for m in range(n, 8 * n + 1, n):
        assert member(t, m) == member(s, m)


@settings(max_examples=150, deadline=None)
@given(sieves, st.integers(1, 8), st.sampled_from(ALL))
def test_topologies_are_stable_under_pullback(s, k, K):
    if K.covers(s):
        assert K.covers(pullback(s, s.base * k))


# --- naive oracle for the axiom checker on a small fragment ---------------


def _naive_sieves(base, vmax, cmax):
    mults = [m for m in range(base, vmax + 1, base)]
    out = set()
    for r in range(cmax + 1):
        for combo in combinations(mults, r):
            out.add(normalize(base, combo))
    return out


def _naive_axioms(K, bmax=4, vmax=16, cmax=2, kmax=3):
    for base in range(1, bmax + 1):
        if not K.covers(maximal_sieve(base)):
            return False
        sv = _naive_sieves(base, vmax, cmax)
        for s in sv:
            if K.covers(s) and any(not K.covers(pullback(s, base * k)) for k in range(1, kmax + 1)):
                return False
        for S in sv:
            if not K.covers(S):
                continue
            for R in sv:
                if all(K.covers(pullback(R, math.lcm(g, base))) for g in S.generators) and not K.covers(R):
                    return False
    return True


SMALL = FragmentBounds(4, 16, 2, 3)


@pytest.mark.parametrize("K", ALL, ids=str)
def test_verify_axioms_agrees_with_naive_checker(K):
    assert verify_axioms(K, SMALL).passed == _naive_axioms(K) is True


def test_broken_predicate_is_caught_by_both_checkers():
    bad = CofactorSetPredicate(frozenset({1, 2, 3}))
    assert _naive_axioms(bad) is False
    rep = verify_axioms(bad, SMALL)
    assert not rep.passed
    cx = rep.outcome("transitivity").counterexample
    assert cx["R"] == {"base": 1, "generators": [4]} and cx["S"] == {"base": 1, "generators": [2]}
    assert replay_counterexample(bad, cx)
    assert rep.outcome("maximal").passed and rep.outcome("stability").passed
