import itertools
import math
from functools import lru_cache

import pytest
from hypothesis import assume, given, settings

from conftest import all_perms, perms
from pancake.errors import SIsIdentity, TooLarge
from pancake.pathsearch import (
    decide_efficiently_sortable,
    decide_with_stats,
    diameter,
    distance_table,
    efficient_path_between,
    exact_distance,
    greedy_sort,
    rank,
    unrank,
    verify_funnel,
)
from pancake.perm_core import db, efficient_flips, flip, identity, is_deadlock


@lru_cache(maxsize=None)
def naive_sortable(S):
    """Try every flip length and keep the ones lowering db."""
    if list(S) == sorted(S):
        return True
    d = db(S)
    return any(
        naive_sortable(tuple(flip(S, r))) for r in range(2, len(S) + 1) if db(flip(S, r)) == d - 1
    )


def test_decide_examples():
    path = decide_efficiently_sortable([5, 2, 3, 1, 4])
    assert len(path) == 4 and path.sorts and path.efficient
    assert path.flips == (5, 4, 2, 3)
    assert decide_efficiently_sortable([5, 2, 3, 4, 1]) is None
    assert decide_efficiently_sortable(identity(5)).flips == ()


def test_order_hint_reverses_branches():
    path = decide_efficiently_sortable([5, 2, 3, 1, 4], order_hint=lambda t, m: reversed(m))
    assert path.sorts and path.efficient and len(path) == 4


@pytest.mark.parametrize("n", range(1, 7))
def test_decider_matches_naive(n):
    for S in all_perms(n):
        path = decide_efficiently_sortable(S)
        assert (path is not None) == naive_sortable(S)
        if path is not None:
            assert path.sorts and path.efficient and len(path) == db(S)


@given(perms(30))
def test_decider_soundness(S):
    path, stats = decide_with_stats(S)
    assert stats.nodes_expanded >= 1 or db(S) == 0
    if path is not None:
        assert path.sorts and path.efficient and len(path) == db(S)


def test_budget_exhaustion():
    with pytest.raises(TooLarge):
        decide_efficiently_sortable([2, 4, 6, 8, 1, 3, 5, 7, 10, 9], node_budget=1)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("PANCAKE_NODE_BUDGET", "1")
    with pytest.raises(TooLarge):
        decide_efficiently_sortable([2, 4, 6, 8, 1, 3, 5, 7, 10, 9])


def test_funnel_examples():
    S = [10, 7, 1, 2, 9, 8, 5, 6, 4, 3, 11, 12, 13]
    assert verify_funnel(S, [[7, 1, 2, 3, 4, 6, 5, 8, 9, 10, 11, 12, 13]]).holds
    assert verify_funnel([1, 3, 2, 5, 4], []).holds
    rep = verify_funnel([5, 2, 3, 1, 4], [])
    assert not rep.holds and len(rep.leaking_path) == 4 and rep.leaking_path.sorts
    with pytest.raises(SIsIdentity):
        verify_funnel(identity(3), [])


def test_funnel_unreachable_target():
    rep = verify_funnel([5, 2, 3, 1, 4], [[2, 1, 3, 4, 5]])
    assert not rep.holds
    assert [T.tolist() for T in rep.unreachable_targets] == [[2, 1, 3, 4, 5]]


def test_funnel_identity_target():
    assert verify_funnel([5, 2, 3, 1, 4], [identity(5)]).holds


@pytest.mark.parametrize("n", range(2, 6))
def test_funnel_matches_sortability(n):
    for S in itertools.islice(all_perms(n), 1, None):
        sortable = decide_efficiently_sortable(S) is not None
        assert verify_funnel(S, [identity(n)]).holds == sortable
        assert verify_funnel(S, []).holds == (not sortable)


def _children(S):
    return {tuple(flip(S, r)) for r in efficient_flips(S)}


@settings(max_examples=60)
@given(perms(9, min_n=3))
def test_funnel_composition(S):
    S = tuple(S)
    kids = _children(S)
    assume(kids and not any(list(k) == sorted(k) for k in kids))
    assert verify_funnel(S, kids).holds
    union = set()
    for kid in kids:
        grand = _children(kid) or {kid}
        if grand == {kid}:
            continue  # a deadlock child funnels into nothing
        assert verify_funnel(kid, grand).holds
        union |= grand
    assert verify_funnel(S, union).holds


def test_efficient_path_between():
    path = efficient_path_between([5, 2, 3, 1, 4], [4, 1, 3, 2, 5])
    assert path.flips == (5,)
    assert efficient_path_between([5, 2, 3, 1, 4], [5, 2, 3, 1, 4]).flips == ()
    assert efficient_path_between([5, 2, 3, 1, 4], [2, 1, 3, 4, 5]) is None


def test_exact_distance_examples():
    assert exact_distance(identity(4)).distance == 0
    assert exact_distance([5, 2, 3, 1, 4]).distance == 4
    res = exact_distance([5, 2, 3, 4, 1])
    assert res.distance > db([5, 2, 3, 4, 1])
    assert res.witness.sorts and len(res.witness) == res.distance
    with pytest.raises(TooLarge):
        exact_distance(identity(13))


@given(perms(8))
@settings(max_examples=40)
def test_exact_distance_lower_bound(S):
    d = exact_distance(S).distance
    assert d >= db(S)
    assert (d == db(S)) == (decide_efficiently_sortable(S) is not None)


@given(perms(9))
def test_rank_roundtrip(S):
    assert unrank(rank(S), len(S)) == tuple(S)


def test_rank_is_lexicographic():
    assert [rank(p) for p in all_perms(4)] == list(range(24))


def test_diameter_small():
    assert [diameter(n) for n in range(1, 8)] == [0, 1, 3, 4, 5, 7, 8]
    with pytest.raises(TooLarge):
        diameter(11)


def test_distance_table_matches_exact():
    table = distance_table(5)
    for S in all_perms(5):
        assert table[rank(S)] == exact_distance(S).distance
    assert len(table) == math.factorial(5)


@pytest.mark.parametrize("n", range(1, 8))
def test_greedy_within_2n(n):
    for S in all_perms(n):
        path = greedy_sort(S)
        assert path.sorts and len(path) <= 2 * n


def test_greedy_examples():
    assert greedy_sort([2, 1]).flips == (2,)
    assert len(greedy_sort([5, 2, 3, 1, 4])) == 4
    assert greedy_sort(identity(3)).flips == ()
    assert is_deadlock([1, 3, 2, 5, 4]) and greedy_sort([1, 3, 2, 5, 4]).sorts
