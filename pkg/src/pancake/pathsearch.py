"""Search over efficient flips, exact sorting distances and the pancake-graph diameter."""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from pancake.errors import SIsIdentity, TooLarge
from pancake.perm_core import (
    FlipPath,
    Sequence,
    SequenceLike,
    _as_sequence,
    _as_tuple,
    _db,
    _efficient,
    _flip,
    _is_identity,
)

__all__ = [
    "SearchStats",
    "FunnelReport",
    "DistanceResult",
    "OrderHint",
    "decide_efficiently_sortable",
    "decide_with_stats",
    "efficient_path_between",
    "verify_funnel",
    "exact_distance",
    "diameter",
    "distance_table",
    "rank",
    "unrank",
    "greedy_sort",
    "default_node_budget",
    "EXACT_DISTANCE_MAX_N",
    "DIAMETER_MAX_N",
]

EXACT_DISTANCE_MAX_N = 12
DIAMETER_MAX_N = 10
DEFAULT_NODE_BUDGET = 10**7

# (state, ascending efficient flip lengths) -> preferred order
OrderHint = Callable[[tuple, list], Iterable[int]]


def default_node_budget() -> int:
    env = os.environ.get("PANCAKE_NODE_BUDGET")
    if env:
        value = int(env)
        if value <= 0:
            raise ValueError("PANCAKE_NODE_BUDGET must be positive")
        return value
    return DEFAULT_NODE_BUDGET


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    max_depth: int = 0
    elapsed: float = 0.0


@dataclass
class FunnelReport:
    holds: bool
    unreachable_targets: list[Sequence] = field(default_factory=list)
    leaking_path: Optional[FlipPath] = None
    states_explored: int = 0


@dataclass(frozen=True)
class DistanceResult:
    distance: int
    witness: FlipPath


def _dfs_efficient(
    start: tuple,
    is_goal: Callable[[tuple], bool],
    absorbing: Callable[[tuple], bool],
    stats: SearchStats,
    budget: int,
    order_hint: Optional[OrderHint] = None,
    min_db: int = 0,
) -> Optional[list[int]]:
    """Depth-first search along efficient flips.

    Returns the flip list of the first path reaching a goal state.  States
    for which ``absorbing`` holds are never expanded.  States whose breakpoint
    count drops to ``min_db`` without being a goal are dead ends.  Failed
    states are memoized; the efficient-flip graph is acyclic so this is exact.
    """
    if is_goal(start):
        return []
    d0 = _db(start)
    if d0 <= min_db or absorbing(start):
        return None
    dead: set[tuple] = set()
    flips: list[int] = []

    def children(t: tuple) -> Iterable[int]:
        moves = _efficient(t)
        if order_hint is not None and len(moves) > 1:
            return iter(list(order_hint(t, moves)))
        return iter(moves)

    stack = [(start, children(start))]
    stats.nodes_expanded += 1
    while stack:
        state, it = stack[-1]
        r = next(it, None)
        if r is None:
            dead.add(state)
            stack.pop()
            if flips:
                flips.pop()
            continue
        child = _flip(state, r)
        if is_goal(child):
            flips.append(r)
            stats.max_depth = max(stats.max_depth, len(flips))
            return flips
        depth = len(flips) + 1
        if child in dead or absorbing(child) or d0 - depth <= min_db:
            continue
        stats.nodes_expanded += 1
        if stats.nodes_expanded > budget:
            raise TooLarge(f"node budget {budget} exhausted")
        flips.append(r)
        stats.max_depth = max(stats.max_depth, depth)
        if depth > d0:
            raise AssertionError("efficient path deeper than the breakpoint count")
        stack.append((child, children(child)))
    return None


def _never(_t: tuple) -> bool:
    return False


def decide_with_stats(
    S: SequenceLike,
    order_hint: Optional[OrderHint] = None,
    node_budget: Optional[int] = None,
) -> tuple[Optional[FlipPath], SearchStats]:
    seq = _as_sequence(S)
    stats = SearchStats()
    budget = node_budget or default_node_budget()
    started = time.perf_counter()
    flips = _dfs_efficient(seq.elems, _is_identity, _never, stats, budget, order_hint)
    stats.elapsed = time.perf_counter() - started
    return (None if flips is None else FlipPath(seq, flips)), stats


def decide_efficiently_sortable(
    S: SequenceLike,
    order_hint: Optional[OrderHint] = None,
    node_budget: Optional[int] = None,
) -> Optional[FlipPath]:
    """An efficient path from ``S`` to the identity, or None when none exists.

    Branches are tried in ascending flip length unless ``order_hint`` reorders
    them. The returned path has exactly ``db(S)`` flips.
    """
    return decide_with_stats(S, order_hint, node_budget)[0]


def efficient_path_between(
    S: SequenceLike,
    T: SequenceLike,
    node_budget: Optional[int] = None,
    stats: Optional[SearchStats] = None,
) -> Optional[FlipPath]:
    """An efficient path from ``S`` to ``T`` if one exists."""
    src = _as_tuple(S)
    dst = _as_tuple(T)
    stats = stats if stats is not None else SearchStats()
    if len(src) != len(dst):
        return None
    target_db = _db(dst)
    if src == dst:
        return FlipPath(_as_sequence(S), ())
    flips = _dfs_efficient(
        src,
        dst.__eq__,
        _never,
        stats,
        node_budget or default_node_budget(),
        min_db=target_db,
    )
    return None if flips is None else FlipPath(_as_sequence(S), flips)


def verify_funnel(
    S: SequenceLike,
    targets: Iterable[SequenceLike],
    node_budget: Optional[int] = None,
) -> FunnelReport:
    """Check ``S ⟹ targets`` by exhaustive enumeration of efficient paths.

    Every target must be reachable by an efficient path, and no efficient
    path may reach the identity without passing through a target.
    """
    seq = _as_sequence(S)
    if _is_identity(seq.elems):
        raise SIsIdentity("funnel source must differ from the identity")
    target_seqs = [_as_sequence(T) for T in targets]
    target_set = {T.elems for T in target_seqs}
    if len(target_set) != len(target_seqs):
        raise ValueError("targets must be pairwise distinct")
    budget = node_budget or default_node_budget()
    stats = SearchStats()

    unreachable = [
        T for T in target_seqs if efficient_path_between(seq, T, budget, stats) is None
    ]
    # an identity target absorbs rather than leaks
    leak = _dfs_efficient(
        seq.elems,
        lambda t: t not in target_set and _is_identity(t),
        target_set.__contains__,
        stats,
        budget,
    )
    leaking_path = None if leak is None else FlipPath(seq, leak)
    return FunnelReport(
        holds=not unreachable and leaking_path is None,
        unreachable_targets=unreachable,
        leaking_path=leaking_path,
        states_explored=stats.nodes_expanded,
    )


# -- exact distances ----------------------------------------------------------


def exact_distance(
    S: SequenceLike,
    max_n: int = EXACT_DISTANCE_MAX_N,
    stats: Optional[SearchStats] = None,
) -> DistanceResult:
    """Minimum number of flips sorting ``S`` (IDA* with the breakpoint bound)."""
    seq = _as_sequence(S)
    stats = stats if stats is not None else SearchStats()
    started = time.perf_counter()
    n = seq.n
    if n > max_n:
        raise TooLarge(f"exact_distance guarded to n <= {max_n}, got {n}")
    start = seq.elems
    flips: list[int] = []

    def search(t: tuple, g: int, h: int, bound: int, last: int) -> int:
        f = g + h
        if f > bound:
            return f
        stats.nodes_expanded += 1
        if h == 0:
            return -1
        best = math.inf
        for r in range(2, n + 1):
            if r == last:
                continue
            child = _flip(t, r)
            # only adjacency r changes
            old = (abs(t[r - 1] - t[r]) != 1) if r < n else (t[n - 1] != n)
            new = (abs(t[0] - t[r]) != 1) if r < n else (t[0] != n)
            flips.append(r)
            res = search(child, g + 1, h - old + new, bound, r)
            if res == -1:
                return -1
            flips.pop()
            best = min(best, res)
        return best

    h0 = _db(start)
    bound = h0
    while True:
        res = search(start, 0, h0, bound, 0)
        if res == -1:
            stats.max_depth = len(flips)
            stats.elapsed = time.perf_counter() - started
            return DistanceResult(len(flips), FlipPath(seq, flips))
        bound = res


# -- ranking and BFS diameter ------------------------------------------------


def rank(perm: Iterable[int]) -> int:
    """Lexicographic rank (factorial number system) of a permutation of 1..n."""
    p = list(perm)
    n = len(p)
    out = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if p[j] < p[i])
        out += smaller * math.factorial(n - 1 - i)
    return out


def unrank(index: int, n: int) -> tuple[int, ...]:
    pool = list(range(1, n + 1))
    out = []
    for i in range(n - 1, -1, -1):
        digit, index = divmod(index, math.factorial(i))
        out.append(pool.pop(digit))
    return tuple(out)


def _rank_rows(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[1]
    ranks = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(n - 1):
        smaller = (rows[:, i + 1 :] < rows[:, i : i + 1]).sum(axis=1)
        ranks += smaller * math.factorial(n - 1 - i)
    return ranks


def distance_table(n: int, max_n: int = DIAMETER_MAX_N) -> np.ndarray:
    """Sorting distance of every permutation of size ``n``, indexed by rank.

    Breadth-first search from the identity; flips are involutions, so the
    BFS layer of a permutation equals its sorting distance.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > max_n:
        raise TooLarge(f"diameter guarded to n <= {max_n}, got {n}")
    dist = np.full(math.factorial(n), -1, dtype=np.int16)
    frontier = np.arange(1, n + 1, dtype=np.int8).reshape(1, n)
    dist[0] = 0
    layer = 0
    while frontier.shape[0]:
        layer += 1
        produced = []
        for r in range(2, n + 1):
            child = frontier.copy()
            child[:, :r] = frontier[:, r - 1 :: -1]
            produced.append(child)
        cand = np.concatenate(produced) if produced else frontier[:0]
        if not cand.shape[0]:
            break
        ranks = _rank_rows(cand)
        fresh = dist[ranks] < 0
        ranks, cand = ranks[fresh], cand[fresh]
        ranks, first = np.unique(ranks, return_index=True)
        dist[ranks] = layer
        frontier = cand[first]
    return dist


def diameter(n: int, max_n: int = DIAMETER_MAX_N) -> int:
    return int(distance_table(n, max_n).max())


# -- heuristic sorting --------------------------------------------------------


def _place_largest(t: tuple) -> list[int]:
    """Classic placement: at most 2n - 3 flips."""
    flips = []
    for m in range(len(t), 1, -1):
        if t[m - 1] == m:
            continue
        pos = t.index(m) + 1
        if pos > 1:
            t = _flip(t, pos)
            flips.append(pos)
        t = _flip(t, m)
        flips.append(m)
    return flips


def greedy_sort(S: SequenceLike) -> FlipPath:
    """Sort with efficient flips while they exist, otherwise move the largest
    misplaced element to the head and then down to its slot.

    Among efficient flips the shortest one not leading into a deadlock wins.
    Falls back to plain placement if the mixed run would exceed 2n flips.
    """
    seq = _as_sequence(S)
    t = seq.elems
    n = len(t)
    flips: list[int] = []
    while not _is_identity(t) and len(flips) <= 2 * n:
        moves = _efficient(t)
        if moves:
            live = [r for r in moves if _efficient(_flip(t, r)) or _is_identity(_flip(t, r))]
            r = (live or moves)[0]
            t = _flip(t, r)
            flips.append(r)
            continue
        m = max(x for i, x in enumerate(t, 1) if x != i)
        pos = t.index(m) + 1
        if pos > 1:
            t = _flip(t, pos)
            flips.append(pos)
        t = _flip(t, m)
        flips.append(m)
    if len(flips) > 2 * n or not _is_identity(t):
        flips = _place_largest(seq.elems)
    return FlipPath(seq, flips)
