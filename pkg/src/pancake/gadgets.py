"""Level-1 (dock, lock, hook, fork) and level-2 (literals, variable, clause) gadgets.

Every block is a plain tuple of element values.  Constructors assert that
the elements of each gadget cover exactly its documented value range.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from pancake.errors import BadOffsets, DuplicateIndices, OverlappingSets
from pancake.perm_core import ident, rev_ident, shift

__all__ = [
    "Dock",
    "Lock",
    "Hook",
    "Fork",
    "Literals",
    "Variable",
    "ClauseGadget",
    "dock",
    "lock",
    "hook",
    "fork",
    "literals",
    "lambda_block",
    "variable",
    "clause",
]

Block = tuple[int, ...]


def _blk(p: int, values: Iterable[int]) -> Block:
    return tuple(shift(p, values))


def _assert_covers(parts: Iterable[Iterable[int]], lo: int, hi: int, what: str) -> None:
    got = Counter(x for part in parts for x in part)
    want = Counter(range(lo, hi + 1))
    if got != want:
        raise AssertionError(f"{what}: elements do not cover [{lo}, {hi}] exactly")


@dataclass(frozen=True)
class Dock:
    p: int
    q: int
    D: Block


def dock(p: int, q: int) -> Dock:
    """Dock storing ``rev I_{p+1}^q`` away from the head."""
    if p >= q:
        raise BadOffsets(f"dock needs p < q, got p={p}, q={q}")
    return Dock(p, q, (p - 1, p, q + 1, q + 2))


@dataclass(frozen=True)
class Lock:
    p: int
    key: int
    test: int
    L: Block
    L_open: Block


def lock(p: int) -> Lock:
    lk = Lock(
        p,
        key=p + 10,
        test=p + 7,
        L=_blk(p, (1, 2, 9, 8, 5, 6, 4, 3, 11, 12)),
        L_open=_blk(p, (1, 2, 3, 4, 6, 5, 8, 9, 10, 11, 12)),
    )
    _assert_covers([lk.L, (lk.key, lk.test)], p + 1, p + 12, "lock")
    _assert_covers([lk.L_open, (lk.test,)], p + 1, p + 12, "open lock")
    return lk


@dataclass(frozen=True)
class Hook:
    """``G1``/``H1`` are the primed forms, ``G2``/``H2`` the double-primed ones."""

    p: int
    take: int
    put: int
    G: Block
    H: Block
    G1: Block
    H1: Block
    G2: Block
    H2: Block


def hook(p: int) -> Hook:
    hk = Hook(
        p,
        take=p + 10,
        put=p + 7,
        G=_blk(p, (3, 4)),
        H=_blk(p, (12, 11, 6, 5, 9, 8, 2, 1)),
        G1=_blk(p, (12, 11, 6, 5, 4, 3)),
        H1=_blk(p, (10, 9, 8, 2, 1)),
        G2=_blk(p, (3, 4, 5, 6, 7)),
        H2=_blk(p, (12, 11, 10, 9, 8, 2, 1)),
    )
    _assert_covers([hk.G, hk.H, (hk.take, hk.put)], p + 1, p + 12, "hook")
    _assert_covers([hk.G1, hk.H1, (hk.put,)], p + 1, p + 12, "hook primed")
    _assert_covers([hk.G2, hk.H2], p + 1, p + 12, "hook double-primed")
    return hk


@dataclass(frozen=True)
class Fork:
    p: int
    E: Block
    F: Block
    F1: Block
    F2: Block


def fork(p: int) -> Fork:
    fk = Fork(
        p,
        E=_blk(p, (11, 8, 7, 3)),
        F=_blk(p, (10, 9, 6, 12, 13, 4, 5, 15, 14, 2, 1)),
        F1=_blk(p, (10, 9, 6, 7, 8, 11, 12, 13, 14, 15, 5, 4, 3, 2, 1)),
        F2=_blk(p, (3, 7, 8, 11, 10, 9, 6, 12, 13, 4, 5, 15, 14, 2, 1)),
    )
    for parts in ([fk.E, fk.F], [fk.F1], [fk.F2]):
        _assert_covers(parts, p + 1, p + 15, "fork")
    return fk


# -- level 2 ------------------------------------------------------------------


@dataclass(frozen=True)
class Literals:
    """All locks of a formula, lock ``i`` (1-based) sitting at ``p + 12(i-1)``."""

    p: int
    m: int
    locks: tuple[Lock, ...]

    def key(self, i: int) -> int:
        return self.locks[i - 1].key

    def test(self, i: int) -> int:
        return self.locks[i - 1].test

    @property
    def keys(self) -> tuple[int, ...]:
        return tuple(lk.key for lk in self.locks)

    @property
    def tests(self) -> tuple[int, ...]:
        return tuple(lk.test for lk in self.locks)

    def block(self, opened: Iterable[int] = (), tested: Iterable[int] = ()) -> Block:
        return lambda_block(self, opened, tested)


def literals(p: int, m: int) -> Literals:
    if m < 0:
        raise ValueError("m must be non-negative")
    return Literals(p, m, tuple(lock(p + 12 * (i - 1)) for i in range(1, m + 1)))


def lambda_block(lits: Literals, opened: Iterable[int] = (), tested: Iterable[int] = ()) -> Block:
    """Concatenated locks: closed by default, open for ``opened``, sorted for ``tested``."""
    O, I = set(opened), set(tested)
    if O & I:
        raise OverlappingSets(f"open and tested sets overlap: {sorted(O & I)}")
    bad = [i for i in O | I if not 1 <= i <= lits.m]
    if bad:
        raise OverlappingSets(f"lock indices outside 1..{lits.m}: {sorted(bad)}")
    out: list[int] = []
    for i, lk in enumerate(lits.locks, 1):
        if i in I:
            out += ident(lits.p + 12 * i - 11, lits.p + 12 * i)
        elif i in O:
            out += lk.L_open
        else:
            out += lk.L
    return tuple(out)


@dataclass(frozen=True)
class Variable:
    P: tuple[int, ...]
    N: tuple[int, ...]
    p: int
    nu: int
    V: Block
    V1: Block
    V2: Block
    D: Block
    hook: Hook
    fork: Fork


def variable(P: Iterable[int], N: Iterable[int], p: int, lits: Literals) -> Variable:
    """Variable gadget whose key runs open the locks of ``P`` (true) or ``N`` (false).

    Keys are taken from ``lits``; index sets are laid out in ascending order.
    """
    Ps, Ns = tuple(sorted(set(P))), tuple(sorted(set(N)))
    if set(Ps) & set(Ns):
        raise OverlappingSets(f"P and N overlap: {sorted(set(Ps) & set(Ns))}")
    hk = hook(p + 2)
    fk = fork(p + 14)
    keys_p = tuple(lits.key(i) for i in Ps)
    keys_n = tuple(lits.key(i) for i in Ns)
    V = hk.G + fk.E + keys_p + (hk.put,) + keys_n + fk.F + hk.H
    V1 = hk.G2 + keys_n + fk.F1 + hk.H2
    V2 = hk.G2 + keys_p[::-1] + fk.F2 + hk.H2
    D = dock(p + 2, p + 29).D
    gadget = Variable(Ps, Ns, p, hk.take, V, V1, V2, D, hk, fk)
    keys = set(keys_p) | set(keys_n)
    strip = lambda blk: [x for x in blk if x not in keys]  # noqa: E731
    _assert_covers([(gadget.nu,), strip(V), D], p + 1, p + 31, "variable")
    _assert_covers([strip(V1), D], p + 1, p + 31, "variable V1")
    _assert_covers([strip(V2), D], p + 1, p + 31, "variable V2")
    return gadget


@dataclass(frozen=True)
class ClauseGadget:
    a: int
    b: int
    c: int
    p: int
    gamma: int
    Gamma: Block
    Gamma1: Block
    Gamma2: Block
    Gamma3: Block
    Delta: Block
    forks: tuple[Fork, Fork]
    hooks: tuple[Hook, Hook]

    def derived(self, slot: int) -> Block:
        """Gamma1/Gamma2/Gamma3 for slot 1 (a), 2 (b) or 3 (c)."""
        return (self.Gamma1, self.Gamma2, self.Gamma3)[slot - 1]


def clause(a: int, b: int, c: int, p: int, lits: Literals) -> ClauseGadget:
    """Clause gadget holding the test elements of literals ``a``, ``b``, ``c``."""
    if len({a, b, c}) != 3:
        raise DuplicateIndices(f"clause literal indices must be distinct: {(a, b, c)}")
    f1, f2 = fork(p + 2), fork(p + 45)
    h1, h2 = hook(p + 21), hook(p + 33)
    ta, tb, tc = lits.test(a), lits.test(b), lits.test(c)
    Gamma = (
        h1.G + f1.E + (h2.take, h1.put, tc) + f1.F
        + h2.G + f2.E + (ta, h2.put, tb) + f2.F + h2.H + h1.H
    )
    Gamma1 = h1.G2 + (tc,) + f1.F1 + h2.G2 + (tb,) + f2.F1 + h2.H2 + h1.H2
    Gamma2 = h1.G2 + (tc,) + f1.F1 + h2.G2 + (ta,) + f2.F2 + h2.H2 + h1.H2
    Gamma3 = (
        h1.G2 + (h2.take,) + f1.F2 + h2.G + f2.E
        + (ta, h2.put, tb) + f2.F + h2.H + h1.H2
    )
    Delta = dock(p + 2, p + 17).D + dock(p + 21, p + 60).D
    gadget = ClauseGadget(
        a, b, c, p, h1.take, Gamma, Gamma1, Gamma2, Gamma3, Delta, (f1, f2), (h1, h2)
    )
    tests = {ta, tb, tc}
    strip = lambda blk: [x for x in blk if x not in tests]  # noqa: E731
    _assert_covers([(gadget.gamma,), strip(Gamma), Delta], p + 1, p + 62, "clause")
    for blk in (Gamma1, Gamma2, Gamma3):
        _assert_covers([strip(blk), Delta], p + 1, p + 62, "clause derived form")
    return gadget
