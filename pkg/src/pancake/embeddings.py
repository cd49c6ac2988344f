"""Concrete permutations on which each gadget property can be checked.

A gadget property talks about sequences such as ``<key, X, L, Y>`` where the
context blocks X, Y, Z are arbitrary.  A :class:`Template` fixes the gadget
and lists the *free units*: gadget-related elements (test/key elements,
docks) that the property leaves outside the gadget and that must therefore
live somewhere in the contexts for the whole to be a permutation.  Filling
the slots yields an :class:`Embedding`, i.e. a source permutation and the
target set the property promises (or a deadlock flag).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from pancake.errors import UnknownKind
from pancake.gadgets import clause, dock, fork, hook, literals, lock, variable
from pancake.perm_core import Sequence, ident, rev_ident

__all__ = [
    "KINDS",
    "Embedding",
    "Template",
    "template",
    "canonical_embedding",
    "random_embedding",
    "CANONICAL_CONTEXTS",
]

KINDS = (
    "dock",
    "lock_a", "lock_b", "lock_c",
    "hook_a", "hook_b", "hook_c",
    "fork_a", "fork_b", "fork_c",
    "literals_a", "literals_b", "literals_c",
    "variable_a", "variable_b", "variable_c",
    "clause", "clause2_a", "clause2_b", "clause2_c",
)  # fmt: skip

Tup = tuple[int, ...]
Builder = Callable[[dict[str, Tup]], tuple[Tup, list[Tup]]]


@dataclass(frozen=True)
class Embedding:
    kind: str
    S: Sequence
    targets: tuple[Sequence, ...]
    deadlock: bool
    context: dict


@dataclass(frozen=True)
class Template:
    kind: str
    slots: tuple[str, ...]
    free: tuple[Tup, ...]
    high: int  # largest value used by the gadget and the free units
    build: Builder
    deadlock: bool = False

    def fill(self, context: dict[str, Tup]) -> Embedding:
        ctx = {s: tuple(context.get(s, ())) for s in self.slots}
        unknown = set(context) - set(self.slots)
        if unknown:
            raise ValueError(f"{self.kind}: unknown context slots {sorted(unknown)}")
        S, targets = self.build(ctx)
        return Embedding(
            self.kind,
            Sequence(S),
            tuple(Sequence(T) for T in targets),
            self.deadlock,
            ctx,
        )


def _rev(t: Tup) -> Tup:
    return t[::-1]


# -- level 1 --------------------------------------------------------------------


def _dock(p: int = 2, q: int = 5) -> Template:
    D = dock(p, q).D
    block = tuple(rev_ident(p + 1, q))
    low = tuple((x,) for x in range(1, p - 1))

    def build(c):
        return block + c["X"] + D + c["Y"], [c["X"] + tuple(ident(p - 1, q + 2)) + c["Y"]]

    return Template("dock", ("X", "Y"), low, q + 2, build)


def _lock(kind: str, p: int = 0) -> Template:
    lk = lock(p)
    low = tuple((x,) for x in range(1, p + 1))
    if kind == "lock_a":

        def build(c):
            return (lk.key,) + c["X"] + lk.L + c["Y"], [c["X"] + lk.L_open + c["Y"]]

        return Template(kind, ("X", "Y"), low + ((lk.test,),), p + 12, build)
    if kind == "lock_b":

        def build(c):
            S = (lk.test,) + c["X"] + lk.L_open + c["Y"]
            return S, [c["X"] + tuple(ident(p + 1, p + 12)) + c["Y"]]

        return Template(kind, ("X", "Y"), low, p + 12, build)

    def build(c):
        return (lk.test,) + c["X"] + lk.L + c["Y"], []

    return Template(kind, ("X", "Y"), low + ((lk.key,),), p + 12, build, deadlock=True)


def _hook(kind: str, p: int = 0) -> Template:
    hk = hook(p)
    low = tuple((x,) for x in range(1, p + 1))
    if kind == "hook_a":

        def build(c):
            S = (hk.take,) + c["X"] + hk.G + c["Y"] + hk.H + c["Z"]
            return S, [c["Y"] + hk.G1 + _rev(c["X"]) + hk.H1 + c["Z"]]

        return Template(kind, ("X", "Y", "Z"), low + ((hk.put,),), p + 12, build)
    if kind == "hook_b":

        def build(c):
            S = (hk.put,) + c["X"] + hk.G1 + _rev(c["Y"]) + hk.H1 + c["Z"]
            return S, [c["Y"] + hk.G2 + c["X"] + hk.H2 + c["Z"]]

        return Template(kind, ("X", "Y", "Z"), low, p + 12, build)

    def build(c):
        S = hk.G2 + c["X"] + hk.H2 + c["Y"]
        return S, [c["X"] + tuple(rev_ident(p + 1, p + 12)) + c["Y"]]

    return Template(kind, ("X", "Y"), low, p + 12, build)


def _fork(kind: str, p: int = 0) -> Template:
    fk = fork(p)
    low = tuple((x,) for x in range(1, p + 1))
    if kind == "fork_a":

        def build(c):
            S = fk.E + c["X"] + fk.F + c["Y"]
            return S, [c["X"] + fk.F1 + c["Y"], _rev(c["X"]) + fk.F2 + c["Y"]]

        return Template(kind, ("X", "Y"), low, p + 15, build)
    src = fk.F1 if kind == "fork_b" else fk.F2

    def build(c):
        return src + c["Y"], [tuple(rev_ident(p + 1, p + 15)) + c["Y"]]

    return Template(kind, ("Y",), low, p + 15, build)


# -- level 2 --------------------------------------------------------------------


def _lock_units(lits, opened: set, tested: set, skip_tests=(), skip_keys=()) -> tuple[Tup, ...]:
    """Key/test elements that the literal block leaves out and must sit in contexts."""
    units = []
    for i in range(1, lits.m + 1):
        if i not in tested and i not in skip_tests:
            units.append((lits.test(i),))
        if i not in tested and i not in opened and i not in skip_keys:
            units.append((lits.key(i),))
    return tuple(units)


def _literals(kind: str, i: int, opened: set, tested: set, m: int = 3, p: int = 0) -> Template:
    lits = literals(p, m)
    lam = lits.block(opened, tested)
    high = p + 12 * m
    if kind == "literals_a":
        assert i not in opened | tested
        free = _lock_units(lits, opened, tested, skip_keys=(i,))

        def build(c):
            return (lits.key(i),) + c["X"] + lam, [c["X"] + lits.block(opened | {i}, tested)]

        return Template(kind, ("X",), free, high, build)
    if kind == "literals_b":
        assert i in opened
        free = _lock_units(lits, opened, tested, skip_tests=(i,))

        def build(c):
            T = c["X"] + lits.block(opened - {i}, tested | {i})
            return (lits.test(i),) + c["X"] + lam, [T]

        return Template(kind, ("X",), free, high, build)
    assert i not in opened | tested
    free = _lock_units(lits, opened, tested, skip_tests=(i,))

    def build(c):
        return (lits.test(i),) + c["X"] + lam, []

    return Template(kind, ("X",), free, high, build, deadlock=True)


def _variable(kind: str, P: set, N: set, opened: set, tested: set, m: int = 3) -> Template:
    p = 0
    lits = literals(31, m)
    var = variable(P, N, p, lits)
    lam = lits.block(opened, tested)
    high = 31 + 12 * m
    if kind == "variable_a":
        assert not (P | N) & (opened | tested)
        free = (var.D,) + _lock_units(lits, opened, tested, skip_keys=P | N)

        def build(c):
            S = (var.nu,) + c["X"] + var.V + c["Y"] + lam
            return S, [
                c["X"] + var.V1 + c["Y"] + lits.block(opened | P, tested),
                c["X"] + var.V2 + c["Y"] + lits.block(opened | N, tested),
            ]

        return Template(kind, ("X", "Y"), free, high, build)
    if kind == "variable_b":
        assert not N & (opened | tested)
        src, newly = var.V1, N
    else:
        assert not P & (opened | tested)
        src, newly = var.V2, P
    free = _lock_units(lits, opened, tested, skip_keys=newly)

    def build(c):
        S = src + c["X"] + var.D + c["Y"] + lam
        T = c["X"] + tuple(ident(p + 1, p + 31)) + c["Y"] + lits.block(opened | newly, tested)
        return S, [T]

    return Template(kind, ("X", "Y"), free, high, build)


def _clause(kind: str, opened: set, tested: set, m: int = 3) -> Template:
    p = 0
    a, b, c_ = 1, 2, 3
    lits = literals(62, m)
    cl = clause(a, b, c_, p, lits)
    lam = lits.block(opened, tested)
    high = 62 + 12 * m
    if kind == "clause":
        assert not {a, b, c_} & tested
        free = (cl.Delta,) + _lock_units(lits, opened, tested, skip_tests=(a, b, c_))

        def build(c):
            S = (cl.gamma,) + c["X"] + cl.Gamma + c["Y"] + lam
            targets = [
                c["X"] + cl.derived(slot) + c["Y"] + lits.block(opened - {x}, tested | {x})
                for slot, x in ((1, a), (2, b), (3, c_))
                if x in opened
            ]
            return S, targets

        return Template(kind, ("X", "Y"), free, high, build)
    slot = {"clause2_a": 1, "clause2_b": 2, "clause2_c": 3}[kind]
    needed = {1: {b, c_}, 2: {a, c_}, 3: {a, b}}[slot]
    assert needed <= opened
    src = cl.derived(slot)
    free = _lock_units(lits, opened, tested, skip_tests=needed)

    def build(c):
        S = src + c["Y"] + cl.Delta + c["Z"] + lam
        T = c["Y"] + tuple(ident(p + 1, p + 62)) + c["Z"] + lits.block(opened - needed, tested | needed)
        return S, [T]

    return Template(kind, ("Y", "Z"), free, high, build)


# -- parameter choices ----------------------------------------------------------

_CANONICAL_PARAMS: dict[str, dict] = {
    "dock": dict(p=2, q=5),
    "lock_a": {}, "lock_b": {}, "lock_c": {},
    "hook_a": {}, "hook_b": {}, "hook_c": {},
    "fork_a": {}, "fork_b": {}, "fork_c": {},
    "literals_a": dict(i=1, opened={2}, tested={3}),
    "literals_b": dict(i=1, opened={1, 2}, tested={3}),
    "literals_c": dict(i=1, opened={2}, tested={3}),
    "variable_a": dict(P={1}, N={2}, opened=set(), tested={3}),
    "variable_b": dict(P={1}, N={2}, opened={1}, tested={3}),
    "variable_c": dict(P={1}, N={2}, opened={2}, tested={3}),
    "clause": dict(opened={1, 2, 3}, tested=set()),
    "clause2_a": dict(opened={2, 3}, tested={1}),
    "clause2_b": dict(opened={1, 3}, tested={2}),
    "clause2_c": dict(opened={1, 2}, tested={3}),
}  # fmt: skip


def template(kind: str, **params) -> Template:
    if kind not in KINDS:
        raise UnknownKind(kind)
    merged = {**_CANONICAL_PARAMS[kind], **params}
    family = kind.split("_")[0]
    if family == "dock":
        return _dock(**merged)
    if family == "lock":
        return _lock(kind, **merged)
    if family == "hook":
        return _hook(kind, **merged)
    if family == "fork":
        return _fork(kind, **merged)
    if family == "literals":
        return _literals(kind, **merged)
    if family == "variable":
        return _variable(kind, **merged)
    return _clause(kind, **merged)


def _random_params(kind: str, rng: random.Random) -> dict:
    """Valid gadget parameters for ``kind``: offsets for level-1 gadgets, lock
    states for level-2 gadgets."""
    family = kind.split("_")[0]
    if family == "dock":
        p = rng.randint(2, 4)
        return dict(p=p, q=p + rng.randint(1, 4))
    if family in ("lock", "hook", "fork"):
        return dict(p=rng.randint(0, 3))
    states = lambda ids, choices: {i: rng.choice(choices) for i in ids}  # noqa: E731
    if family == "literals":
        i = rng.randint(1, 3)
        others = states([j for j in (1, 2, 3) if j != i], "COI")
        opened = {j for j, s in others.items() if s == "O"}
        tested = {j for j, s in others.items() if s == "I"}
        if kind == "literals_b":
            opened.add(i)
        return dict(i=i, opened=opened, tested=tested)
    if family == "variable":
        # lock 3 belongs to neither P nor N
        P, N = {1}, {2}
        st = states([3], "COI")
        opened = {j for j, s in st.items() if s == "O"}
        tested = {j for j, s in st.items() if s == "I"}
        if kind == "variable_b":
            (opened if rng.random() < 0.5 else tested).update(P)
        elif kind == "variable_c":
            (opened if rng.random() < 0.5 else tested).update(N)
        return dict(P=P, N=N, opened=opened, tested=tested)
    if kind == "clause":
        st = states([1, 2, 3], "CO")
        return dict(opened={j for j, s in st.items() if s == "O"}, tested=set())
    slot = {"clause2_a": 1, "clause2_b": 2, "clause2_c": 3}[kind]
    needed = {1: {2, 3}, 2: {1, 3}, 3: {1, 2}}[slot]
    s = rng.choice("COI")
    opened = set(needed) | ({slot} if s == "O" else set())
    return dict(opened=opened, tested={slot} if s == "I" else set())


# Chosen so that every source is efficiently sortable: the funnel's
# "all paths to the identity pass a target" condition is then exercised.
CANONICAL_CONTEXTS: dict[str, dict[str, Tup]] = {
    "dock": {"X": (9, 8), "Y": (10,)},
    "lock_a": {"X": (7,), "Y": (13,)},
    "lock_b": {"X": (13,), "Y": (14,)},
    "lock_c": {"X": (13,), "Y": (10,)},
    "hook_a": {"X": (13,), "Y": (14,), "Z": (7,)},
    "hook_b": {"X": (13,), "Y": (), "Z": (14,)},
    "hook_c": {"X": (13,), "Y": (14,)},
    "fork_a": {"X": (17,), "Y": (16,)},
    "fork_b": {"Y": (16,)},
    "fork_c": {"Y": (16,)},
    "literals_a": {"X": (7, 19)},
    "literals_b": {"X": (19,)},
    "literals_c": {"X": (10, 19)},
    "variable_a": {"X": (38,), "Y": (50, 1, 2, 30, 31)},
    "variable_b": {"X": (38, 50, 68), "Y": (69,)},
    "variable_c": {"X": (38, 50, 68), "Y": (69,)},
    "clause": {"X": (99,), "Y": (1, 2, 18, 19, 20, 21, 61, 62)},
    "clause2_a": {"Y": (99,), "Z": (100,)},
    "clause2_b": {"Y": (99,), "Z": (100,)},
    "clause2_c": {"Y": (99,), "Z": (100,)},
}


def canonical_embedding(kind: str) -> Embedding:
    if kind not in KINDS:
        raise UnknownKind(kind)
    return template(kind).fill(CANONICAL_CONTEXTS[kind])


def random_context(tpl: Template, rng: random.Random, max_fillers: int = 2) -> dict[str, Tup]:
    """Scatter the free units plus a few high filler values over the slots."""
    units = list(tpl.free)
    units += [(tpl.high + j,) for j in range(1, rng.randint(0, max_fillers) + 1)]
    rng.shuffle(units)
    ctx: dict[str, list[int]] = {s: [] for s in tpl.slots}
    for unit in units:
        ctx[rng.choice(tpl.slots)].extend(unit)
    return {s: tuple(v) for s, v in ctx.items()}


def random_embedding(kind: str, rng: random.Random) -> Embedding:
    tpl = template(kind, **_random_params(kind, rng))
    return tpl.fill(random_context(tpl, rng))
