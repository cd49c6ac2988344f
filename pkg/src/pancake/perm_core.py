"""Sequences, prefix reversals and the breakpoint calculus.

Elements are 1-based values, positions are 1-based as well: a flip of
length ``r`` reverses positions ``1..r``.  Hot loops elsewhere in the
package work on bare tuples through the underscore helpers defined here;
the public functions accept a :class:`Sequence` or any iterable of ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from pancake.errors import NotAPermutation, OutOfRange

__all__ = [
    "Sequence",
    "FlipPath",
    "BreakpointProfile",
    "make_sequence",
    "identity",
    "flip",
    "breakpoints",
    "db",
    "efficient_flips",
    "is_deadlock",
    "is_identity",
    "ident",
    "rev_ident",
    "shift",
    "parse_permutation",
    "format_permutation",
]


def _check_permutation(elems: tuple[int, ...]) -> None:
    n = len(elems)
    if n == 0:
        raise NotAPermutation("empty sequence")
    seen = bytearray(n + 1)
    for x in elems:
        if not isinstance(x, int) or isinstance(x, bool):
            raise NotAPermutation(f"non-integer element {x!r}")
        if x < 1 or x > n:
            raise NotAPermutation(f"element {x} outside 1..{n}")
        if seen[x]:
            raise NotAPermutation(f"duplicate element {x}")
        seen[x] = 1


@dataclass(frozen=True)
class Sequence:
    """An immutable permutation of ``1..n``; hashes over its elements."""

    elems: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.elems, tuple):
            object.__setattr__(self, "elems", tuple(self.elems))
        _check_permutation(self.elems)

    @property
    def n(self) -> int:
        return len(self.elems)

    @property
    def head(self) -> int:
        return self.elems[0]

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elems)

    def __getitem__(self, i):
        return self.elems[i]

    def __str__(self) -> str:
        return format_permutation(self.elems)

    def tolist(self) -> list[int]:
        return list(self.elems)


SequenceLike = Union[Sequence, Iterable[int]]


def _as_tuple(S: SequenceLike) -> tuple[int, ...]:
    if isinstance(S, Sequence):
        return S.elems
    t = tuple(S)
    _check_permutation(t)
    return t


def _as_sequence(S: SequenceLike) -> Sequence:
    return S if isinstance(S, Sequence) else Sequence(tuple(S))


def make_sequence(values: Iterable[int]) -> Sequence:
    return Sequence(tuple(values))


def identity(n: int) -> Sequence:
    return Sequence(tuple(range(1, n + 1)))


# -- tuple-level kernels ----------------------------------------------------


def _flip(t: tuple[int, ...], r: int) -> tuple[int, ...]:
    return t[r - 1 :: -1] + t[r:]


def _breakpoint_positions(t: tuple[int, ...]) -> list[int]:
    n = len(t)
    out = [r + 1 for r in range(n - 1) if abs(t[r] - t[r + 1]) != 1]
    if t[-1] != n:
        out.append(n)
    return out


def _db(t: tuple[int, ...]) -> int:
    n = len(t)
    count = 0 if t[-1] == n else 1
    prev = t[0]
    for x in t[1:]:
        if x - prev != 1 and prev - x != 1:
            count += 1
        prev = x
    return count


def _efficient(t: tuple[int, ...]) -> list[int]:
    """Efficient flip lengths of ``t`` in ascending order.

    Reversing a prefix of length r only changes the adjacency at position r,
    which becomes (x1, x_{r+1}) (or (x1, end) when r = n).
    """
    n = len(t)
    head = t[0]
    out = []
    for v in (head - 1, head + 1):
        if 1 <= v <= n:
            i = t.index(v)  # 0-based; flip length r = i
            if i >= 2 and abs(t[i - 1] - v) != 1:
                out.append(i)
    if head == n and t[-1] != n:
        out.append(n)
    out.sort()
    return out


def _is_identity(t: tuple[int, ...]) -> bool:
    return all(x == i for i, x in enumerate(t, 1))


# -- public API -------------------------------------------------------------


def flip(S: SequenceLike, r: int) -> Sequence:
    t = _as_tuple(S)
    if not 1 <= r <= len(t):
        raise OutOfRange(f"flip length {r} outside 1..{len(t)}")
    return Sequence(_flip(t, r))


@dataclass(frozen=True)
class BreakpointProfile:
    db: int
    positions: frozenset[int]


def breakpoints(S: SequenceLike) -> BreakpointProfile:
    pos = _breakpoint_positions(_as_tuple(S))
    return BreakpointProfile(len(pos), frozenset(pos))


def db(S: SequenceLike) -> int:
    return _db(_as_tuple(S))


def efficient_flips(S: SequenceLike) -> set[int]:
    return set(_efficient(_as_tuple(S)))


def is_identity(S: SequenceLike) -> bool:
    return _is_identity(_as_tuple(S))


def is_deadlock(S: SequenceLike) -> bool:
    t = _as_tuple(S)
    return not _is_identity(t) and not _efficient(t)


def ident(p: int, q: int) -> list[int]:
    return list(range(p, q + 1))


def rev_ident(p: int, q: int) -> list[int]:
    return list(range(q, p - 1, -1))


def shift(p: int, block: Iterable[int]) -> list[int]:
    return [p + x for x in block]


@dataclass(frozen=True)
class FlipPath:
    """Flip lengths applied in order to ``source``."""

    source: Sequence
    flips: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "source", _as_sequence(self.source))
        object.__setattr__(self, "flips", tuple(self.flips))
        n = self.source.n
        for r in self.flips:
            if not 1 <= r <= n:
                raise OutOfRange(f"flip length {r} outside 1..{n}")

    def __len__(self) -> int:
        return len(self.flips)

    def tuples(self) -> list[tuple[int, ...]]:
        """All visited states, source first."""
        t = self.source.elems
        out = [t]
        for r in self.flips:
            t = _flip(t, r)
            out.append(t)
        return out

    def states(self) -> list[Sequence]:
        return [Sequence(t) for t in self.tuples()]

    @property
    def final(self) -> Sequence:
        return Sequence(self.tuples()[-1])

    def db_trace(self) -> list[int]:
        return [_db(t) for t in self.tuples()]

    @property
    def efficient(self) -> bool:
        trace = self.db_trace()
        return all(b - a == 1 for a, b in zip(trace[1:], trace))

    @property
    def sorts(self) -> bool:
        return _is_identity(self.tuples()[-1])


def parse_permutation(text: str) -> Sequence:
    """Parse one permutation given as whitespace-separated integers."""
    try:
        values = [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise NotAPermutation(f"bad token in {text!r}") from exc
    return make_sequence(values)


def format_permutation(S: SequenceLike) -> str:
    return " ".join(str(x) for x in (S.elems if isinstance(S, Sequence) else S))
