"""3-SAT to pancake reduction: DIMACS input, the permutation built from a
formula, certificates for satisfying assignments and the equivalence check."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from pancake.errors import (
    ArityError,
    CertificationFailed,
    DimacsSyntaxError,
    EquivalenceViolation,
    IncompatibleSelection,
    TooLarge,
    VariableRangeError,
)
from pancake.gadgets import ClauseGadget, Literals, Variable, clause, literals, variable
from pancake.pathsearch import (
    SearchStats,
    decide_with_stats,
    default_node_budget,
    efficient_path_between,
)
from pancake.perm_core import FlipPath, Sequence, _db

__all__ = [
    "Cnf",
    "Assignment",
    "Selection",
    "Zone",
    "ReductionInstance",
    "EquivalenceReport",
    "parse_dimacs",
    "format_dimacs",
    "build_instance",
    "sat_brute_force",
    "assignment_landmark",
    "selection_landmark",
    "compatible_selection",
    "certify",
    "check_theorem",
    "random_cnf",
    "all_single_clause_cnfs",
    "SAT_MAX_L",
]

SAT_MAX_L = 24
THEOREM_MAX_L = 4
THEOREM_MAX_K = 3


@dataclass(frozen=True)
class Cnf:
    """A 3-CNF formula; literals are DIMACS-style signed variable indices."""

    l: int  # noqa: E741
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.l < 0:
            raise VariableRangeError("variable count must be non-negative")
        for c in self.clauses:
            if len(c) != 3:
                raise ArityError(f"clause {c} does not have exactly 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.l:
                    raise VariableRangeError(f"literal {lit} outside 1..{self.l}")

    @property
    def k(self) -> int:
        return len(self.clauses)

    @property
    def m(self) -> int:
        return 3 * self.k

    def literal(self, j: int) -> int:
        """Signed literal with global index ``j`` (clause i owns 3i-2, 3i-1, 3i)."""
        return self.clauses[(j - 1) // 3][(j - 1) % 3]

    def satisfied_by(self, true_vars: Iterable[int]) -> bool:
        T = set(true_vars)
        return all(any((lit > 0) == (abs(lit) in T) for lit in c) for c in self.clauses)


@dataclass(frozen=True)
class Assignment:
    T: frozenset[int]
    F: frozenset[int]

    @classmethod
    def from_true(cls, l: int, true_vars: Iterable[int]) -> "Assignment":  # noqa: E741
        T = frozenset(true_vars)
        return cls(T, frozenset(range(1, l + 1)) - T)

    def value(self, var: int) -> bool:
        return var in self.T


@dataclass(frozen=True)
class Selection:
    sel: frozenset[int]


def parse_dimacs(text: str) -> Cnf:
    header: Optional[tuple[int, int]] = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise DimacsSyntaxError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as exc:
                raise DimacsSyntaxError(f"line {lineno}: malformed header {line!r}") from exc
            if header[0] < 0 or header[1] < 0:
                raise DimacsSyntaxError(f"line {lineno}: negative counts in header")
            continue
        if header is None:
            raise DimacsSyntaxError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError as exc:
                raise DimacsSyntaxError(f"line {lineno}: bad token {tok!r}") from exc
            if lit == 0:
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > header[0]:
                raise VariableRangeError(f"line {lineno}: variable {abs(lit)} outside 1..{header[0]}")
            current.append(lit)
    if header is None:
        raise DimacsSyntaxError("missing 'p cnf' header")
    if current:
        raise DimacsSyntaxError("last clause is not terminated by 0")
    for c in clauses:
        if len(c) != 3:
            raise ArityError(f"clause {list(c)} has {len(c)} literals, expected 3")
    if len(clauses) != header[1]:
        raise DimacsSyntaxError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return Cnf(header[0], tuple(clauses))


def format_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.l} {cnf.k}"]
    lines += [" ".join(str(x) for x in c) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def random_cnf(l: int, k: int, rng: random.Random, contradiction: bool = False) -> Cnf:  # noqa: E741
    """Uniform random 3-CNF; ``contradiction`` plants (x,x,x) and (-x,-x,-x) for
    a random variable x, which makes the formula unsatisfiable (needs k >= 2)."""
    lit = lambda: rng.randint(1, l) * rng.choice((1, -1))  # noqa: E731
    clauses = [(lit(), lit(), lit()) for _ in range(k)]
    if contradiction:
        if k < 2:
            raise ValueError("a planted contradiction needs at least two clauses")
        x = rng.randint(1, l)
        i, j = rng.sample(range(k), 2)
        clauses[i], clauses[j] = (x, x, x), (-x, -x, -x)
    return Cnf(l, tuple(clauses))


def all_single_clause_cnfs(l: int) -> list[Cnf]:  # noqa: E741
    """Every one-clause formula over ``l`` variables, as ordered signed triples."""
    signed = [s * v for v in range(1, l + 1) for s in (1, -1)]
    return [Cnf(l, (c,)) for c in itertools.product(signed, repeat=3)]


# -- construction ---------------------------------------------------------------


@dataclass(frozen=True)
class Zone:
    role: str  # variable | clause | literals | trigger
    index: int
    block: str  # V | Gamma | D | Delta | Lambda | nu | gamma
    start: int  # 1-based, inclusive
    end: int

    def as_json(self) -> dict:
        return {
            "role": self.role,
            "index": self.index,
            "block": self.block,
            "positions": [self.start, self.end],
        }


@dataclass(frozen=True)
class ReductionInstance:
    cnf: Cnf
    s_phi: Sequence
    layout: tuple[Zone, ...]
    literal_index: dict  # j -> (variable, sign, clause, slot)
    lits: Literals
    variables: tuple[Variable, ...]
    clause_gadgets: tuple[ClauseGadget, ...]
    P: tuple[frozenset, ...] = field(repr=False)
    N: tuple[frozenset, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.s_phi.n

    @property
    def db(self) -> int:
        return _db(self.s_phi.elems)

    def layout_json(self) -> dict:
        return {"n": self.n, "db": self.db, "zones": [z.as_json() for z in self.layout]}

    def block_for(self, zone: Zone) -> tuple[int, ...]:
        """Initial contents of a layout zone, rebuilt from the gadgets."""
        if zone.block == "nu":
            return (self.variables[zone.index - 1].nu,)
        if zone.block == "gamma":
            return (self.clause_gadgets[zone.index - 1].gamma,)
        if zone.block == "V":
            return self.variables[zone.index - 1].V
        if zone.block == "Gamma":
            return self.clause_gadgets[zone.index - 1].Gamma
        if zone.block == "D":
            return self.variables[zone.index - 1].D
        if zone.block == "Delta":
            return self.clause_gadgets[zone.index - 1].Delta
        if zone.block == "Lambda":
            return self.lits.block()
        raise KeyError(zone.block)

    def rebuild_from_layout(self) -> tuple[int, ...]:
        out = [0] * self.n
        for z in self.layout:
            blk = self.block_for(z)
            if len(blk) != z.end - z.start + 1:
                raise AssertionError(f"zone {z} does not match its block length")
            out[z.start - 1 : z.end] = blk
        return tuple(out)


def build_instance(cnf: Cnf) -> ReductionInstance:
    l, k, m = cnf.l, cnf.k, cnf.m  # noqa: E741
    lits = literals(31 * l + 62 * k, m)
    P = tuple(frozenset(j for j in range(1, m + 1) if cnf.literal(j) == i) for i in range(1, l + 1))
    N = tuple(frozenset(j for j in range(1, m + 1) if cnf.literal(j) == -i) for i in range(1, l + 1))
    variables = tuple(variable(P[i], N[i], 31 * i, lits) for i in range(l))
    clause_gadgets = tuple(
        clause(3 * i + 1, 3 * i + 2, 3 * i + 3, 31 * l + 62 * i, lits) for i in range(k)
    )
    literal_index = {}
    for j in range(1, m + 1):
        lit = cnf.literal(j)
        literal_index[j] = (abs(lit), 1 if lit > 0 else -1, (j - 1) // 3 + 1, "abc"[(j - 1) % 3])

    pieces: list[tuple[str, int, str, tuple[int, ...]]] = []
    pieces += [("trigger", i + 1, "nu", (v.nu,)) for i, v in enumerate(variables)]
    pieces += [("trigger", i + 1, "gamma", (c.gamma,)) for i, c in enumerate(clause_gadgets)]
    pieces += [("variable", i + 1, "V", v.V) for i, v in enumerate(variables)]
    pieces += [("clause", i + 1, "Gamma", c.Gamma) for i, c in enumerate(clause_gadgets)]
    pieces += [("variable", i + 1, "D", v.D) for i, v in enumerate(variables)]
    pieces += [("clause", i + 1, "Delta", c.Delta) for i, c in enumerate(clause_gadgets)]
    pieces.append(("literals", 1, "Lambda", lits.block()))

    elems: list[int] = []
    layout = []
    for role, index, name, blk in pieces:
        if not blk:
            continue
        layout.append(Zone(role, index, name, len(elems) + 1, len(elems) + len(blk)))
        elems += blk
    s_phi = Sequence(tuple(elems))
    return ReductionInstance(cnf, s_phi, tuple(layout), literal_index, lits, variables, clause_gadgets, P, N)


# -- SAT oracle ---------------------------------------------------------------


def sat_brute_force(cnf: Cnf, max_l: int = SAT_MAX_L) -> Optional[Assignment]:
    """First satisfying assignment in lexicographic order (False < True, x1 first)."""
    if cnf.l > max_l:
        raise TooLarge(f"brute-force SAT guarded to l <= {max_l}, got {cnf.l}")
    for bits in itertools.product((False, True), repeat=cnf.l):
        true_vars = [i + 1 for i, b in enumerate(bits) if b]
        if cnf.satisfied_by(true_vars):
            return Assignment.from_true(cnf.l, true_vars)
    return None


# -- landmarks and certificates ----------------------------------------------


def _opened(inst: ReductionInstance, asg: Assignment) -> set[int]:
    out: set[int] = set()
    for i in range(1, inst.cnf.l + 1):
        out |= inst.P[i - 1] if i in asg.T else inst.N[i - 1]
    return out


def _literal_true(inst: ReductionInstance, asg: Assignment, j: int) -> bool:
    lit = inst.cnf.literal(j)
    return asg.value(abs(lit)) == (lit > 0)


def _check_selection(inst: ReductionInstance, asg: Assignment, sel: Selection) -> None:
    for i in range(inst.cnf.k):
        if len({3 * i + 1, 3 * i + 2, 3 * i + 3} & sel.sel) != 1:
            raise IncompatibleSelection(f"clause {i + 1} must have exactly one selected literal")
    if not sel.sel <= set(range(1, inst.cnf.m + 1)):
        raise IncompatibleSelection("selection index outside 1..m")
    for j in sel.sel:
        if not _literal_true(inst, asg, j):
            raise IncompatibleSelection(f"selected literal {j} is false under the assignment")


def _v_prime(inst: ReductionInstance, asg: Assignment) -> list[int]:
    out: list[int] = []
    for i, v in enumerate(inst.variables, 1):
        out += v.V1 if i in asg.T else v.V2
    return out


def _tail(inst: ReductionInstance) -> list[int]:
    out: list[int] = []
    for v in inst.variables:
        out += v.D
    for c in inst.clause_gadgets:
        out += c.Delta
    return out


def assignment_landmark(inst: ReductionInstance, asg: Assignment) -> Sequence:
    """The state every efficient sort passes once all variables are assigned."""
    out = [c.gamma for c in inst.clause_gadgets]
    out += _v_prime(inst, asg)
    for c in inst.clause_gadgets:
        out += c.Gamma
    out += _tail(inst)
    out += inst.lits.block(_opened(inst, asg), ())
    return Sequence(tuple(out))


def selection_landmark(inst: ReductionInstance, asg: Assignment, sel: Selection) -> Sequence:
    """The state reached once every clause has tested its selected literal."""
    _check_selection(inst, asg, sel)
    out = _v_prime(inst, asg)
    for i, c in enumerate(inst.clause_gadgets):
        slot = next(s for s in (1, 2, 3) if 3 * i + s in sel.sel)
        out += c.derived(slot)
    out += _tail(inst)
    out += inst.lits.block(_opened(inst, asg) - sel.sel, sel.sel)
    return Sequence(tuple(out))


def compatible_selection(inst: ReductionInstance, asg: Assignment) -> Optional[Selection]:
    """First true literal of each clause, or None if some clause is false."""
    chosen = set()
    for i in range(inst.cnf.k):
        js = [3 * i + s for s in (1, 2, 3) if _literal_true(inst, asg, 3 * i + s)]
        if not js:
            return None
        chosen.add(js[0])
    return Selection(frozenset(chosen))


def certify(
    inst: ReductionInstance,
    asg: Assignment,
    sel: Selection,
    node_budget: Optional[int] = None,
) -> FlipPath:
    """Efficient sorting path through the assignment and selection landmarks."""
    _check_selection(inst, asg, sel)
    budget = node_budget or default_node_budget()
    stats = SearchStats()
    landmarks = [
        inst.s_phi,
        assignment_landmark(inst, asg),
        selection_landmark(inst, asg, sel),
        Sequence(tuple(range(1, inst.n + 1))),
    ]
    flips: list[int] = []
    for src, dst in zip(landmarks, landmarks[1:]):
        seg = efficient_path_between(src, dst, budget, stats)
        if seg is None:
            raise CertificationFailed(f"no efficient path to landmark after {len(flips)} flips")
        flips += seg.flips
    path = FlipPath(inst.s_phi, flips)
    if not (path.efficient and path.sorts and len(path) == inst.db):
        raise CertificationFailed("assembled certificate is not an efficient sorting path")
    return path


@dataclass
class EquivalenceReport:
    cnf: Cnf
    n: int
    db: int
    sortable: bool
    satisfiable: bool
    path: Optional[FlipPath]
    assignment: Optional[Assignment]
    certificate: Optional[FlipPath]
    stats: SearchStats

    @property
    def holds(self) -> bool:
        return self.sortable == self.satisfiable


def check_theorem(
    cnf: Cnf,
    max_l: int = THEOREM_MAX_L,
    max_k: int = THEOREM_MAX_K,
    node_budget: Optional[int] = None,
) -> EquivalenceReport:
    """Compare efficient sortability of the built permutation with brute-force SAT."""
    if cnf.l > max_l or cnf.k > max_k:
        raise TooLarge(f"check_theorem guarded to l <= {max_l}, k <= {max_k}")
    inst = build_instance(cnf)
    path, stats = decide_with_stats(inst.s_phi, node_budget=node_budget)
    asg = sat_brute_force(cnf)
    report = EquivalenceReport(
        cnf, inst.n, inst.db, path is not None, asg is not None, path, asg, None, stats
    )
    if not report.holds:
        raise EquivalenceViolation(
            f"sortable={report.sortable} but satisfiable={report.satisfiable} for {cnf}"
        )
    if asg is not None:
        sel = compatible_selection(inst, asg)
        assert sel is not None
        report.certificate = certify(inst, asg, sel, node_budget)
    return report


def layout_dumps(inst: ReductionInstance) -> str:
    return json.dumps(inst.layout_json())
