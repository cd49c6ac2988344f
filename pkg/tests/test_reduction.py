import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from pancake.errors import (
    ArityError,
    DimacsSyntaxError,
    IncompatibleSelection,
    TooLarge,
    VariableRangeError,
)
from pancake.pathsearch import decide_efficiently_sortable
from pancake.perm_core import db
from pancake.reduction import (
    Assignment,
    Cnf,
    Selection,
    all_single_clause_cnfs,
    assignment_landmark,
    build_instance,
    certify,
    check_theorem,
    compatible_selection,
    format_dimacs,
    parse_dimacs,
    random_cnf,
    sat_brute_force,
    selection_landmark,
)

CONTRADICTION = Cnf(1, ((1, 1, 1), (-1, -1, -1)))


def test_parse_examples():
    assert parse_dimacs("p cnf 2 1\n1 -2 2 0\n") == Cnf(2, ((1, -2, 2),))
    assert parse_dimacs("c hi\np cnf 1 1\n1 1 1 0\n").k == 1
    assert parse_dimacs("p cnf 3 2\n1 2\n3 0 -1 -2\n-3 0\n%\n0\n").clauses == ((1, 2, 3), (-1, -2, -3))


@pytest.mark.parametrize(
    "text, err",
    [
        ("p cnf 1 1\n1 1 0\n", ArityError),
        ("p cnf 1 1\n1 1 1 1 0\n", ArityError),
        ("p cnf 1 1\n1 2 1 0\n", VariableRangeError),
        ("1 1 1 0\n", DimacsSyntaxError),
        ("p cnf x 1\n1 1 1 0\n", DimacsSyntaxError),
        ("p cnf 1 1\n1 a 1 0\n", DimacsSyntaxError),
        ("p cnf 1 2\n1 1 1 0\n", DimacsSyntaxError),
        ("p cnf 1 1\n1 1 1\n", DimacsSyntaxError),
        ("", DimacsSyntaxError),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_dimacs(text)


@given(st.integers(1, 4), st.integers(0, 3), st.integers(0, 2**32 - 1))
def test_dimacs_roundtrip(l, k, seed):
    cnf = random_cnf(l, k, random.Random(seed))
    assert parse_dimacs(format_dimacs(cnf)) == cnf


@pytest.mark.parametrize("l, k, n, d", [(3, 1, 191, 98), (1, 2, 227, 116), (1, 1, 129, 66)])
def test_instance_size(l, k, n, d):
    cnf = CONTRADICTION if (l, k) == (1, 2) else random_cnf(l, k, random.Random(0))
    inst = build_instance(cnf)
    assert inst.n == n == 31 * l + 98 * k
    assert inst.db == db(inst.s_phi) == d == 16 * l + 50 * k


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_layout_total_and_rebuilds(l, k, seed):
    inst = build_instance(random_cnf(l, k, random.Random(seed)))
    covered = []
    for z in inst.layout:
        covered += range(z.start, z.end + 1)
    assert covered == list(range(1, inst.n + 1))
    assert inst.rebuild_from_layout() == inst.s_phi.elems
    doc = json.loads(json.dumps(inst.layout_json()))
    assert list(doc) == ["n", "db", "zones"]
    assert all(list(z) == ["role", "index", "block", "positions"] for z in doc["zones"])


def test_literal_index_and_occurrences():
    inst = build_instance(Cnf(2, ((1, -2, 2),)))
    assert inst.literal_index == {1: (1, 1, 1, "a"), 2: (2, -1, 1, "b"), 3: (2, 1, 1, "c")}
    assert inst.P == (frozenset({1}), frozenset({3}))
    assert inst.N == (frozenset(), frozenset({2}))


def test_unused_variable_has_empty_keys():
    inst = build_instance(Cnf(2, ((1, 1, 1),)))
    assert len(inst.variables[1].V) == 26


def test_sat_oracle():
    assert sat_brute_force(Cnf(1, ((1, 1, 1),))) == Assignment.from_true(1, {1})
    assert sat_brute_force(CONTRADICTION) is None
    # lexicographic: x1 = False first
    assert sat_brute_force(Cnf(3, ((1, -2, 3),))) == Assignment.from_true(3, set())
    with pytest.raises(TooLarge):
        sat_brute_force(Cnf(25, ((1, 1, 1),)))


def test_certify_single_literal():
    inst = build_instance(Cnf(1, ((1, 1, 1),)))
    path = certify(inst, Assignment.from_true(1, {1}), Selection(frozenset({1})))
    assert len(path) == 66 and path.sorts and path.efficient


def test_certify_hits_landmarks():
    inst = build_instance(Cnf(3, ((1, 2, 3),)))
    asg, sel = Assignment.from_true(3, {2}), Selection(frozenset({2}))
    path = certify(inst, asg, sel)
    states = path.tuples()
    i = states.index(assignment_landmark(inst, asg).elems)
    j = states.index(selection_landmark(inst, asg, sel).elems)
    assert 0 < i < j < len(states) - 1
    assert len(path) == inst.db


def test_certify_rejects_bad_selection():
    inst = build_instance(Cnf(3, ((1, 2, 3),)))
    asg = Assignment.from_true(3, {2})
    with pytest.raises(IncompatibleSelection):
        certify(inst, asg, Selection(frozenset({1})))
    with pytest.raises(IncompatibleSelection):
        certify(inst, asg, Selection(frozenset({1, 2})))
    assert compatible_selection(inst, asg) == Selection(frozenset({2}))


def test_check_theorem_examples():
    rep = check_theorem(Cnf(1, ((1, 1, 1),)))
    assert rep.sortable and rep.satisfiable and len(rep.certificate) == 66
    rep = check_theorem(CONTRADICTION)
    assert not rep.sortable and not rep.satisfiable and rep.certificate is None
    with pytest.raises(TooLarge):
        check_theorem(Cnf(5, ((1, 1, 1),)))


def test_single_clause_family_l2():
    for cnf in all_single_clause_cnfs(2):
        assert check_theorem(cnf).holds


def test_random_family_helpers():
    assert len(all_single_clause_cnfs(3)) == 216
    cnf = random_cnf(3, 2, random.Random(5), contradiction=True)
    assert sat_brute_force(cnf) is None
    with pytest.raises(ValueError):
        random_cnf(2, 1, random.Random(0), contradiction=True)


def test_unsat_instance_not_sortable_unguided():
    inst = build_instance(Cnf(2, ((1, 1, 1), (-1, -1, -1))))
    assert decide_efficiently_sortable(inst.s_phi) is None
