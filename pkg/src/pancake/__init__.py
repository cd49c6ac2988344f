"""Pancake flipping: breakpoints, efficient-flip search, gadgets and the 3-SAT reduction."""

from pancake.embeddings import KINDS, canonical_embedding, random_embedding
from pancake.errors import *  # noqa: F401,F403
from pancake.gadgets import clause, dock, fork, hook, lambda_block, literals, lock, variable
from pancake.pathsearch import (
    DistanceResult,
    FunnelReport,
    SearchStats,
    decide_efficiently_sortable,
    diameter,
    exact_distance,
    greedy_sort,
    verify_funnel,
)
from pancake.perm_core import (
    FlipPath,
    Sequence,
    breakpoints,
    db,
    efficient_flips,
    flip,
    identity,
    is_deadlock,
    make_sequence,
)
from pancake.reduction import (
    Assignment,
    Cnf,
    ReductionInstance,
    Selection,
    build_instance,
    certify,
    check_theorem,
    parse_dimacs,
    sat_brute_force,
)

__version__ = "0.1.0"
