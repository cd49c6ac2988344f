"""Command-line entry point: ``pancake <subcommand> ...``.

Exit codes: 0 success, 1 negative answer or failed check, 2 equivalence
violation, 3 guard or node budget exceeded, 64 usage error, 74 I/O error.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from typing import Optional

from pancake.embeddings import KINDS, canonical_embedding, random_embedding
from pancake.errors import (
    DimacsSyntaxError,
    EquivalenceViolation,
    NotAPermutation,
    PancakeError,
    TooLarge,
)
from pancake.pathsearch import (
    DIAMETER_MAX_N,
    EXACT_DISTANCE_MAX_N,
    SearchStats,
    decide_with_stats,
    diameter,
    exact_distance,
    greedy_sort,
    verify_funnel,
)
from pancake.perm_core import FlipPath, Sequence, format_permutation, is_deadlock, parse_permutation
from pancake.reduction import build_instance, check_theorem, parse_dimacs

EXIT_OK = 0
EXIT_NO = 1
EXIT_VIOLATION = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64
EXIT_IO = 74

_INLINE = re.compile(r"^[\s\d,\[\]()]+$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise IOError(f"cannot read {source}: {exc.strerror}") from exc


def _write_text(dest: Optional[str], text: str) -> None:
    if dest is None or dest == "-":
        sys.stdout.write(text)
        return
    try:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOError(f"cannot write {dest}: {exc.strerror}") from exc


def read_permutation(arg: str) -> Sequence:
    """Inline permutation (``"5 2 3 1 4"``, ``5,2,3,1,4``), ``-`` for stdin, or a file path."""
    text = arg if _INLINE.match(arg) and arg.strip() else _read_text(arg)
    return parse_permutation(re.sub(r"[,\[\]()]", " ", text))


def trace_json(path: Optional[FlipPath], source: Sequence, stats: SearchStats) -> dict:
    if path is None:
        flips, trace, efficient = [], [FlipPath(source).db_trace()[0]], False
    else:
        flips, trace, efficient = list(path.flips), path.db_trace(), path.efficient
    return {
        "source": source.tolist(),
        "flips": flips,
        "efficient": efficient,
        "db_trace": trace,
        "stats": {"nodes": stats.nodes_expanded, "seconds": round(stats.elapsed, 6)},
    }


def _flips_text(path: FlipPath) -> str:
    return " ".join(map(str, path.flips)) if path.flips else "(none)"


# -- subcommands -------------------------------------------------------------


def cmd_sort(args) -> int:
    S = read_permutation(args.perm)
    stats = SearchStats()
    if args.greedy:
        started = time.perf_counter()
        path = greedy_sort(S)
        stats.nodes_expanded = len(path) + 1
        stats.elapsed = time.perf_counter() - started
    else:
        path = exact_distance(S, args.max_n or EXACT_DISTANCE_MAX_N, stats).witness
    if args.json:
        print(json.dumps(trace_json(path, S, stats)))
    else:
        print(f"flips: {_flips_text(path)}")
        print(f"length: {len(path)}")
    return EXIT_OK


def cmd_decide(args) -> int:
    S = read_permutation(args.perm)
    path, stats = decide_with_stats(S, node_budget=args.node_budget)
    if args.trace:
        _write_text(args.trace, json.dumps(trace_json(path, S, stats)) + "\n")
    if path is None:
        print("not efficiently sortable")
        return EXIT_NO
    print(f"efficiently sortable in {len(path)} flips: {_flips_text(path)}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    inst = build_instance(parse_dimacs(_read_text(args.cnf)))
    _write_text(args.out, format_permutation(inst.s_phi) + "\n")
    if args.layout:
        _write_text(args.layout, json.dumps(inst.layout_json(), indent=2) + "\n")
    if args.out and args.out != "-":
        print(f"n = {inst.n}, db = {inst.db}")
    return EXIT_OK


def cmd_check_theorem(args) -> int:
    cnf = parse_dimacs(_read_text(args.cnf))
    try:
        rep = check_theorem(cnf, node_budget=args.node_budget)
    except EquivalenceViolation as exc:
        print(f"VIOLATION: {exc}")
        return EXIT_VIOLATION
    print(f"l = {cnf.l}, k = {cnf.k}, n = {rep.n}, db = {rep.db}")
    print(f"sortable = {str(rep.sortable).lower()}, satisfiable = {str(rep.satisfiable).lower()}")
    if rep.certificate is not None:
        print(f"certificate: {len(rep.certificate)} efficient flips")
    print("equivalence holds")
    return EXIT_OK


def _check_embedding(emb) -> tuple[bool, int, str]:
    if emb.deadlock:
        ok = is_deadlock(emb.S)
        return ok, 1, "" if ok else "expected a deadlock"
    rep = verify_funnel(emb.S, emb.targets)
    if rep.holds:
        return True, rep.states_explored, ""
    if rep.unreachable_targets:
        return False, rep.states_explored, f"unreachable target {rep.unreachable_targets[0]}"
    return False, rep.states_explored, f"leaking path {_flips_text(rep.leaking_path)}"


def cmd_verify_gadgets(args) -> int:
    rng = random.Random(args.seed)
    failed = 0
    for kind in KINDS:
        states = 0
        reason = ""
        embeddings = [canonical_embedding(kind)]
        embeddings += [random_embedding(kind, rng) for _ in range(args.samples)]
        for emb in embeddings:
            ok, explored, why = _check_embedding(emb)
            states += explored
            if not ok:
                reason = f"{why} from {emb.S}"
                break
        if reason:
            failed += 1
            print(f"{kind} FAIL {reason}")
        else:
            print(f"{kind} OK {states}")
    return EXIT_NO if failed else EXIT_OK


def cmd_diameter(args) -> int:
    print(f"f({args.n}) = {diameter(args.n, max_n=args.max_n or DIAMETER_MAX_N)}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pancake", description="Pancake flipping: breakpoints, search and the 3-SAT reduction.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    budget = _Parser(add_help=False)
    budget.add_argument("--node-budget", type=_positive, default=None,
                        help="search node budget (default: $PANCAKE_NODE_BUDGET or 10^7)")

    p = sub.add_parser("sort", help="sort a permutation with flips")
    p.add_argument("perm", help='inline permutation, a file, or "-" for stdin')
    how = p.add_mutually_exclusive_group()
    how.add_argument("--exact", action="store_true", help="minimum number of flips (default)")
    how.add_argument("--greedy", action="store_true", help="fast heuristic, at most 2n flips")
    p.add_argument("--json", action="store_true", help="print the JSON trace")
    p.add_argument("--max-n", type=_positive, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("decide", parents=[budget], help="is the permutation efficiently sortable?")
    p.add_argument("perm")
    p.add_argument("--trace", metavar="FILE", help="write the JSON trace to FILE")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("reduce", help="build the permutation of a 3-CNF formula (DIMACS)")
    p.add_argument("cnf", help='DIMACS file or "-"')
    p.add_argument("--out", metavar="FILE", help="write the permutation to FILE")
    p.add_argument("--layout", metavar="FILE", help="write the layout JSON to FILE")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("check-theorem", parents=[budget],
                       help="compare efficient sortability with brute-force SAT")
    p.add_argument("cnf")
    p.set_defaults(func=cmd_check_theorem)

    p = sub.add_parser("verify-gadgets", help="check every gadget property on concrete embeddings")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=20, help="random re-embeddings per kind")
    p.set_defaults(func=cmd_verify_gadgets)

    p = sub.add_parser("diameter", help="pancake network diameter f(n) by BFS")
    p.add_argument("n", type=_positive)
    p.add_argument("--max-n", type=_positive, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_diameter)
    return parser


def run(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"pancake: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except IOError as exc:
        print(f"pancake: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NotAPermutation, DimacsSyntaxError) as exc:
        print(f"pancake: bad input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # e.g. a malformed PANCAKE_NODE_BUDGET
        print(f"pancake: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooLarge as exc:
        print(f"pancake: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PancakeError as exc:
        print(f"pancake: {exc}", file=sys.stderr)
        return EXIT_NO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
