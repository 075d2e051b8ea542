"""Command-line front end.

Exit codes: 0 success / implied, 1 not implied or a failed check,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

import numpy as np

from .enumeration import all_parent_graphs, singleton_queries
from .fileio import EXAMPLES, GraphFormatError, format_graph, load_example, load_graph, pattern_to_dot
from .gaussian import GaussianOracle, OracleStatus
from .graph import GraphError, IndexPartition, ParentGraph, Query, QueryError, defining_independencies
from .induced import (
    concentration_graph_without_M,
    covariance_graph_given_C,
    induced_components,
    moral_graph,
    partial_ancestor_graph,
)
from .separation import InternalInconsistencyError, check_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SWEEP_DMAX_CAP = 6
KINDS = ("ancestor", "coeff", "covariance", "concentration", "moral")


class UsageError(Exception):
    pass


def node_set(text: str) -> frozenset[int]:
    try:
        nodes = frozenset(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated node labels, got {text!r}")
    if not nodes:
        raise argparse.ArgumentTypeError("empty node set")
    return nodes


def _graph(args) -> ParentGraph:
    if getattr(args, "example", None):
        return load_example(args.example)
    if not args.graph:
        raise UsageError("a graph file (or --example) is required")
    return load_graph(args.graph)


def _query(args, G: ParentGraph) -> Query:
    if args.alpha is None or args.beta is None:
        raise UsageError("--alpha and --beta are required")
    return Query(args.alpha, args.beta, args.cond or frozenset()).validate(G.d)


def _verdict_word(implied: bool) -> str:
    return "implied" if implied else "not implied"


def cmd_check(args, out) -> int:
    G = _graph(args)
    q = _query(args, G)
    v = check_all(G, q)
    print(f"query    {q}", file=out)
    print(f"verdict  {_verdict_word(v.implied)}", file=out)
    for route, val in v.per_route.items():
        print(f"  {route:<14} {_verdict_word(val)}", file=out)
    if v.witness is not None:
        print(f"witness  {v.witness}", file=out)
    return EXIT_OK if v.implied else EXIT_FAIL


def cmd_defining(args, out) -> int:
    G = _graph(args)
    for q in defining_independencies(G):
        print(q, file=out)
    return EXIT_OK


def cmd_induced(args, out) -> int:
    G = _graph(args)
    kind = args.kind
    if kind in ("ancestor", "coeff", "moral") and args.a is None:
        raise UsageError(f"--a is required for kind {kind}")
    if kind == "ancestor":
        M = partial_ancestor_graph(G, args.a).labeled()
        style = "directed"
    elif kind == "coeff":
        p = IndexPartition.split(G.d, args.a)
        M = induced_components(G, p).P_a_given_b
        style = "directed"
    elif kind == "covariance":
        M = covariance_graph_given_C(G, args.cond or frozenset())
        style = "covariance"
    elif kind == "concentration":
        M = concentration_graph_without_M(G, _query(args, G))
        style = "concentration"
    else:
        if max(args.a) > G.d:
            raise UsageError(f"--a mentions a node outside 1..{G.d}")
        M = moral_graph(G, args.a)
        style = "concentration"
    if args.format == "dot":
        out.write(pattern_to_dot(M, style))
    else:
        print(M.to_text(), file=out)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    G = _graph(args)
    q = _query(args, G)
    v = check_all(G, q, witness=False)
    res = GaussianOracle(G, n_samples=args.samples, seed=args.seed).verify(q)
    print(f"query {q}", file=out)
    for route, val in v.per_route.items():
        print(f"route {route} {_verdict_word(val)}", file=out)
    print(f"oracle {res.status.value} rounds {res.rounds}", file=out)
    for k, x in enumerate(res.max_abs, start=1):
        print(f"sample {k} max_abs {x:.6e}", file=out)
    agree = res.agrees_with(v.implied)
    print(f"agreement {'yes' if agree else 'no'}", file=out)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_sweep(args, out) -> int:
    if not 1 <= args.dmax <= SWEEP_DMAX_CAP:
        raise UsageError(f"--dmax must be in 1..{SWEEP_DMAX_CAP}")
    rng = np.random.default_rng(args.seed)
    header = f"{'d':>2} {'graphs':>7} {'queries':>8} {'implied':>8} {'not_impl':>8} {'disagree':>8}"
    if args.oracle:
        header += f" {'oracle':>7} {'agree':>7} {'inconcl':>7} {'contra':>7}"
    print(header, file=out)
    started = time.perf_counter()
    totals = np.zeros(4, dtype=int)
    for d in range(1, args.dmax + 1):
        graphs = queries = implied = 0
        n_graphs = 2 ** (d * (d - 1) // 2)
        picked = set()
        if args.oracle:
            picked = set(rng.choice(n_graphs, size=min(args.subsample, n_graphs), replace=False).tolist())
        o_n = o_agree = o_inc = o_contra = 0
        for idx, G in enumerate(all_parent_graphs(d)):
            graphs += 1
            oracle = GaussianOracle(G, args.samples, seed=args.seed + idx) if idx in picked else None
            for q in singleton_queries(G):
                try:
                    v = check_all(G, q, witness=False)
                except InternalInconsistencyError as exc:
                    print(f"DISAGREEMENT at d={d}: {exc}", file=out)
                    print("counterexample graph:", file=out)
                    out.write(format_graph(G))
                    print(f"query {q}", file=out)
                    return EXIT_FAIL
                queries += 1
                implied += v.implied
                if oracle is not None:
                    res = oracle.verify(q)
                    o_n += 1
                    if res.agrees_with(v.implied):
                        o_agree += 1
                    elif res.status is OracleStatus.INCONCLUSIVE:
                        o_inc += 1
                    else:
                        o_contra += 1
        line = f"{d:>2} {graphs:>7} {queries:>8} {implied:>8} {queries - implied:>8} {0:>8}"
        if args.oracle:
            line += f" {o_n:>7} {o_agree:>7} {o_inc:>7} {o_contra:>7}"
        print(line, file=out)
        totals += (graphs, queries, implied, queries - implied)
    print(
        f"total {totals[0]} graphs, {totals[1]} queries, {totals[2]} implied, "
        f"{totals[3]} not implied, 0 disagreements",
        file=out,
    )
    if args.timing:
        print(f"elapsed {time.perf_counter() - started:.2f}s", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dagmatrix",
        description="Independence statements implied by a parent graph, via edge matrices.",
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def graph_args(p):
        p.add_argument("graph", nargs="?", help="graph file ('d <n>' header, then '<i> <j>' arrows)")
        p.add_argument("--example", choices=EXAMPLES, help="use a bundled example graph instead of a file")

    def query_args(p, required=True):
        p.add_argument("--alpha", type=node_set, required=required, help="comma-separated nodes")
        p.add_argument("--beta", type=node_set, required=required, help="comma-separated nodes")
        p.add_argument("--cond", type=node_set, help="conditioning set; omit for none")

    p = sub.add_parser("check", help="decide alpha _||_ beta | cond by every route")
    graph_args(p)
    query_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("defining", help="list the defining independencies")
    graph_args(p)
    p.set_defaults(func=cmd_defining)

    p = sub.add_parser("induced", help="print an induced graph")
    graph_args(p)
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--a", type=node_set, help="set a (ancestor, coeff) or seed set (moral)")
    query_args(p, required=False)
    p.add_argument("--format", choices=("dot", "text"), default="text")
    p.set_defaults(func=cmd_induced)

    p = sub.add_parser("oracle", help="check a query numerically on random Gaussian systems")
    graph_args(p)
    query_args(p)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="all graphs up to --dmax nodes; every route must agree")
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--oracle", action="store_true", help="also run the Gaussian oracle on a subsample")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subsample", type=int, default=10, help="graphs per d checked by the oracle")
    p.add_argument("--timing", action="store_true", help="print elapsed time (output no longer reproducible)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    if hasattr(out, "reconfigure"):
        out.reconfigure(encoding="utf-8")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (GraphFormatError, GraphError, QueryError, UsageError) as exc:
        print(f"dagmatrix: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
