"""``selfnest`` command line: one bracket tree per input line."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from . import approx, bench, dag, oracle, profile
from .randgen import MASK64, GenSpec, random_tree
from .tree import TreeSyntaxError, parse_tree, serialize_canonical


class UsageError(Exception):
    pass


def read_trees(source: str):
    """Parse trees from a file or ``-`` (stdin).

    Blank lines, ``#`` comments and stats lines (``n_in=...``) are skipped,
    so the output of ``selfnest nest`` can be fed back in.
    """
    text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
    trees = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#") or s.startswith("n_in="):
            continue
        try:
            trees.append(parse_tree(s))
        except TreeSyntaxError as e:
            raise TreeSyntaxError(f"line {lineno}: {e.args[0].rsplit(' at byte', 1)[0]}", e.offset) from None
    return trees


def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def stats_line(n_in: int, n_out: int, delta) -> str:
    return f"n_in={n_in} n_out={n_out} dist={abs(n_out - n_in)} delta={delta.numerator}/{delta.denominator}"


def _approx_one(t, embedded, propagation, carry, use_oracle):
    if use_oracle:
        if len(t) > oracle.MAX_ORACLE_NODES:
            raise UsageError(f"oracle refuses trees with more than {oracle.MAX_ORACLE_NODES} nodes ({len(t)} given)")
        if embedded:
            outs = oracle.brute_nest_embedded_all(t)
        else:
            budget = approx.nest(t).n_output
            outs = [oracle.brute_nest(t, budget)]
        lines = [serialize_canonical(w) for w in outs]
        n_out = len(outs[0])
        n_opt = len(outs)
    else:
        r = approx.nest_embedded(t, carry) if embedded else approx.nest(t, propagation)
        lines = [serialize_canonical(r.tree)]
        n_out = r.n_output
        n_opt = 1
    delta = (
        approx.delta_nest_embedded_from_counts(len(t), n_out)
        if embedded
        else approx.delta_nest_from_counts(len(t), n_out)
    )
    return lines + [stats_line(len(t), n_out, delta)], n_opt


def cmd_nest(args, embedded=None):
    embedded = args.embedded if embedded is None else embedded
    trees = read_trees(args.input)
    fn = partial(_approx_one, embedded=embedded, propagation=args.propagation, carry=args.carry, use_oracle=args.oracle)
    for lines, n_opt in _map(fn, trees, args.jobs):
        if n_opt > 1:
            print(f"warning: {n_opt} non-isomorphic optima", file=sys.stderr)
        print("\n".join(lines))
    return 0


def cmd_profile(args):
    for t in read_trees(args.input):
        print(profile.compute_profile(t).render())
    return 0


def cmd_dag(args):
    for t in read_trees(args.input):
        d = dag.reduce(t)
        if args.dot:
            sys.stdout.write(dag.to_dot(d))
        else:
            print(f"classes={len(d)} height={d.height} linear={str(dag.is_linear(d)).lower()} nodes={dag.node_count(d)}")
            for i, j, n in d.edges():
                print(f"  c{i} -> c{j} x{n}")
    return 0


def cmd_check(args):
    for t in read_trees(args.input):
        print(str(profile.is_self_nested_profile(profile.compute_profile(t))).lower())
    return 0


def cmd_random(args):
    if args.nodes < 1 or args.count < 1:
        raise UsageError("--nodes and --count must be >= 1")
    for k in range(args.count):
        t = random_tree(GenSpec(args.nodes, (args.seed + k) & MASK64))
        print(serialize_canonical(t))
    return 0


def cmd_bench(args):
    sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    records = bench.run_benchmark(sizes, args.trials, args.seed, args.jobs)
    bad = bench.violations(records)
    agg = bench.aggregate(records)
    if args.csv:
        Path(args.csv).write_text(bench.to_csv(records), encoding="utf-8")
    if args.svg:
        bench.plot_svg(agg, args.svg)
    if bad:
        Path(args.violations).write_text(bench.format_violations(bad), encoding="utf-8")
    sys.stdout.write(bench.format_summary(agg, len(bad)))
    return 0


def cmd_oracle(args):
    args.oracle = True
    return cmd_nest(args, embedded=args.which == "nest-embedded")


def _add_input(p):
    p.add_argument("input", nargs="?", default="-", help="file with one tree per line (default: stdin)")


def _add_approx_flags(p):
    p.add_argument("--propagation", choices=approx.PROPAGATIONS, default="clamped")
    p.add_argument("--carry", choices=approx.CARRY_RULES, default="always")
    p.add_argument("--jobs", type=int, default=1)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfnest", description="Self-nested approximations of unordered trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="print height profiles")
    _add_input(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("dag", help="DAG reduction")
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    _add_input(p)
    p.set_defaults(func=cmd_dag)

    p = sub.add_parser("nest", help="nearest embedding self-nested tree (or embedded, with --embedded)")
    p.add_argument("--embedded", action="store_true")
    p.add_argument("--oracle", action="store_true", help="brute-force search (small trees only)")
    _add_approx_flags(p)
    _add_input(p)
    p.set_defaults(func=cmd_nest)

    p = sub.add_parser("nest-embedded", help="nearest embedded self-nested tree")
    p.add_argument("--oracle", action="store_true")
    _add_approx_flags(p)
    _add_input(p)
    p.set_defaults(func=partial(cmd_nest, embedded=True))

    p = sub.add_parser("check-selfnested", help="print true/false per tree")
    _add_input(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("random", help="seeded random trees (uniform attachment)")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("bench", help="random-tree benchmark")
    p.add_argument("--sizes", default=",".join(map(str, bench.DEFAULT_SIZES)))
    p.add_argument("--trials", type=int, default=bench.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=bench.DEFAULT_SEED)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--svg", metavar="PATH")
    p.add_argument("--violations", metavar="PATH", default="bench_violations.txt")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="brute-force approximations (<= 12 nodes)")
    p.add_argument("which", choices=("nest", "nest-embedded"))
    _add_approx_flags(p)
    _add_input(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except approx.NegativeRowError as e:
        print(f"selfnest: internal assertion: {e}", file=sys.stderr)
        return 2
    except (TreeSyntaxError, UsageError, oracle.OracleError, profile.UnrealizableProfile, ValueError, OSError) as e:
        print(f"selfnest: {e}", file=sys.stderr)
        return 1
    except AssertionError as e:
        print(f"selfnest: internal assertion: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
