"""Command line interface.

Verbs:
    run            execute an experiment matrix described by a JSON config
    summarize      build tables and convergence data from saved traces
    list-problems  print the benchmark registry
"""
from __future__ import annotations

import argparse
import sys

from .benchmarks import get_problem, problem_keys
from .exceptions import AegisError
from .harness import ExperimentConfig, run_matrix, summarize


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aegis",
        description="Asynchronous epsilon-greedy Bayesian optimisation harness",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", help="execute an experiment matrix")
    run.add_argument("--config", required=True, help="JSON experiment config")
    run.add_argument("--out", required=True, help="directory for trace files")
    run.add_argument("--jobs", type=int, default=1, help="parallel workers")
    run.add_argument("--seed", type=int, default=None,
                     help="override the config base seed")
    run.add_argument("--only", default=None,
                     help="restrict to 'problem,method,q,repeat' ('*' wildcards)")

    summ = sub.add_parser("summarize", help="summarise saved traces")
    summ.add_argument("results", help="directory containing trace files")
    summ.add_argument("--out", required=True, help="directory for summary output")
    summ.add_argument("--alpha", type=float, default=0.05,
                      help="significance level for equivalence tests")

    sub.add_parser("list-problems", help="print the benchmark registry")
    return parser


def cmd_run(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    if args.seed is not None:
        cfg.base_seed = args.seed
    manifest = run_matrix(cfg, args.out, jobs=args.jobs, only=args.only)
    print(
        f"completed {len(manifest['completed'])}, "
        f"skipped {len(manifest['skipped'])}, "
        f"failed {len(manifest['failed'])}"
    )
    return 1 if manifest["failed"] else 0


def cmd_summarize(args) -> int:
    tables = summarize(args.results, args.out, alpha=args.alpha)
    print(f"wrote summaries for {len(tables)} problem/q combination(s) to {args.out}")
    return 0


def cmd_list_problems(args) -> int:
    print(f"{'key':18s} {'d':>3s} {'bounds':32s} {'f_min':>16s}")
    for key in problem_keys():
        p = get_problem(key)
        lo, hi = p.bounds.lower, p.bounds.upper
        if len(set(zip(lo, hi))) == 1:
            span = f"[{lo[0]:g}, {hi[0]:g}]^{p.d}"
        else:
            span = " x ".join(f"[{a:g}, {b:g}]" for a, b in zip(lo, hi))
        print(f"{key:18s} {p.d:3d} {span:32s} {p.f_min:16.9g}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "run": cmd_run,
        "summarize": cmd_summarize,
        "list-problems": cmd_list_problems,
    }[args.verb]
    try:
        return handler(args)
    except AegisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
