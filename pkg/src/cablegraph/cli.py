"""Command-line front end: generation, rollouts, oracle checks, benchmarks.

Exit codes are a stable contract:

  0  success / reachable
  1  input, parse, or validation failure
  2  bad generator spec
  3  rollout ended BudgetExceeded
  4  rollout ended Stuck
  5  oracle result unknown within the depth bound
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import corpus as corpus_mod
from .diagram import Diagram, parse, potential, serialize
from .errors import CableGraphError, InvalidDiagramError, MCDParseError, UnknownKnotError
from .moves import NoiseConfig
from .planner import DEFAULT_TIER_BUDGETS, FALLBACK_BUDGET, Budget, Outcome, bench, format_trace, run

ORACLE_MAX_CROSSINGS = 12


def _add_source_args(p: argparse.ArgumentParser):
    p.add_argument("--input", help="read a diagram from an MCD file")
    p.add_argument("--knot", help="generate a named knot class")
    p.add_argument("--n", type=int, help="size parameter for sized classes (twist, braid3)")
    p.add_argument("--slack", type=int, default=0, help="trivial self-loop padding count")
    p.add_argument("--random", action="store_true", help="generate a random tangle")
    p.add_argument("--cables", type=int, default=2, help="cable count for --random")
    p.add_argument("--crossings", type=int, default=0, help="crossing count for --random")
    p.add_argument("--seed", type=int, default=0, help="seed for --random and for noise")


def _load_source(args) -> tuple[Diagram, Optional[int]]:
    """Build the diagram from --input or generator flags; returns (diagram, tier)."""
    chosen = [bool(args.input), bool(args.knot), bool(args.random)]
    if sum(chosen) != 1:
        raise SystemExit2("exactly one of --input, --knot, --random is required")
    if args.input:
        text = Path(args.input).read_text(encoding="utf-8")
        return parse(text), None
    if args.random:
        return corpus_mod.generate_random(args.seed, args.cables, args.crossings), None
    params = {"slack": args.slack}
    if args.n is not None:
        params["n"] = args.n
    spec = corpus_mod.KnotSpec(args.knot, params)
    return corpus_mod.generate(spec), spec.tier


class SystemExit2(Exception):
    """Bad generator spec or usage; mapped to exit code 2."""


def _noise_from_args(args) -> Optional[NoiseConfig]:
    if args.noise_fail == 0.0 and args.noise_spawn == 0.0:
        return None
    return NoiseConfig(p_fail=args.noise_fail, p_spawn=args.noise_spawn, seed=args.seed)


def cmd_gen(args) -> int:
    diagram, tier = _load_source(args)
    text = serialize(diagram)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    print(f"crossings: {len(diagram.crossings)}")
    print(f"tier: {tier if tier is not None else '-'}")
    return 0


def cmd_run(args) -> int:
    diagram, tier = _load_source(args)
    if args.budget is not None:
        budget = Budget(args.budget)
    else:
        budget = Budget(DEFAULT_TIER_BUDGETS.get(tier, FALLBACK_BUDGET))
    trace = run(diagram, budget, _noise_from_args(args))
    if args.trace_out:
        Path(args.trace_out).write_text(format_trace(trace), encoding="utf-8")
    if args.format == "machine":
        print(
            f"{trace.outcome.value}\t{trace.disentangling_actions}"
            f"\t{trace.recovery_actions}\t{trace.total_actions}"
        )
    else:
        print(f"outcome: {trace.outcome.value}")
        print(f"disentangling actions: {trace.disentangling_actions}")
        print(f"recovery actions: {trace.recovery_actions}")
        print(f"total actions: {trace.total_actions}")
    if trace.outcome is Outcome.BUDGET_EXCEEDED:
        return 3
    if trace.outcome is Outcome.STUCK:
        return 4
    return 0


def cmd_bench(args) -> int:
    try:
        entries = corpus_mod.load_golden_corpus()
    except (CableGraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.tier is not None:
        entries = [e for e in entries if e.tier == args.tier]
    budgets = dict(DEFAULT_TIER_BUDGETS)
    if args.budget is not None:
        budgets = {tier: args.budget for tier in budgets}
    noise = _noise_from_args(args)
    table = bench(entries, budgets=budgets, repetitions=args.seeds, noise=noise)
    if args.format == "machine":
        sys.stdout.write(table.to_delimited())
    else:
        sys.stdout.write(table.to_text())
    if args.plot_dir:
        from .figures import render_stats_figures

        report_path = Path(args.plot_dir) / "bench_report.tsv"
        report_path.parent.mkdir(parents=True, exist_ok=True)
        report_path.write_text(table.to_delimited(), encoding="utf-8")
        for path in render_stats_figures(table, args.plot_dir):
            print(f"wrote {path}")
        print(f"wrote {report_path}")
    return 0


def cmd_oracle(args) -> int:
    diagram, _ = _load_source(args)
    n_crossings = len(diagram.crossings)
    if n_crossings > ORACLE_MAX_CROSSINGS:
        print(
            f"error: input has {n_crossings} crossings, oracle bound is "
            f"{ORACLE_MAX_CROSSINGS}",
            file=sys.stderr,
        )
        return 1
    result = corpus_mod.bfs_solve(diagram, max_depth=args.max_depth)
    if result.reachable is None:
        print(f"unknown within depth {args.max_depth}")
        return 5
    if not result.reachable:
        print("unreachable")
        return 5
    print(f"reachable in {result.min_moves} disentangling actions")
    for i, action in enumerate(result.witness, start=1):
        print(f"witness {i}: {action.kind.value}")
    final = corpus_mod.replay_witness(diagram, result.witness)
    if final.cable_visits or potential(final) != 0:
        print("error: witness replay did not empty the workspace", file=sys.stderr)
        return 1
    print("witness replay: workspace empty")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cablegraph",
        description="Represent, analyze, and disentangle multi-cable knot diagrams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a diagram and write it as MCD")
    _add_source_args(p)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run the disentangling loop on a diagram")
    _add_source_args(p)
    p.add_argument("--budget", type=int, help="max disentangling actions")
    p.add_argument("--noise-fail", type=float, default=0.0)
    p.add_argument("--noise-spawn", type=float, default=0.0)
    p.add_argument("--trace-out", help="write the step trace to this path")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="benchmark the golden corpus per tier")
    p.add_argument("--tier", type=int, help="restrict to one tier")
    p.add_argument("--budget", type=int, help="override the per-tier budgets")
    p.add_argument("--noise-fail", type=float, default=0.0)
    p.add_argument("--noise-spawn", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0, help="base noise seed")
    p.add_argument("--seeds", type=int, default=1, help="repetitions per diagram")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--plot-dir", help="also write figures and a TSV report here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exhaustively solve a small diagram")
    _add_source_args(p)
    p.add_argument("--max-depth", type=int, default=corpus_mod.DEFAULT_ORACLE_DEPTH)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MCDParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvalidDiagramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UnknownKnotError, SystemExit2) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint():
    sys.exit(main())
