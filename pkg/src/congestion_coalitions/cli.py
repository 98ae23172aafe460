"""Command line entry point.

Exit codes: 0 clean, 2 degenerate instance (tied grand-coalition optimizers
or a partition without pure equilibria), 1 error or theorem counterexample.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import core_model as cm
from .report import (BetaGrid, InstanceConfig, InstanceError, emit_figure_data, figure_rows_to_csv, load_instance,
                     report_is_degenerate, report_to_json, run_analysis)
from .stability import analyze_stability
from .theory import blocking_graph, detect_cycles, verify_theorem3, verify_theorem4

EXIT_OK, EXIT_ERROR, EXIT_DEGENERATE = 0, 1, 2


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load(args) -> InstanceConfig:
    config = load_instance(args.instance)
    if getattr(args, "beta_grid", None):
        config.beta = BetaGrid.parse(args.beta_grid)
        config.beta.values()
    if args.epsilon is not None:
        if not args.epsilon > 0:
            raise InstanceError("--epsilon must be positive")
        config.epsilon = args.epsilon
    return config


def _status(report) -> int:
    return EXIT_DEGENERATE if report_is_degenerate(report) else EXIT_OK


def cmd_analyze(args) -> int:
    config = _load(args)
    if args.cycles:
        config.cycle_detection = True
    report = run_analysis(config, sweep=False)
    _write(report_to_json(report), args.out)
    return _status(report)


def cmd_sweep(args) -> int:
    config = _load(args)
    if args.mu1:
        try:
            config.sweep = [float(x) for x in args.mu1.split(",")]
        except ValueError:
            raise InstanceError(f"--mu1 must be a comma separated list of numbers, got {args.mu1!r}") from None
    report = run_analysis(config, sweep=True)
    _write(report_to_json(report), args.out)
    if args.csv:
        _write(figure_rows_to_csv(emit_figure_data(report)), args.csv)
    return _status(report)


def cmd_check(args) -> int:
    config = _load(args)
    with cm.tolerance(config.epsilon):
        model = config.model()
        analysis = analyze_stability(model)
        verdicts = {"theorem3": verify_theorem3(model, analysis), "theorem4": verify_theorem4(model, analysis)}
    _write(json.dumps({k: v.as_dict() for k, v in verdicts.items()}, indent=2, sort_keys=True) + "\n", args.out)
    if any(v.counterexamples for v in verdicts.values()):
        return EXIT_ERROR
    degenerate = analysis.cache.gc_tie is not None or analysis.cache.no_pure_ne
    return EXIT_DEGENERATE if degenerate else EXIT_OK


def cmd_cycles(args) -> int:
    config = _load(args)
    if args.length_bound is not None:
        config.cycle_length_bound = args.length_bound
    with cm.tolerance(config.epsilon):
        model = config.model()
        analysis = analyze_stability(model)
        graph = blocking_graph(model, args.beta, analysis)
        cycles = detect_cycles(graph, length_bound=config.cycle_length_bound)
    lines = [f"beta={args.beta:g} nodes={graph.number_of_nodes()} edges={graph.number_of_edges()} "
             f"cycles={len(cycles)}"]
    for cycle in sorted(cycles, key=repr):
        lines.append(" -> ".join(f"{p} {list(map(list, prof))}" for p, prof in cycle + cycle[:1]))
    _write("\n".join(lines) + "\n", args.out)
    degenerate = analysis.cache.gc_tie is not None or analysis.cache.no_pure_ne
    return EXIT_DEGENERATE if degenerate else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="congestion-coalitions",
                                     description="Stability of coalition structures in atomic congestion games.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=True):
        p.add_argument("instance", help="YAML instance file")
        if grid:
            p.add_argument("--beta-grid", metavar="START:STOP:STEP", help="also report stable partitions on this grid")
        p.add_argument("--epsilon", type=float, help="comparison tolerance (default from the instance, 1e-9)")
        p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("analyze", help="full stability report for one instance")
    common(p)
    p.add_argument("--cycles", action="store_true", help="include blocking-graph cycles")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="scan the best link's mean")
    common(p)
    p.add_argument("--mu1", help="comma separated mu1 values (overrides the instance's sweep list)")
    p.add_argument("--csv", help="write figure data (one row per stable interval) here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="theorem verdicts only")
    common(p, grid=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cycles", help="cycles of the blocking graph at one cost")
    common(p, grid=False)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--length-bound", type=int, help="longest cycle to look for (default from the instance, 2)")
    p.set_defaults(func=cmd_cycles)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InstanceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
