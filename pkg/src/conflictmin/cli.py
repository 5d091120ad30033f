"""Command-line experiment runner.

Loads an edge list, draws initial opinions from a chosen distribution, runs
one node-selection method, and reports the exact drop in the conflict
measure. Reports are emitted as JSON plus a one-line table row; a sweep
subcommand replays a whole method-by-budget grid into a CSV for plotting.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .dynamics import ConflictMeasure, OpinionVector, measure
from .graph import EdgeListError, load_edge_list
from .greedy import (
    Method,
    SelectionResult,
    baseline_pagerank,
    baseline_random,
    brute_force,
    greedy_ac,
    greedy_exact,
)
from .linsolve import ConvergenceError, SolveOptions

CSV_COLUMNS = [
    "dataset", "n", "m", "method", "measure", "k", "epsilon", "seed",
    "delta_f", "gamma", "seconds",
]


class OpinionDistribution(Enum):
    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"
    POWERLAW = "powerlaw"


def generate_opinions(n, distribution, param=None, seed=0, clamp=False):
    """Draw n initial opinions in [0, 1], deterministic per seed.

    uniform: U[0, 1). exponential: rate param (default 1). powerlaw: tail
    exponent param (default 2.5), sampled from the corresponding Pareto
    tail. The unbounded distributions are mapped into [0, 1] by dividing by
    the realized maximum, or by clamping at 1 when clamp=True.
    """
    rng = np.random.default_rng(seed)
    if distribution is OpinionDistribution.UNIFORM:
        return OpinionVector(rng.random(n))
    if distribution is OpinionDistribution.EXPONENTIAL:
        rate = 1.0 if param is None else param
        if rate <= 0:
            raise ValueError(f"exponential rate must be positive, got {rate}")
        raw = rng.exponential(scale=1.0 / rate, size=n)
    elif distribution is OpinionDistribution.POWERLAW:
        alpha = 2.5 if param is None else param
        if alpha <= 1:
            raise ValueError(f"power-law exponent must exceed 1, got {alpha}")
        raw = rng.pareto(alpha - 1.0, size=n)
    else:
        raise ValueError(f"unknown distribution {distribution!r}")
    if clamp:
        return OpinionVector(np.minimum(raw, 1.0))
    return OpinionVector(raw / raw.max())


@dataclass
class ExperimentConfig:
    graph: str
    measure: ConflictMeasure
    method: Method
    k: int
    epsilon: float = 0.5
    opinions: OpinionDistribution = OpinionDistribution.UNIFORM
    dist_param: float | None = None
    seed: int = 42
    solver_tol: float | None = None
    solver_maxiter: int | None = None
    sketch_dim: int | None = None
    theoretical: bool = False
    clamp_opinions: bool = False
    pagerank_damping: float = 0.85
    reference_delta: float | None = None
    out: str | None = None
    csv_out: str | None = None

    def echo(self):
        d = asdict(self)
        d["measure"] = self.measure.value
        d["method"] = self.method.value
        d["opinions"] = self.opinions.value
        return d


@dataclass
class RunReport:
    """Config echo plus the selection outcome and its exact objective drop."""

    config: dict
    n: int
    m: int
    selection: SelectionResult
    chosen_original_ids: list[int]
    f_initial: float
    f_final: float
    delta_f: float
    gamma: float | None = None
    polarization_initial: float | None = None
    polarization_final: float | None = None
    notes: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        d["selection"] = self.selection.to_dict()
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["selection"] = SelectionResult.from_dict(d["selection"])
        return cls(**d)


def _measure_opts(config):
    return SolveOptions(
        tolerance=config.solver_tol if config.solver_tol is not None else 1e-8,
        max_iterations=config.solver_maxiter,
    )


def _select(g, s, config):
    kind, k = config.measure, config.k
    opts = _measure_opts(config)
    if config.method is Method.GREEDY:
        return greedy_exact(g, s, kind, k, opts)
    if config.method is Method.GREEDY_AC:
        # explicit solver overrides propagate to the sketch solves; otherwise
        # the sketch builder picks its own practical tolerances
        ac_opts = opts if (config.solver_tol or config.solver_maxiter) else None
        return greedy_ac(
            g, s, kind, k, config.epsilon, config.seed,
            opts=ac_opts, p=config.sketch_dim, theoretical=config.theoretical,
        )
    if config.method is Method.RANDOM:
        return baseline_random(g, k, config.seed)
    if config.method is Method.PAGERANK:
        return baseline_pagerank(g, k, damping=config.pagerank_damping)
    if config.method is Method.BRUTE_FORCE:
        return brute_force(g, s, kind, k, opts)
    raise ValueError(f"unknown method {config.method!r}")


def run(config):
    """Execute one experiment and return its report."""
    g, id_map = load_edge_list(config.graph)
    if config.k >= g.n and config.method not in (Method.RANDOM, Method.PAGERANK):
        raise ValueError(f"k={config.k} must be below n={g.n} after component extraction")
    s = generate_opinions(
        g.n, config.opinions, config.dist_param, config.seed, config.clamp_opinions
    )
    opts = _measure_opts(config)

    t0 = time.perf_counter()
    f_initial = measure(g, s, config.measure, opts)
    selection = _select(g, s, config)
    f_final = measure(g, s.zeroed(selection.chosen), config.measure, opts)
    elapsed = time.perf_counter() - t0

    delta_f = f_initial - f_final
    gamma = None
    if config.reference_delta is not None:
        if config.reference_delta <= 0:
            raise ValueError("reference delta must be positive")
        gamma = abs(delta_f - config.reference_delta) / config.reference_delta

    is_controversy = config.measure is ConflictMeasure.CONTROVERSY
    report = RunReport(
        config=config.echo(),
        n=g.n,
        m=g.m,
        selection=selection,
        chosen_original_ids=[id_map.to_original(i) for i in selection.chosen],
        f_initial=f_initial,
        f_final=f_final,
        delta_f=delta_f,
        gamma=gamma,
        polarization_initial=f_initial / g.n if is_controversy else None,
        polarization_final=f_final / g.n if is_controversy else None,
        notes={
            "node_ids": "remapped to 0..n-1 in first-seen order; largest component only",
            "opinion_scaling": "clamped at 1" if config.clamp_opinions else "divided by realized max",
            "total_seconds": elapsed,
        },
    )
    return report


def _append_csv(path, report):
    path = Path(path)
    new = not path.exists()
    with path.open("a", newline="") as fh:
        writer = csv.writer(fh)
        if new:
            writer.writerow(CSV_COLUMNS)
        writer.writerow(_csv_row(report))


def _csv_row(report):
    cfg = report.config
    return [
        Path(cfg["graph"]).name, report.n, report.m, cfg["method"], cfg["measure"],
        cfg["k"], cfg["epsilon"], cfg["seed"], repr(report.delta_f),
        "" if report.gamma is None else repr(report.gamma),
        f"{report.selection.elapsed:.3f}",
    ]


def _print_table_row(report):
    cfg = report.config
    header = (
        f"{'dataset':<20} {'n':>8} {'m':>9} {'method':<12} {'measure':<12} "
        f"{'k':>4} {'delta_f':>14} {'gamma':>10} {'seconds':>9}"
    )
    gamma = "-" if report.gamma is None else f"{report.gamma:.2e}"
    row = (
        f"{Path(cfg['graph']).name:<20} {report.n:>8} {report.m:>9} "
        f"{cfg['method']:<12} {cfg['measure']:<12} {cfg['k']:>4} "
        f"{report.delta_f:>14.6f} {gamma:>10} {report.selection.elapsed:>9.3f}"
    )
    print(header)
    print(row)


def _run_command(args):
    config = _config_from_args(args)
    report = run(config)
    _print_table_row(report)
    if config.out:
        Path(config.out).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    if config.csv_out:
        _append_csv(config.csv_out, report)
    return 0


def _sweep_command(args):
    methods = [Method(tok) for tok in args.methods.split(",") if tok]
    ks = list(range(args.k_step, args.k_max + 1, args.k_step))
    if not ks:
        raise ValueError("empty k grid")
    out = Path(args.out)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for method in methods:
            for k in ks:
                config = _config_from_args(args, method=method, k=k)
                report = run(config)
                writer.writerow(_csv_row(report))
                fh.flush()
                print(
                    f"{method.value} k={k}: delta_f={report.delta_f:.6f} "
                    f"({report.selection.elapsed:.2f}s)"
                )
    return 0


def _config_from_args(args, method=None, k=None):
    return ExperimentConfig(
        graph=args.graph,
        measure=ConflictMeasure(args.measure),
        method=method if method is not None else Method(args.method),
        k=k if k is not None else args.k,
        epsilon=args.epsilon,
        opinions=OpinionDistribution(args.opinions),
        dist_param=args.dist_param,
        seed=args.seed,
        solver_tol=args.solver_tol,
        solver_maxiter=args.solver_maxiter,
        sketch_dim=args.sketch_dim,
        theoretical=args.theoretical_tolerances,
        clamp_opinions=args.clamp_opinions,
        pagerank_damping=args.pagerank_damping,
        reference_delta=getattr(args, "reference_delta", None),
        out=getattr(args, "out", None) if args.command == "run" else None,
        csv_out=getattr(args, "csv", None),
    )


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(sub):
    sub.add_argument("--graph", required=True, help="edge-list file (SNAP/KONECT style)")
    sub.add_argument(
        "--measure", required=True, choices=[x.value for x in ConflictMeasure]
    )
    sub.add_argument("--epsilon", type=float, default=0.5, help="sketch accuracy target")
    sub.add_argument(
        "--opinions", choices=[d.value for d in OpinionDistribution], default="uniform"
    )
    sub.add_argument(
        "--dist-param", type=float, default=None,
        help="exponential rate or power-law exponent",
    )
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--solver-tol", type=float, default=None)
    sub.add_argument("--solver-maxiter", type=int, default=None)
    sub.add_argument("--sketch-dim", type=int, default=None)
    sub.add_argument("--theoretical-tolerances", action="store_true")
    sub.add_argument(
        "--clamp-opinions", action="store_true",
        help="clamp unbounded opinion samples at 1 instead of max-scaling",
    )
    sub.add_argument("--pagerank-damping", type=float, default=0.85)


def build_parser():
    parser = _Parser(prog="conflict-min", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    run_p = commands.add_parser("run", parents=[], help="run one experiment")
    _add_common(run_p)
    run_p.add_argument(
        "--method", required=True, choices=[m.value for m in Method]
    )
    run_p.add_argument("-k", type=int, required=True, help="number of nodes to zero")
    run_p.add_argument(
        "--reference-delta", type=float, default=None,
        help="reference objective drop for the relative-error column",
    )
    run_p.add_argument("--out", default=None, help="write the JSON report here")
    run_p.add_argument("--csv", default=None, help="append a CSV row here")

    sweep_p = commands.add_parser("sweep", help="run a method-by-budget grid")
    _add_common(sweep_p)
    sweep_p.add_argument(
        "--methods", default="greedy,greedy-ac,random,pagerank",
        help="comma-separated method list",
    )
    sweep_p.add_argument("--k-max", type=int, required=True)
    sweep_p.add_argument("--k-step", type=int, default=1)
    sweep_p.add_argument("--out", required=True, help="CSV output path")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _run_command(args)
        return _sweep_command(args)
    except (EdgeListError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"conflict-min: data error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"conflict-min: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"conflict-min: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
