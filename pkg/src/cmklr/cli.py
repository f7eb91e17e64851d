"""Command-line pipeline: kernel bank construction, clustering, evaluation
and the tau grid search.

Subcommands:
  kernels   build a candidate kernel bank from feature CSVs
  cluster   run the solver on a bank and write a result document
  evaluate  score an assignment against ground-truth labels
  grid      sweep tau, printing a (tau, acc, nmi, purity) table
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import data_io, kernel_bank, metrics
from .discretize import kmeans, row_normalize
from .solver import run_cklr, run_cmklr

DEFAULT_TAUS = (3, 5, 7, 9, 11, 13, 15)


@dataclass
class RunConfig:
    tau: int = 7
    clusters: int = 2
    max_iter: int = 50
    tol: float = 1e-5
    kmeans_restarts: int = 20
    seed: int = 0
    zscore: bool = False

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError("tau must be at least 1")
        if self.clusters < 2:
            raise ValueError("need at least 2 clusters")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.kmeans_restarts < 1:
            raise ValueError("need at least one K-means restart")


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        tau=args.tau,
        clusters=args.clusters,
        max_iter=args.max_iter,
        tol=args.tol,
        kmeans_restarts=args.kmeans_restarts,
        seed=args.seed,
    )


def _cluster_bank(bank, config: RunConfig, method: str = "cmklr", kernel_index=None):
    """Solver plus discretization; returns the result with assignments set."""
    if method == "cklr":
        index = 0 if kernel_index is None else kernel_index
        if not 0 <= index < len(bank):
            raise ValueError(f"kernel index {index} out of range for bank of {len(bank)}")
        result = run_cklr(bank[index], config.tau, config.clusters)
    elif method == "cmklr":
        result = run_cmklr(
            bank, config.tau, config.clusters, max_iter=config.max_iter, tol=config.tol
        )
    else:
        raise ValueError(f"unknown method {method!r}")
    normalized = row_normalize(result.embedding)
    assignment = kmeans(
        normalized, config.clusters, restarts=config.kmeans_restarts, seed=config.seed
    )
    result.assignments = assignment.labels
    return result


def _write_trace(trace, path) -> None:
    lines = ["iteration,objective"]
    lines += [f"{i},{float(v)!r}" for i, v in enumerate(trace, start=1)]
    Path(path).write_text("\n".join(lines) + "\n")


def _metrics_record(pred, truth) -> dict:
    return {
        "acc": metrics.accuracy(pred, truth),
        "nmi": metrics.nmi(pred, truth),
        "purity": metrics.purity(pred, truth),
    }


def _load_assignments(path):
    """Accept a result document, a JSON label array, or one label per line.

    Returns (labels, document or None). Plain labels need no remapping:
    every metric is invariant under relabeling.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    text = path.read_text()
    try:
        document = json.loads(text)
    except json.JSONDecodeError:
        document = None
    if isinstance(document, dict):
        if "assignments" not in document:
            raise ValueError(f"{path}: result document lacks an 'assignments' field")
        return np.asarray(document["assignments"], dtype=int), document
    if isinstance(document, list):
        return np.asarray(document, dtype=int), None
    try:
        labels = [int(token) for token in text.split()]
    except ValueError as exc:
        raise ValueError(f"{path}: expected integer labels, one per line") from exc
    if not labels:
        raise ValueError(f"{path}: empty assignment file")
    return np.array(labels, dtype=int), None


def cmd_kernels(args) -> int:
    if bool(args.features) == bool(args.view):
        raise ValueError("give either --features or one or more --view files")
    if args.view:
        views = [data_io.load_feature_matrix(p) for p in args.view]
        if args.zscore:
            views = [kernel_bank.zscore(v) for v in views]
        bank = kernel_bank.build_multi_view_bank(views)
    else:
        X = data_io.load_feature_matrix(args.features)
        if args.zscore:
            X = kernel_bank.zscore(X)
        bank = kernel_bank.build_single_view_bank(X)
    data_io.save_kernel_bank(bank, args.out)
    print(f"wrote {len(bank)} kernels and manifest {args.out}")
    return 0


def cmd_cluster(args) -> int:
    config = _config_from_args(args)
    bank, _ = data_io.load_kernel_bank(args.manifest)
    result = _cluster_bank(bank, config, method=args.method, kernel_index=args.kernel_index)
    data_io.save_result(result, args.out)
    if args.trace:
        trace_path = Path(args.out).with_suffix(".trace.csv")
        _write_trace(result.objective_trace, trace_path)
        print(f"wrote objective trace {trace_path}")
    print(
        f"wrote {args.out}: {result.iterations} iterations, "
        f"final objective {result.objective_trace[-1]:.6g}"
    )
    return 0


def cmd_evaluate(args) -> int:
    truth = data_io.load_labels(args.labels)
    pred, document = _load_assignments(args.result)
    record = _metrics_record(pred, truth)
    print(json.dumps(record, sort_keys=True))
    if document is not None:
        document["metrics"] = record
        Path(args.result).write_text(json.dumps(document, indent=2, sort_keys=True) + "\n")
    return 0


def _format_grid_table(rows) -> str:
    lines = ["tau     acc     nmi  purity"]
    for tau, record in rows:
        lines.append(
            f"{tau:3d}  {record['acc']:.4f}  {record['nmi']:.4f}  {record['purity']:.4f}"
        )
    for name in ("acc", "nmi", "purity"):
        # ties go to the smallest tau
        best_tau, best = max(rows, key=lambda row: (row[1][name], -row[0]))
        lines.append(f"best {name}: tau={best_tau} {name}={best[name]:.4f}")
    return "\n".join(lines) + "\n"


def cmd_grid(args) -> int:
    taus = [int(token) for token in args.taus.split(",") if token.strip()]
    if not taus:
        raise ValueError("empty tau list")
    config = _config_from_args(args)
    bank, _ = data_io.load_kernel_bank(args.manifest)
    truth = data_io.load_labels(args.labels)
    rows = []
    for tau in taus:
        cell = replace(config, tau=tau)
        result = _cluster_bank(bank, cell, method=args.method, kernel_index=args.kernel_index)
        rows.append((tau, _metrics_record(result.assignments, truth)))
    print(_format_grid_table(rows), end="")
    return 0


def _add_solver_flags(parser) -> None:
    parser.add_argument("--clusters", type=int, required=True, help="number of clusters")
    parser.add_argument("--max-iter", type=int, default=50)
    parser.add_argument("--tol", type=float, default=1e-5)
    parser.add_argument("--kmeans-restarts", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--method", choices=("cmklr", "cklr"), default="cmklr")
    parser.add_argument(
        "--kernel-index", type=int, default=None, help="bank index for --method cklr"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmklr",
        description="Multiple kernel clustering via sparse local kernel regression.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    kernels = sub.add_parser("kernels", help="build a candidate kernel bank")
    kernels.add_argument("--features", help="single-view feature CSV")
    kernels.add_argument(
        "--view", action="append", default=[], help="per-view feature CSV (repeatable)"
    )
    kernels.add_argument("--out", required=True, help="manifest path; kernels go next to it")
    kernels.add_argument("--zscore", action="store_true", help="standardize features first")
    kernels.set_defaults(func=cmd_kernels)

    cluster = sub.add_parser("cluster", help="cluster a kernel bank")
    cluster.add_argument("--manifest", required=True)
    cluster.add_argument("--out", required=True, help="result document path")
    cluster.add_argument("--tau", type=int, default=7)
    cluster.add_argument("--trace", action="store_true", help="also write iteration/objective CSV")
    _add_solver_flags(cluster)
    cluster.set_defaults(func=cmd_cluster)

    evaluate = sub.add_parser("evaluate", help="score an assignment against labels")
    evaluate.add_argument("--result", required=True, help="result document or label file")
    evaluate.add_argument("--labels", required=True, help="ground-truth label file")
    evaluate.set_defaults(func=cmd_evaluate)

    grid = sub.add_parser("grid", help="tau grid search with evaluation")
    grid.add_argument("--manifest", required=True)
    grid.add_argument("--labels", required=True)
    grid.add_argument(
        "--taus",
        default=",".join(str(t) for t in DEFAULT_TAUS),
        help="comma-separated tau values",
    )
    grid.add_argument("--tau", type=int, default=7, help=argparse.SUPPRESS)
    _add_solver_flags(grid)
    grid.set_defaults(func=cmd_grid)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
