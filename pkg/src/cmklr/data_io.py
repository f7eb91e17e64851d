"""On-disk formats: feature CSVs, label files, kernel banks, result documents.

Feature matrices are headerless comma-separated numeric CSVs. Label files
carry one integer per line. A kernel bank is a JSON manifest listing n and
an ordered array of {file, kind, params} entries whose files are n-by-n
CSVs living next to the manifest. A result document is a JSON object with
assignments, weights, objective_trace, iterations, tau, num_clusters and
an optional metrics record.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .kernel_bank import KernelMatrix


def _read_numeric_rows(path) -> list[list[float]]:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    rows: list[list[float]] = []
    width = None
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                row = [float(token) for token in line.split(",")]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric cell") from exc
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError(
                    f"{path}:{lineno}: ragged row ({len(row)} columns, expected {width})"
                )
            rows.append(row)
    if not rows:
        raise ValueError(f"{path}: empty file")
    return rows


def load_feature_matrix(path) -> np.ndarray:
    """Load an n-by-d feature CSV; rejects ragged or non-finite input."""
    rows = _read_numeric_rows(path)
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least 2 samples, got {len(rows)}")
    X = np.array(rows, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{path}: non-finite entry in feature matrix")
    return X


def load_labels(path) -> np.ndarray:
    """Load one integer label per line, remapped to contiguous 0-based codes
    in order of first appearance."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    values: list[int] = []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            token = raw.strip()
            if not token:
                continue
            try:
                values.append(int(token))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-integer label {token!r}") from exc
    if not values:
        raise ValueError(f"{path}: empty label file")
    first_seen: dict[int, int] = {}
    return np.array([first_seen.setdefault(v, len(first_seen)) for v in values], dtype=int)


def save_kernel_bank(bank, manifest_path) -> None:
    """Write each kernel as a full-precision CSV next to a JSON manifest."""
    if not bank:
        raise ValueError("refusing to save an empty kernel bank")
    manifest_path = Path(manifest_path)
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    n = bank[0].values.shape[0]
    entries = []
    for r, kernel in enumerate(bank):
        if kernel.values.shape != (n, n):
            raise ValueError(f"kernel {r} has shape {kernel.values.shape}, expected ({n}, {n})")
        filename = f"kernel_{r:02d}_{kernel.kind}.csv"
        # %.17g round-trips float64 exactly
        np.savetxt(manifest_path.parent / filename, kernel.values, delimiter=",", fmt="%.17g")
        entries.append({"file": filename, "kind": kernel.kind, "params": kernel.params})
    document = {"n": int(n), "kernels": entries}
    manifest_path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n")


def load_kernel_bank(manifest_path, atol: float = 1e-8):
    """Load a kernel bank in manifest order; returns (kernels, manifest dict).

    Each matrix must be n-by-n and symmetric within atol; accepted
    matrices are symmetrized as (K + K') / 2 to absorb round-trip noise.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise FileNotFoundError(f"no such file: {manifest_path}")
    document = json.loads(manifest_path.read_text())
    entries = document.get("kernels", [])
    if not entries:
        raise ValueError(f"{manifest_path}: manifest lists no kernels")
    n = int(document["n"])
    bank = []
    for entry in entries:
        kernel_path = manifest_path.parent / entry["file"]
        values = np.array(_read_numeric_rows(kernel_path), dtype=float)
        if values.shape != (n, n):
            raise ValueError(
                f"{kernel_path}: expected {n}x{n}, got {values.shape[0]}x{values.shape[1]}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{kernel_path}: non-finite entry in kernel matrix")
        gap = float(np.max(np.abs(values - values.T)))
        if gap > atol:
            raise ValueError(
                f"{kernel_path}: asymmetric beyond tolerance (max gap {gap:.3g} > {atol:.3g})"
            )
        bank.append(
            KernelMatrix(
                values=(values + values.T) / 2.0,
                kind=str(entry.get("kind", "custom")),
                params=dict(entry.get("params", {})),
            )
        )
    return bank, document


def save_result(result, path) -> None:
    """Serialize a solver result (with assignments) as a JSON document."""
    if result.assignments is None:
        raise ValueError("result has no assignments; discretize before saving")
    document = {
        "assignments": [int(v) for v in result.assignments],
        "weights": [float(v) for v in result.weights],
        "objective_trace": [float(v) for v in result.objective_trace],
        "iterations": int(result.iterations),
        "tau": int(result.tau),
        "num_clusters": int(result.num_clusters),
    }
    if result.metrics is not None:
        document["metrics"] = {k: float(v) for k, v in result.metrics.items()}
    Path(path).write_text(json.dumps(document, indent=2, sort_keys=True) + "\n")


def load_result(path) -> dict:
    """Read back a result document as a plain dict."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    return json.loads(path.read_text())
