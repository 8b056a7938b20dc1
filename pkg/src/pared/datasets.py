"""CSV loading with precise error coordinates, plus synthetic generators.

Loaders are strict: every cell must parse as a finite float, rows must be
rectangular, and multi-group files must share an identical header. Errors
cite 1-based row numbers (the header is row 1) and column names.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import DataError


def _read_table(path) -> tuple[list[str], np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            raise DataError(f"{path}: duplicate column names in header")
        rows = []
        for r, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(f"{path}: row {r} has {len(row)} cells, expected {len(header)}")
            parsed = []
            for c, cell in enumerate(row):
                try:
                    v = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: non-numeric cell at row {r}, column {header[c]!r}: {cell!r}"
                    ) from None
                if not np.isfinite(v):
                    raise DataError(f"{path}: non-finite value at row {r}, column {header[c]!r}")
                parsed.append(v)
            rows.append(parsed)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return header, np.array(rows, dtype=float)


def load_regression_csv(path, response: str):
    """Returns (X, y, predictor_names). The response column is selected by
    name; all remaining columns are predictors in file order."""
    header, data = _read_table(path)
    if response not in header:
        raise DataError(f"{path}: response column {response!r} not in header {header}")
    r_idx = header.index(response)
    y = data[:, r_idx]
    X = np.delete(data, r_idx, axis=1)
    names = [h for i, h in enumerate(header) if i != r_idx]
    if X.shape[1] == 0:
        raise DataError(f"{path}: no predictor columns besides the response")
    return X, y, names


def load_group_csvs(paths):
    """All files must carry the same header (names and order). Returns
    (matrices, variable_names)."""
    if not paths:
        raise DataError("no group files given")
    header0, first = _read_table(paths[0])
    mats = [first]
    for path in paths[1:]:
        header, data = _read_table(path)
        if header != header0:
            raise DataError(
                f"header mismatch: {paths[0]} has {header0} but {path} has {header}")
        mats.append(data)
    return mats, header0


# ---------------------------------------------------------------------------
# Synthetic data. Counter-based seeding, same draws everywhere.
# ---------------------------------------------------------------------------

def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def simulate_regression(n: int, p: int, seed: int, pattern: str = "dense", noise: float = 1.0):
    """Gaussian design with a known coefficient vector.

    pattern "dense": alternating-sign coefficients tapering in magnitude.
    pattern "piecewise": blockwise-constant coefficients (a few plateaus),
    the shape the fusion penalty is meant to recover.
    """
    if pattern not in ("dense", "piecewise"):
        raise ValueError(f"unknown pattern {pattern!r}")
    rng = _rng([int(seed), 11])
    X = rng.standard_normal((n, p))
    if pattern == "dense":
        beta = np.array([(1.8 - 1.3 * j / max(p - 1, 1)) * (-1) ** j for j in range(p)])
    else:
        levels = [2.0, 0.0, -1.5, 1.0]
        n_blocks = min(4, p)
        bounds = np.linspace(0, p, n_blocks + 1).astype(int)
        beta = np.empty(p)
        for b in range(n_blocks):
            beta[bounds[b]:bounds[b + 1]] = levels[b % len(levels)]
    y = X @ beta + noise * rng.standard_normal(n)
    return X, y, beta


def simulate_groups(p: int, sizes, seed: int, extra_edges: int = 3):
    """K related sparse Gaussian graphical models.

    All groups share a chain backbone; each group gets a few extra edges of
    its own, so the groups are similar but not identical. Returns
    (matrices, precisions).
    """
    sizes = [int(s) for s in sizes]
    K = len(sizes)
    if K < 1:
        raise ValueError("need at least one group size")
    rng = _rng([int(seed), 13])
    base = np.eye(p)
    for i in range(p - 1):
        base[i, i + 1] = base[i + 1, i] = -0.3
    precisions, mats = [], []
    for k, n_k in enumerate(sizes):
        theta = base.copy()
        for _ in range(extra_edges):
            i, j = sorted(rng.choice(p, size=2, replace=False))
            w = 0.2 * (1 if rng.random() < 0.5 else -1)
            theta[i, j] += w
            theta[j, i] += w
        # keep it comfortably positive definite
        w_min = np.linalg.eigvalsh(theta).min()
        if w_min < 0.3:
            theta += (0.3 - w_min) * np.eye(p)
        cov = np.linalg.inv(theta)
        L = np.linalg.cholesky(cov)
        X = rng.standard_normal((n_k, p)) @ L.T
        precisions.append(theta)
        mats.append(X)
    return mats, precisions


def write_regression_csv(path, X, y, response: str = "y"):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([response] + [f"x{j + 1}" for j in range(X.shape[1])])
        for i in range(X.shape[0]):
            writer.writerow([repr(float(y[i]))] + [repr(float(v)) for v in X[i]])
    return path


def write_group_csvs(prefix, matrices):
    paths = []
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    for k, X in enumerate(matrices, start=1):
        path = prefix.parent / f"{prefix.name}{k}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"v{j + 1}" for j in range(X.shape[1])])
            for i in range(X.shape[0]):
                writer.writerow([repr(float(v)) for v in X[i]])
        paths.append(path)
    return paths
