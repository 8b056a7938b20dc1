"""Dominance relations, non-dominated filtering and exact hypervolume.

Hypervolume is exact for 2 and 3 objectives (sweep resp. slicing); the
point-wise improvement kernels at the bottom are compiled with numba because
the acquisition loop calls them hundreds of thousands of times per iteration.
All objective vectors are stored in minimization sense.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba ships with the package
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@dataclass
class EvaluationRecord:
    """One scored hyperparameter evaluation. Failed records keep their slot
    (and id) but carry no objective values."""

    id: int
    point: "DesignPoint"  # noqa: F821 - structural, avoids an import cycle
    objectives: Optional["ObjectiveVector"]  # noqa: F821
    summary: Optional[object] = None
    status: str = "ok"


@dataclass
class ParetoArchive:
    records: list
    reference_point: np.ndarray


def _values(x) -> np.ndarray:
    return np.asarray(getattr(x, "values", x), dtype=float)


def dominates(a, b) -> bool:
    """True iff a is no worse than b everywhere and strictly better somewhere."""
    va, vb = _values(a), _values(b)
    if va.shape != vb.shape:
        raise ValueError(f"objective vectors differ in length: {va.shape} vs {vb.shape}")
    return bool(np.all(va <= vb) and np.any(va < vb))


def non_dominated_mask(values: np.ndarray) -> np.ndarray:
    """Boolean mask of rows not dominated by any other row."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n == 0:
        return np.zeros(0, dtype=bool)
    le = np.all(values[:, None, :] <= values[None, :, :], axis=2)
    lt = np.any(values[:, None, :] < values[None, :, :], axis=2)
    dominated = np.any(le & lt, axis=0)
    return ~dominated


def non_dominated_filter(records: list, reference_point=None) -> ParetoArchive:
    """Archive of the records not dominated by any other. Failed records are
    ignored; ties (identical vectors) are all retained; input order is kept."""
    ok = [r for r in records if getattr(r, "status", "ok") == "ok"]
    if not ok:
        return ParetoArchive(records=[], reference_point=np.asarray(reference_point, float)
                             if reference_point is not None else np.empty(0))
    values = np.array([_values(r.objectives) for r in ok])
    mask = non_dominated_mask(values)
    if reference_point is None:
        reference_point = compute_reference_point(values)
    return ParetoArchive(records=[r for r, m in zip(ok, mask) if m],
                         reference_point=np.asarray(reference_point, dtype=float))


def compute_reference_point(values, inflation: float = 0.1, floor: float = 1e-9) -> np.ndarray:
    """Componentwise max inflated by ``inflation`` of the observed range.
    The floor keeps the reference strictly above the points even when a
    coordinate is constant."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[0] == 0:
        raise ValueError("need at least one objective vector")
    hi = values.max(axis=0)
    rng = hi - values.min(axis=0)
    return hi + np.maximum(inflation * rng, floor)


def hypervolume(front, reference_point) -> float:
    """Exact dominated hypervolume of ``front`` w.r.t. ``reference_point``.

    Points not <= the reference in every coordinate are excluded first;
    dominated or duplicate points are harmless. Only 2 and 3 objectives are
    supported.
    """
    ref = np.asarray(reference_point, dtype=float)
    pts = np.asarray(front, dtype=float)
    if pts.size == 0:
        return 0.0
    if pts.ndim != 2 or pts.shape[1] != ref.shape[0]:
        raise ValueError("front and reference point disagree on dimension")
    q = pts.shape[1]
    if q not in (2, 3):
        raise ValueError(f"hypervolume supports 2 or 3 objectives, got {q}")
    pts = pts[np.all(pts <= ref, axis=1)]
    if pts.shape[0] == 0:
        return 0.0
    if q == 2:
        order = np.argsort(pts[:, 0], kind="stable")
        return float(_hv2_sorted(pts[order], ref[0], ref[1]))
    order = np.argsort(pts[:, 2], kind="stable")
    pts = pts[order]
    xorder = np.argsort(pts[:, 0], kind="stable").astype(np.int64)
    return float(_hv3_zsorted(pts, xorder, ref[0], ref[1], ref[2]))


@njit(cache=True)
def _hv2_sorted(pts, rx, ry):
    # pts sorted ascending by x; union of boxes [p, ref] via a single sweep.
    n = pts.shape[0]
    area = 0.0
    ymin = ry
    for i in range(n):
        if pts[i, 1] < ymin:
            ymin = pts[i, 1]
        x_hi = pts[i + 1, 0] if i + 1 < n else rx
        w = x_hi - pts[i, 0]
        if w > 0.0:
            area += w * (ry - ymin)
    return area


@njit(cache=True)
def _hv3_zsorted(pts, xorder, rx, ry, rz):
    # pts sorted ascending by z, xorder = argsort of x. Slice along z: the
    # slab above pts[i,2] is the 2-D union area of the first i+1 points.
    n = pts.shape[0]
    vol = 0.0
    for i in range(n):
        z_lo = pts[i, 2]
        z_hi = pts[i + 1, 2] if i + 1 < n else rz
        if z_hi <= z_lo:
            continue
        area = 0.0
        ymin = ry
        x_prev = np.nan
        for j in range(n):
            k = xorder[j]
            if k > i:  # not yet active in this slab
                continue
            x = pts[k, 0]
            if not np.isnan(x_prev) and x > x_prev:
                area += (x - x_prev) * (ry - ymin)
            if np.isnan(x_prev) or x > x_prev:
                x_prev = x
            if pts[k, 1] < ymin:
                ymin = pts[k, 1]
        if not np.isnan(x_prev):
            area += (rx - x_prev) * (ry - ymin)
        vol += area * (z_hi - z_lo)
    return vol


@njit(cache=True)
def _hvi2(y0, y1, front, rx, ry):
    # Exclusive hypervolume a new point (y0, y1) adds to a front sorted
    # ascending by x: box [y, ref] minus the union of clipped front boxes.
    bw = rx - y0
    bh = ry - y1
    if bw <= 0.0 or bh <= 0.0:
        return 0.0
    box = bw * bh
    n = front.shape[0]
    area = 0.0
    ymin = ry
    x_prev = np.nan
    for i in range(n):
        x = front[i, 0]
        if x < y0:
            x = y0
        yv = front[i, 1]
        if yv < y1:
            yv = y1
        if not np.isnan(x_prev) and x > x_prev:
            area += (x - x_prev) * (ry - ymin)
        if np.isnan(x_prev) or x > x_prev:
            x_prev = x
        if yv < ymin:
            ymin = yv
    if not np.isnan(x_prev):
        area += (rx - x_prev) * (ry - ymin)
    return box - area


@njit(cache=True)
def _hvi3(y0, y1, y2, front, xorder, rx, ry, rz):
    # 3-D exclusive hypervolume: box [y, ref] minus the volume of the front
    # clipped to max(front, y). Clipping preserves both presorted orders.
    bw = rx - y0
    bh = ry - y1
    bd = rz - y2
    if bw <= 0.0 or bh <= 0.0 or bd <= 0.0:
        return 0.0
    box = bw * bh * bd
    n = front.shape[0]
    if n == 0:
        return box
    vol = 0.0
    for i in range(n):
        z_lo = front[i, 2]
        if z_lo < y2:
            z_lo = y2
        if i + 1 < n:
            z_hi = front[i + 1, 2]
            if z_hi < y2:
                z_hi = y2
        else:
            z_hi = rz
        if z_hi <= z_lo:
            continue
        area = 0.0
        ymin = ry
        x_prev = np.nan
        for j in range(n):
            k = xorder[j]
            if k > i:
                continue
            x = front[k, 0]
            if x < y0:
                x = y0
            yv = front[k, 1]
            if yv < y1:
                yv = y1
            if not np.isnan(x_prev) and x > x_prev:
                area += (x - x_prev) * (ry - ymin)
            if np.isnan(x_prev) or x > x_prev:
                x_prev = x
            if yv < ymin:
                ymin = yv
        if not np.isnan(x_prev):
            area += (rx - x_prev) * (ry - ymin)
        vol += area * (z_hi - z_lo)
    return box - vol


@njit(cache=True)
def ehvi_mc_batch(mu, sd, draws, front, xorder, ref):
    """Monte-Carlo expected hypervolume improvement for a batch of Gaussian
    predictions sharing one draw matrix (common random numbers).

    mu, sd: (n_candidates, q); draws: (n_samples, q) standard normals;
    front: (n_front, q) sorted ascending by the last coordinate, with xorder
    the argsort of its first coordinate. Returns (n_candidates,) means.
    """
    n_cand = mu.shape[0]
    n_samp = draws.shape[0]
    q = mu.shape[1]
    out = np.empty(n_cand)
    for c in range(n_cand):
        acc = 0.0
        for s in range(n_samp):
            if q == 2:
                y0 = mu[c, 0] + sd[c, 0] * draws[s, 0]
                y1 = mu[c, 1] + sd[c, 1] * draws[s, 1]
                acc += _hvi2(y0, y1, front, ref[0], ref[1])
            else:
                y0 = mu[c, 0] + sd[c, 0] * draws[s, 0]
                y1 = mu[c, 1] + sd[c, 1] * draws[s, 1]
                y2 = mu[c, 2] + sd[c, 2] * draws[s, 2]
                acc += _hvi3(y0, y1, y2, front, xorder, ref[0], ref[1], ref[2])
        out[c] = acc / n_samp
    return out


def prepare_front_for_hvi(front, reference_point):
    """Sort/filter a front once so the improvement kernels can skip it.
    Returns (front_sorted, xorder) with points beyond the reference dropped."""
    ref = np.asarray(reference_point, dtype=float)
    pts = np.asarray(front, dtype=float).reshape(-1, ref.shape[0])
    if pts.shape[0]:
        pts = pts[np.all(pts <= ref, axis=1)]
    q = ref.shape[0]
    if q == 2:
        order = np.argsort(pts[:, 0], kind="stable") if pts.shape[0] else np.empty(0, np.int64)
        pts = pts[order] if pts.shape[0] else pts
        return np.ascontiguousarray(pts), np.empty(0, dtype=np.int64)
    if pts.shape[0]:
        pts = pts[np.argsort(pts[:, 2], kind="stable")]
        xorder = np.argsort(pts[:, 0], kind="stable").astype(np.int64)
    else:
        xorder = np.empty(0, dtype=np.int64)
    return np.ascontiguousarray(pts), xorder
