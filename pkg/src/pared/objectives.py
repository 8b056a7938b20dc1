"""Per-family objective vectors scored on fitted models.

Every family exposes exactly three criteria. Vectors are stored in
minimization sense: a maximization criterion (the shared-edge count of the
group penalty) is negated on storage and carries direction "max" so reports
can undo the sign for display.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .solvers.graphical import MultiGroupDataset, PrecisionEstimates
from .solvers.regression import FittedRegression, RegressionDataset

ENET_LABELS = ("deviance", "nonzero coefficients", "l2 norm")
FLASSO_LABELS = ("rss", "nonzero coefficients", "roughness")
JGL_FUSED_LABELS = ("aic", "total edges", "mean abs difference")
JGL_GROUP_LABELS = ("aic", "total edges", "shared edges")

MIN3 = ("min", "min", "min")


@dataclass
class ObjectiveVector:
    values: np.ndarray
    labels: tuple
    directions: tuple

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if not (len(self.values) == len(self.labels) == len(self.directions)):
            raise ValueError("values, labels and directions must align")
        if not np.all(np.isfinite(self.values)):
            raise NumericalError(f"non-finite objective values: {self.values}")


@dataclass
class ModelSummary:
    """Human-facing digest of one fitted model, carried into reports."""

    family: str
    hyperparameters: dict
    stats: dict
    payload: dict = field(default_factory=dict)


def enet_objectives(fit: FittedRegression, data: RegressionDataset) -> ObjectiveVector:
    """(deviance, number of nonzero coefficients, l2 norm). Deviance for the
    Gaussian family is the residual sum of squares on the standardized data."""
    resid = data.y - data.X @ fit.beta
    rss = float(resid @ resid)
    nnz = int(np.count_nonzero(fit.beta))
    l2 = float(np.linalg.norm(fit.beta))
    return ObjectiveVector(np.array([rss, float(nnz), l2]), ENET_LABELS, MIN3)


def flasso_objectives(fit: FittedRegression, data: RegressionDataset) -> ObjectiveVector:
    """(rss, nonzero count, roughness), where roughness is the mean absolute
    difference of consecutive coefficients."""
    resid = data.y - data.X @ fit.beta
    rss = float(resid @ resid)
    nnz = int(np.count_nonzero(fit.beta))
    rough = float(np.mean(np.abs(np.diff(fit.beta)))) if data.p > 1 else 0.0
    return ObjectiveVector(np.array([rss, float(nnz), rough]), FLASSO_LABELS, MIN3)


def _edge_sets(est: PrecisionEstimates, p: int, edge_eps: float):
    iu = np.triu_indices(p, k=1)
    return [np.abs(T[iu]) > edge_eps for T in est.theta]


def jgl_aic(est: PrecisionEstimates, data: MultiGroupDataset, edge_eps: float = 1e-6) -> float:
    """sum_k n_k*tr(S_k T_k) - n_k*logdet(T_k) + 2*E_k with E_k the number of
    off-diagonal edges above edge_eps in absolute value."""
    total = 0.0
    edges = _edge_sets(est, data.p, edge_eps)
    for k in range(data.K):
        T = est.theta[k]
        sign, logdet = np.linalg.slogdet(T)
        if sign <= 0:
            raise NumericalError(f"group {k}: precision estimate is not positive definite")
        n_k = data.sample_sizes[k]
        total += n_k * float(np.trace(data.covariances[k] @ T)) - n_k * logdet + 2.0 * int(edges[k].sum())
    return float(total)


def _check_pd(est: PrecisionEstimates):
    for k, T in enumerate(est.theta):
        try:
            np.linalg.cholesky(T)
        except np.linalg.LinAlgError:
            raise NumericalError(f"group {k}: precision estimate is not positive definite") from None


def jgl_fused_objectives(est: PrecisionEstimates, data: MultiGroupDataset,
                         edge_eps: float = 1e-6) -> ObjectiveVector:
    """(aic, total edge count, mean absolute pairwise difference). The third
    criterion averages |t_ij^k - t_ij^k'| over all unordered group pairs and
    all entries, diagonal included."""
    _check_pd(est)
    aic = jgl_aic(est, data, edge_eps)
    edges = _edge_sets(est, data.p, edge_eps)
    total_edges = int(sum(e.sum() for e in edges))
    diffs = []
    for k in range(data.K):
        for k2 in range(k + 1, data.K):
            diffs.append(np.abs(est.theta[k] - est.theta[k2]).mean())
    meandiff = float(np.mean(diffs)) if diffs else 0.0
    return ObjectiveVector(np.array([aic, float(total_edges), meandiff]), JGL_FUSED_LABELS, MIN3)


def jgl_group_objectives(est: PrecisionEstimates, data: MultiGroupDataset,
                         edge_eps: float = 1e-6) -> ObjectiveVector:
    """(aic, total edge count, shared edge count). Shared edges (present in
    every group) are a maximization criterion, stored negated."""
    _check_pd(est)
    aic = jgl_aic(est, data, edge_eps)
    edges = _edge_sets(est, data.p, edge_eps)
    total_edges = int(sum(e.sum() for e in edges))
    shared = int(np.logical_and.reduce(edges).sum())
    return ObjectiveVector(np.array([aic, float(total_edges), -float(shared)]),
                           JGL_GROUP_LABELS, ("min", "min", "max"))
