"""Penalized linear regression: elastic net and the fused lasso.

Both solvers work on centered/standardized data produced by
:func:`prepare_regression` and fit models without an intercept. Losses are
scaled by 1/(2n) so penalty levels are comparable across sample sizes:

    elastic net   (1/2n)||y - Xb||^2 + lam * (alpha*||b||_1 + (1-alpha)*||b||_2^2)
    fused lasso   (1/2n)||y - Xb||^2 + lam1*||b||_1 + lam2 * sum_j |b_j - b_{j-1}|

alpha = 1 is the pure l1 penalty, alpha = 0 pure (unhalved) ridge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, NumericalError


@dataclass
class RegressionDataset:
    """Centered response and standardized predictors, plus the maps back."""

    X: np.ndarray
    y: np.ndarray
    n: int
    p: int
    column_means: np.ndarray
    column_scales: np.ndarray
    y_mean: float


@dataclass(frozen=True)
class ElasticNetParams:
    lam: float
    alpha: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class FusedLassoParams:
    lam1: float
    lam2: float

    def __post_init__(self):
        if self.lam1 < 0 or self.lam2 < 0:
            raise ValueError(f"penalties must be >= 0, got ({self.lam1}, {self.lam2})")


@dataclass
class FittedRegression:
    beta: np.ndarray
    beta_natural: np.ndarray
    converged: bool
    iterations: int


def prepare_regression(raw_X, raw_y) -> RegressionDataset:
    """Center y, center and unit-scale every column of X (population sd).

    Constant columns cannot be standardized and are a data error rather than
    something to silently drop.
    """
    X = np.asarray(raw_X, dtype=float)
    y = np.asarray(raw_y, dtype=float).ravel()
    if X.ndim != 2:
        raise DataError(f"predictor matrix must be 2-D, got shape {X.shape}")
    n, p = X.shape
    if y.shape[0] != n:
        raise DataError(f"response length {y.shape[0]} does not match {n} rows")
    if n < 2 or p < 1:
        raise DataError(f"need n >= 2 and p >= 1, got n={n}, p={p}")
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
        raise DataError("non-finite entries in the regression data")
    means = X.mean(axis=0)
    centered = X - means
    scales = np.sqrt((centered**2).mean(axis=0))
    bad = np.flatnonzero(scales < 1e-12)
    if bad.size:
        raise DataError(f"constant predictor column(s) {bad.tolist()} cannot be standardized")
    y_mean = float(y.mean())
    return RegressionDataset(
        X=centered / scales,
        y=y - y_mean,
        n=n,
        p=p,
        column_means=means,
        column_scales=scales,
        y_mean=y_mean,
    )


def lambda_anchor_enet(data: RegressionDataset, alpha: float) -> float:
    """Smallest lambda at which the elastic-net fit is exactly zero:
    max_j |<x_j, y>| / (n * alpha)."""
    if alpha <= 0:
        raise ValueError("alpha must be > 0 for the sparsity anchor (no l1 part at alpha = 0)")
    return float(np.max(np.abs(data.X.T @ data.y)) / (data.n * alpha))


def lambda_anchor_flasso_fusion(data: RegressionDataset) -> float:
    """Smallest lam2 (at lam1 = 0) at which all coefficients fuse to one value.

    With b = c*1 and c the least-squares constant fit, stationarity needs a
    subgradient t with cumulative sums of the residual correlations; the
    anchor is the largest such cumulative sum.
    """
    x1 = data.X.sum(axis=1)
    denom = float(x1 @ x1)
    c = float(x1 @ data.y) / denom if denom > 1e-12 else 0.0
    g = data.X.T @ (data.y - c * x1) / data.n
    return float(np.max(np.abs(np.cumsum(g))))


def _soft(z, t):
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


def fit_elastic_net(data: RegressionDataset, params: ElasticNetParams,
                    tol: float = 1e-7, max_iter: int = 100_000) -> FittedRegression:
    """Cyclic coordinate descent. Each coordinate solves its scalar problem
    exactly via soft-thresholding, so zeros are exact:

        b_j = S(<x_j, r_j>/n, lam*alpha) / (||x_j||^2/n + 2*lam*(1-alpha))

    with r_j the partial residual excluding j. Stops when no coordinate moved
    more than tol in one sweep.
    """
    X, y, n, p = data.X, data.y, data.n, data.p
    G = X.T @ X / n
    c = X.T @ y / n
    col_sq = np.diag(G).copy()
    thresh = params.lam * params.alpha
    denom = col_sq + 2.0 * params.lam * (1.0 - params.alpha)
    beta = np.zeros(p)
    grad = c.copy()  # grad_j = <x_j, y - X beta> / n, maintained incrementally
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        delta = 0.0
        for j in range(p):
            b_old = beta[j]
            rho = grad[j] + col_sq[j] * b_old
            b_new = np.sign(rho) * max(abs(rho) - thresh, 0.0) / denom[j]
            if b_new != b_old:
                beta[j] = b_new
                grad -= G[:, j] * (b_new - b_old)
                delta = max(delta, abs(b_new - b_old))
        if delta <= tol:
            converged = True
            break
    return FittedRegression(
        beta=beta,
        beta_natural=beta / data.column_scales,
        converged=converged,
        iterations=it,
    )


def fit_fused_lasso(data: RegressionDataset, params: FusedLassoParams,
                    tol: float = 1e-5, max_iter: int = 10_000) -> FittedRegression:
    """ADMM on the split z = [b; Db] where D is the first-difference operator.

    The z-update soft-thresholds the two blocks at lam1/rho and lam2/rho, so
    the reported coefficients (the b-block of z at convergence) carry exact
    zeros. rho follows standard residual balancing (factor 2 when one
    residual exceeds 10x the other), with the scaled dual rescaled to match.
    """
    X, y, n, p = data.X, data.y, data.n, data.p
    if p < 2:
        raise ValueError("the fused penalty needs at least two coefficients")
    D = np.diff(np.eye(p), axis=0)  # (p-1, p)
    MtM = np.eye(p) + D.T @ D
    Xty = X.T @ y / n
    XtX = X.T @ X / n
    m = 2 * p - 1

    rho = 1.0
    chol = np.linalg.cholesky(XtX + rho * MtM)
    beta = np.zeros(p)
    z = np.zeros(m)
    u = np.zeros(m)

    def apply_M(b):
        return np.concatenate([b, D @ b])

    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        w = z - u
        rhs = Xty + rho * (w[:p] + D.T @ w[p:])
        beta = np.linalg.solve(chol.T, np.linalg.solve(chol, rhs))
        Mb = apply_M(beta)
        z_old = z
        z = np.concatenate([
            _soft(Mb[:p] + u[:p], params.lam1 / rho),
            _soft(Mb[p:] + u[p:], params.lam2 / rho),
        ])
        u = u + Mb - z

        r_norm = float(np.linalg.norm(Mb - z))
        s_norm = float(rho * np.linalg.norm(D.T @ (z[p:] - z_old[p:]) + (z[:p] - z_old[:p])))
        eps_pri = tol * (np.sqrt(m) + max(np.linalg.norm(Mb), np.linalg.norm(z)))
        eps_dual = tol * (np.sqrt(p) + rho * np.linalg.norm(u[:p] + D.T @ u[p:]))
        if r_norm <= eps_pri and s_norm <= eps_dual:
            converged = True
            break

        if r_norm > 10.0 * s_norm and rho < 1e6:
            rho *= 2.0
            u /= 2.0
            chol = np.linalg.cholesky(XtX + rho * MtM)
        elif s_norm > 10.0 * r_norm and rho > 1e-6:
            rho /= 2.0
            u *= 2.0
            chol = np.linalg.cholesky(XtX + rho * MtM)

    beta_hat = z[:p].copy()
    if not np.all(np.isfinite(beta_hat)):
        raise NumericalError("fused lasso ADMM diverged (non-finite iterate)")
    return FittedRegression(
        beta=beta_hat,
        beta_natural=beta_hat / data.column_scales,
        converged=converged,
        iterations=it,
    )
