"""Gaussian-process regression on the unit cube.

One independent GP per objective: anisotropic Matern-5/2 kernel, targets
standardized internally, a small noise nugget for conditioning, and
hyperparameters chosen by maximizing the log marginal likelihood with a
seeded multi-start plus coordinate-wise golden-section refinement. Fitting
is deterministic given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .errors import NumericalError

TAU2_FLOOR = 1e-6
TAU2_CEIL = 1e-2

# hyperparameter start boxes and refinement bounds, all in log space
_START_LOG_LS = (math.log(0.05), math.log(2.0))
_START_LOG_SIG2 = (math.log(0.1), math.log(10.0))
_BOUND_LOG_LS = (math.log(5e-3), math.log(20.0))
_BOUND_LOG_SIG2 = (math.log(1e-3), math.log(1e3))

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class KernelParams:
    lengthscales: tuple
    sigma2: float
    tau2: float


@dataclass
class GpSurrogate:
    inputs: np.ndarray
    params: KernelParams
    y_mean: float
    y_sd: float
    chol: np.ndarray
    alpha: np.ndarray
    targets_std: np.ndarray
    constant: bool = False
    constant_value: float = 0.0


def matern52(A, B, lengthscales, sigma2) -> np.ndarray:
    """Anisotropic Matern-5/2 cross-covariance between row sets A and B."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    ls = np.asarray(lengthscales, dtype=float)
    diff = (A[:, None, :] - B[None, :, :]) / ls
    r = np.sqrt(np.maximum(np.sum(diff**2, axis=2), 0.0))
    s = math.sqrt(5.0) * r
    return sigma2 * (1.0 + s + s**2 / 3.0) * np.exp(-s)


def _factor(X, params: KernelParams):
    """Cholesky of K + tau2*I, escalating the nugget x10 (up to the ceiling)
    if factorization fails."""
    K = matern52(X, X, params.lengthscales, params.sigma2)
    m = K.shape[0]
    tau2 = params.tau2
    while True:
        try:
            L = np.linalg.cholesky(K + tau2 * np.eye(m))
            return L, tau2
        except np.linalg.LinAlgError:
            if tau2 >= TAU2_CEIL:
                raise NumericalError(
                    f"kernel matrix not factorizable even at nugget {tau2:g}") from None
            tau2 = min(tau2 * 10.0, TAU2_CEIL)


def log_marginal_likelihood(inputs, targets, params: KernelParams) -> float:
    """-0.5 y'(K+tau2 I)^{-1} y - 0.5 logdet(K+tau2 I) - (m/2) log(2 pi)."""
    X = np.atleast_2d(np.asarray(inputs, dtype=float))
    y = np.asarray(targets, dtype=float).ravel()
    m = X.shape[0]
    L, _ = _factor(X, params)
    alpha = cho_solve((L, True), y)
    return float(-0.5 * y @ alpha - np.sum(np.log(np.diag(L))) - 0.5 * m * math.log(2.0 * math.pi))


def _golden_min(f, a, b, iters):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def make_gp(inputs, targets, params: KernelParams) -> GpSurrogate:
    """Build a surrogate at fixed kernel hyperparameters (no fitting).

    Targets are standardized exactly as in fit_gp; the nugget may get
    escalated if the factorization needs it.
    """
    X = np.atleast_2d(np.asarray(inputs, dtype=float))
    y = np.asarray(targets, dtype=float).ravel()
    if y.shape[0] != X.shape[0]:
        raise ValueError("inputs and targets disagree on length")
    y_mean = float(y.mean())
    y_sd = float(y.std())
    if y_sd < 1e-12 * max(1.0, abs(y_mean)):
        raise ValueError("constant targets; use fit_gp, which flags this case")
    ystd = (y - y_mean) / y_sd
    L, tau2 = _factor(X, params)
    params = KernelParams(params.lengthscales, params.sigma2, tau2)
    alpha = cho_solve((L, True), ystd)
    return GpSurrogate(inputs=X, params=params, y_mean=y_mean, y_sd=y_sd,
                       chol=L, alpha=alpha, targets_std=ystd)


def fit_gp(inputs, targets, seed, n_starts: int = 8, refine_evals: int = 60) -> GpSurrogate:
    """Fit kernel hyperparameters by maximum marginal likelihood.

    Starts are a seeded latin hypercube over log lengthscales and log signal
    variance; each start is refined coordinate-wise by golden section with
    roughly refine_evals likelihood evaluations. Constant targets are not
    fittable and produce a flagged constant surrogate instead.
    """
    X = np.atleast_2d(np.asarray(inputs, dtype=float))
    y = np.asarray(targets, dtype=float).ravel()
    m, d = X.shape
    if m < 3:
        raise ValueError(f"need at least 3 observations to fit, got {m}")
    if y.shape[0] != m:
        raise ValueError("inputs and targets disagree on length")

    y_mean = float(y.mean())
    y_sd = float(y.std())
    if y_sd < 1e-12 * max(1.0, abs(y_mean)):
        return GpSurrogate(
            inputs=X, params=KernelParams((1.0,) * d, 1.0, TAU2_FLOOR),
            y_mean=y_mean, y_sd=1.0, chol=np.eye(m), alpha=np.zeros(m),
            targets_std=np.zeros(m), constant=True, constant_value=y_mean,
        )
    ystd = (y - y_mean) / y_sd

    n_par = d + 1  # log lengthscale per dimension + log signal variance
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), 0x6790])))
    strata = np.empty((n_starts, n_par))
    for j in range(n_par):
        strata[:, j] = rng.permutation(n_starts)
    u = (strata + rng.random((n_starts, n_par))) / n_starts
    starts = np.empty_like(u)
    starts[:, :d] = _START_LOG_LS[0] + u[:, :d] * (_START_LOG_LS[1] - _START_LOG_LS[0])
    starts[:, d] = _START_LOG_SIG2[0] + u[:, d] * (_START_LOG_SIG2[1] - _START_LOG_SIG2[0])

    def neg_lml(theta):
        params = KernelParams(tuple(np.exp(theta[:d])), float(np.exp(theta[d])), TAU2_FLOOR)
        try:
            return -log_marginal_likelihood(X, ystd, params)
        except NumericalError:
            return np.inf

    gs_iters = 10  # 12 evaluations per coordinate solve
    sweeps = max(1, round(refine_evals / ((gs_iters + 2) * n_par)))
    best_theta, best_val = None, np.inf
    for s in range(n_starts):
        theta = starts[s].copy()
        val = neg_lml(theta)
        for _ in range(sweeps):
            for i in range(n_par):
                lo, hi = _BOUND_LOG_LS if i < d else _BOUND_LOG_SIG2
                a = max(lo, theta[i] - 1.2)
                b = min(hi, theta[i] + 1.2)

                def f1(x, i=i, theta=theta):
                    t = theta.copy()
                    t[i] = x
                    return neg_lml(t)

                x_opt, f_opt = _golden_min(f1, a, b, gs_iters)
                if f_opt < val:
                    theta[i] = x_opt
                    val = f_opt
        if val < best_val:
            best_theta, best_val = theta.copy(), val

    if best_theta is None or not np.isfinite(best_val):
        raise NumericalError("marginal likelihood not finite at any candidate hyperparameters")

    params = KernelParams(tuple(np.exp(best_theta[:d])), float(np.exp(best_theta[d])), TAU2_FLOOR)
    L, tau2 = _factor(X, params)
    params = KernelParams(params.lengthscales, params.sigma2, tau2)
    alpha = cho_solve((L, True), ystd)
    return GpSurrogate(inputs=X, params=params, y_mean=y_mean, y_sd=y_sd,
                       chol=L, alpha=alpha, targets_std=ystd)


def predict(gp: GpSurrogate, u):
    """Posterior mean and variance at one unit point (d,) or a batch (m, d).
    Returns floats for a single point, arrays for a batch."""
    u = np.asarray(u, dtype=float)
    single = u.ndim == 1
    U = np.atleast_2d(u)
    if gp.constant:
        mean = np.full(U.shape[0], gp.constant_value)
        var = np.full(U.shape[0], TAU2_FLOOR)
    else:
        ks = matern52(gp.inputs, U, gp.params.lengthscales, gp.params.sigma2)
        v = solve_triangular(gp.chol, ks, lower=True)
        mean_std = ks.T @ gp.alpha
        var_std = np.maximum(gp.params.sigma2 - np.sum(v**2, axis=0), 0.0)
        mean = gp.y_mean + gp.y_sd * mean_std
        var = var_std * gp.y_sd**2
    if single:
        return float(mean[0]), float(var[0])
    return mean, var
