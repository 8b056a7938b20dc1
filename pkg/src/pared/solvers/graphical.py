"""Joint estimation of several related precision matrices.

Solves, for groups k = 1..K with sample sizes n_k and covariances S_k,

    minimize  sum_k n_k * (tr(S_k T_k) - logdet T_k) + P(T_1..T_K)

by consensus ADMM (T_k = Z_k). Two penalties:

    fused   P = lam1 * sum_k sum_{i!=j} |t_ij^k|
              + lam2 * sum_{k<k'} sum_{i,j} |t_ij^k - t_ij^k'|
    group   P = lam1 * sum_k sum_{i!=j} |t_ij^k|
              + lam2 * sum_{i!=j} sqrt(sum_k (t_ij^k)^2)

Note the fused difference term runs over all entries including the diagonal
(so a large lam2 makes the estimates identical), while the l1 and group terms
are off-diagonal only. The returned estimates are the splitting variables at
convergence, so zeros produced by the prox are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import DataError, NumericalError

_PENALTIES = ("fused", "group")
_MAX_FUSED_K = 8  # prox enumeration is 2^(K-1) partitions; beyond this, refuse


@dataclass
class MultiGroupDataset:
    sample_sizes: np.ndarray
    covariances: np.ndarray  # (K, p, p), from column-centered data
    K: int
    p: int


@dataclass(frozen=True)
class JGLParams:
    lam1: float
    lam2: float
    penalty: str

    def __post_init__(self):
        if self.penalty not in _PENALTIES:
            raise ValueError(f"penalty must be one of {_PENALTIES}, got {self.penalty!r}")
        if self.lam1 < 0 or self.lam2 < 0:
            raise ValueError(f"penalties must be >= 0, got ({self.lam1}, {self.lam2})")


@dataclass
class PrecisionEstimates:
    theta: list  # K symmetric (p, p) arrays
    converged: bool
    iterations: int


def multigroup_from_matrices(matrices) -> MultiGroupDataset:
    """Build the dataset from raw per-group observation matrices (rows are
    samples). Columns are centered per group; S_k = X_k' X_k / n_k."""
    mats = [np.asarray(m, dtype=float) for m in matrices]
    if not mats:
        raise DataError("need at least one group")
    p = mats[0].shape[1] if mats[0].ndim == 2 else -1
    covs, sizes = [], []
    for g, X in enumerate(mats):
        if X.ndim != 2 or X.shape[1] != p:
            raise DataError(f"group {g}: expected a 2-D matrix with {p} columns, got shape {X.shape}")
        if X.shape[0] < 2:
            raise DataError(f"group {g}: need at least 2 samples")
        if not np.all(np.isfinite(X)):
            raise DataError(f"group {g}: non-finite entries")
        Xc = X - X.mean(axis=0)
        covs.append(Xc.T @ Xc / X.shape[0])
        sizes.append(X.shape[0])
    return MultiGroupDataset(
        sample_sizes=np.array(sizes, dtype=float),
        covariances=np.array(covs),
        K=len(mats),
        p=p,
    )


def lambda1_anchor_jgl(data: MultiGroupDataset) -> float:
    """Smallest lam1 (at lam2 = 0) with all off-diagonals exactly zero:
    at a diagonal solution the stationarity condition reads
    |n_k * S_ij| <= lam1 for every group and off-diagonal entry."""
    anchor = 0.0
    for k in range(data.K):
        S = data.covariances[k]
        off = np.abs(S - np.diag(np.diag(S))).max()
        anchor = max(anchor, data.sample_sizes[k] * off)
    return float(anchor)


@lru_cache(maxsize=None)
def _fused_prox_patterns(K: int):
    """Candidate structure for the exact K-value prox of

        min_z 0.5*||z - a||^2 + mu1*||z||_1 + mu2*sum_{k<k'} |z_k - z_k'|

    With a sorted ascending, the minimizer is sorted too, constant on
    contiguous blocks with strictly increasing values and monotone signs.
    Summing the stationarity conditions over a block G gives its value in
    closed form:

        v_G = mean(a_G) - mu1*sign(v_G) - mu2*(#below - #above)

    so each (partition, signs) pattern yields one affine candidate
    z = W a + mu1*B1 + mu2*B2, and the true minimizer is the candidate with
    the smallest objective. Returns stacked (P,K,K) W and (P,K) B1, B2.
    """
    if K > _MAX_FUSED_K:
        raise ValueError(f"fused prox enumeration supports K <= {_MAX_FUSED_K}, got {K}")
    Ws, B1s, B2s = [], [], []
    for mask in range(2 ** (K - 1)):
        blocks = []
        start = 0
        for b in range(K - 1):
            if mask >> b & 1:
                blocks.append((start, b + 1))
                start = b + 1
        blocks.append((start, K))
        m = len(blocks)
        # monotone sign sequences with at most one zero block
        for i in range(m + 1):
            for j in (i, i + 1):
                if j > m:
                    continue
                signs = [-1] * i + [0] * (j - i) + [1] * (m - j)
                W = np.zeros((K, K))
                B1 = np.zeros(K)
                B2 = np.zeros(K)
                for (g0, g1), sg in zip(blocks, signs):
                    if sg == 0:
                        continue  # the block value is pinned at zero
                    size = g1 - g0
                    W[g0:g1, g0:g1] = 1.0 / size
                    B1[g0:g1] = -sg
                    B2[g0:g1] = -(g0 - (K - g1))
                Ws.append(W)
                B1s.append(B1)
                B2s.append(B2)
    return np.array(Ws), np.array(B1s), np.array(B2s)


def fused_difference_prox(a, mu1, mu2) -> np.ndarray:
    """Row-wise exact prox of mu1*||.||_1 + mu2*(all pairwise |differences|).

    a: (N, K); mu1 scalar or (N,) per-row threshold; mu2 scalar.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        return fused_difference_prox(a[None, :], mu1, mu2)[0]
    N, K = a.shape
    if K == 1:
        m1 = np.asarray(mu1, dtype=float).reshape(-1, 1) if np.ndim(mu1) else float(mu1)
        return np.sign(a) * np.maximum(np.abs(a) - m1, 0.0)
    W, B1, B2 = _fused_prox_patterns(K)
    mu1v = np.broadcast_to(np.asarray(mu1, dtype=float), (N,)).reshape(N, 1, 1)
    order = np.argsort(a, axis=1, kind="stable")
    a_s = np.take_along_axis(a, order, axis=1)
    # all candidates at once: (N, P, K)
    Z = np.einsum("pkj,nj->npk", W, a_s) + mu1v * B1[None] + mu2 * B2[None]
    resid = Z - a_s[:, None, :]
    obj = 0.5 * np.sum(resid**2, axis=2) + mu1v[:, :, 0] * np.sum(np.abs(Z), axis=2)
    for k in range(K):
        for k2 in range(k + 1, K):
            obj += mu2 * np.abs(Z[:, :, k] - Z[:, :, k2])
    best = np.argmin(obj, axis=1)
    z_s = np.take_along_axis(Z, best[:, None, None], axis=1)[:, 0, :]
    out = np.empty_like(a)
    np.put_along_axis(out, order, z_s, axis=1)
    return out


def _group_prox(a, mu1_offdiag, mu2, offdiag_mask):
    """Soft-threshold off-diagonals at mu1, then shrink each K-vector of
    off-diagonal entries by the group factor max(0, 1 - mu2/||.||_2).
    Diagonals pass through unpenalized. a: (K, p, p)."""
    z = a.copy()
    w = np.sign(a) * np.maximum(np.abs(a) - mu1_offdiag, 0.0)
    norms = np.sqrt(np.sum(w**2, axis=0))
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norms > 0.0, np.maximum(0.0, 1.0 - mu2 / norms), 0.0)
    shrunk = w * scale[None, :, :]
    z[:, offdiag_mask] = shrunk[:, offdiag_mask]
    return z


def fit_jgl(data: MultiGroupDataset, params: JGLParams,
            tol: float = 1e-5, max_iter: int = 10_000, rho: float = 1.0) -> PrecisionEstimates:
    """Consensus ADMM.

    T-update (per group): with A = S_k - (rho/n_k)(Z_k - U_k) = V diag(d) V',
    the stationarity condition 1/t - (rho/n_k)*t = d has the positive root

        t_i = (-d_i + sqrt(d_i^2 + 4*rho/n_k)) / (2*rho/n_k)

    which keeps every iterate positive definite. Z-update is the prox of the
    penalty at T + U; U accumulates the consensus gap. rho is adapted by
    residual balancing (factor 2, trigger ratio 10), rescaling U with it.
    """
    K, p = data.K, data.p
    ns = data.sample_sizes
    S = data.covariances
    if params.penalty == "fused":
        _fused_prox_patterns(K)  # validate K before iterating

    offdiag = ~np.eye(p, dtype=bool)
    mu1_elem = np.where(offdiag, 1.0, 0.0).ravel()  # scaled by lam1/rho below

    diag_init = np.array([np.diag(1.0 / np.maximum(np.diag(S[k]), 1e-8)) for k in range(K)])
    Theta = diag_init.copy()
    Z = diag_init.copy()
    U = np.zeros_like(Theta)

    scale_dim = np.sqrt(K * p * p)
    rho_bumped_on_failure = False
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        try:
            for k in range(K):
                c = rho / ns[k]
                A = S[k] - c * (Z[k] - U[k])
                A = (A + A.T) / 2.0
                d, V = np.linalg.eigh(A)
                t = (-d + np.sqrt(d**2 + 4.0 * c)) / (2.0 * c)
                Theta[k] = (V * t) @ V.T
        except np.linalg.LinAlgError:
            if not rho_bumped_on_failure:
                rho_bumped_on_failure = True
                rho *= 10.0
                U /= 10.0
                continue
            break  # flagged as non-converged below

        A = Theta + U
        Z_old = Z.copy()
        if params.penalty == "fused":
            flat = A.transpose(1, 2, 0).reshape(-1, K)
            zf = fused_difference_prox(flat, (params.lam1 / rho) * mu1_elem, params.lam2 / rho)
            Z = zf.reshape(p, p, K).transpose(2, 0, 1)
        else:
            Z = _group_prox(A, params.lam1 / rho, params.lam2 / rho, offdiag)
        Z = (Z + Z.transpose(0, 2, 1)) / 2.0

        U = U + Theta - Z

        r_norm = float(np.linalg.norm(Theta - Z))
        s_norm = float(rho * np.linalg.norm(Z - Z_old))
        eps_pri = tol * (scale_dim + max(np.linalg.norm(Theta), np.linalg.norm(Z)))
        eps_dual = tol * (scale_dim + rho * np.linalg.norm(U))
        if r_norm <= eps_pri and s_norm <= eps_dual:
            converged = True
            break

        if r_norm > 10.0 * s_norm and rho < 1e6:
            rho *= 2.0
            U /= 2.0
        elif s_norm > 10.0 * r_norm and rho > 1e-4:
            rho /= 2.0
            U *= 2.0

    if not np.all(np.isfinite(Z)):
        raise NumericalError("joint graphical lasso ADMM diverged (non-finite iterate)")
    return PrecisionEstimates(theta=[Z[k].copy() for k in range(K)], converged=converged, iterations=it)
