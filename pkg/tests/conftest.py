import numpy as np
import pytest

from pared.pareto import EvaluationRecord
from pared.design_space import DesignPoint


def rng(seed):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def brute_force_mask(values):
    """O(n^2) pairwise dominance check, kept deliberately dumb."""
    values = np.asarray(values, float)
    n = values.shape[0]
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if np.all(values[j] <= values[i]) and np.any(values[j] < values[i]):
                keep[i] = False
                break
    return keep


def mc_hypervolume(front, ref, n_samples, seed):
    """Uniform-sampling hypervolume estimate and its standard error."""
    front = np.asarray(front, float)
    ref = np.asarray(ref, float)
    lo = front.min(axis=0)
    box = np.prod(ref - lo)
    g = rng(seed)
    pts = lo + g.random((n_samples, front.shape[1])) * (ref - lo)
    dominated = np.zeros(n_samples, dtype=bool)
    for f in front:
        dominated |= np.all(pts >= f, axis=1)
    p = dominated.mean()
    se = box * np.sqrt(p * (1 - p) / n_samples)
    return box * p, se


def record(i, values, unit=None, status="ok"):
    unit = [0.5] if unit is None else list(unit)
    vals = None if values is None else np.asarray(values, float)
    from pared.objectives import ObjectiveVector
    obj = None
    if vals is not None:
        obj = ObjectiveVector(values=vals, labels=tuple(f"f{k}" for k in range(len(vals))),
                              directions=("min",) * len(vals))
    return EvaluationRecord(id=i, point=DesignPoint(unit=np.asarray(unit, float),
                                                    natural=np.asarray(unit, float)),
                            objectives=obj, summary={}, status=status)


def dense_gp_reference(X, y_std, lengthscales, sigma2, tau2):
    """Mean/variance/log-marginal via plain inv() and slogdet, no Cholesky."""
    from pared.surrogate import matern52
    K = matern52(X, X, lengthscales, sigma2) + tau2 * np.eye(X.shape[0])
    Kinv = np.linalg.inv(K)
    _, logdet = np.linalg.slogdet(K)
    lml = -0.5 * y_std @ Kinv @ y_std - 0.5 * logdet - 0.5 * len(y_std) * np.log(2 * np.pi)

    def posterior(U):
        ks = matern52(X, np.atleast_2d(U), lengthscales, sigma2)
        mean = ks.T @ Kinv @ y_std
        var = sigma2 - np.einsum("ij,ik,kj->j", ks, Kinv, ks)
        return mean, var

    return lml, posterior


@pytest.fixture
def tmp_csv(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p
    return write
