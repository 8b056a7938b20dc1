import numpy as np
import pytest

from pared.errors import DataError
from pared.solvers.graphical import (JGLParams, fit_jgl, fused_difference_prox,
                                     lambda1_anchor_jgl, multigroup_from_matrices)
from conftest import rng

cvxpy = pytest.importorskip("cvxpy")


# frozen K=2 p=2 instance (seed 777, n=(40,60), lam1=8, lam2=5): best penalized
# objective found by the 6-parameter pattern search below, which is also rerun
# in the acceptance suite
PATTERN_ORACLE_FUSED = 160.96700892315013
PATTERN_ORACLE_GROUP = 160.9644779638429


def two_group_instance():
    g = rng(777)
    T1 = np.array([[1.5, -0.6], [-0.6, 1.2]])
    T2 = np.array([[1.4, -0.2], [-0.2, 1.3]])
    X1 = g.multivariate_normal(np.zeros(2), np.linalg.inv(T1), size=40)
    X2 = g.multivariate_normal(np.zeros(2), np.linalg.inv(T2), size=60)
    return multigroup_from_matrices([X1, X2])


def penalized_objective(thetas, data, lam1, lam2, penalty):
    val = 0.0
    p = data.p
    for k in range(data.K):
        sign, ld = np.linalg.slogdet(thetas[k])
        if sign <= 0:
            return np.inf
        val += data.sample_sizes[k] * (np.trace(data.covariances[k] @ thetas[k]) - ld)
    off = ~np.eye(p, dtype=bool)
    val += lam1 * sum(np.abs(t[off]).sum() for t in thetas)
    if penalty == "fused":
        for a in range(data.K):
            for b in range(a + 1, data.K):
                val += lam2 * np.abs(thetas[a] - thetas[b]).sum()
    else:
        sq = np.sqrt(sum(t**2 for t in thetas))
        val += lam2 * sq[off].sum()
    return val


def pattern_search_2x2(data, lam1, lam2, penalty):
    """Direct minimization over two symmetric 2x2 matrices. Coordinate moves
    alone stall on the fused ridge, so paired moves (same entry in both
    groups) are included."""
    def unpack(w):
        return [np.array([[w[0], w[1]], [w[1], w[2]]]),
                np.array([[w[3], w[4]], [w[4], w[5]]])]

    def f(w):
        return penalized_objective(unpack(w), data, lam1, lam2, penalty)

    dirs = []
    for i in range(6):
        e = np.zeros(6)
        e[i] = 1.0
        dirs += [e, -e]
    for i in range(3):
        e = np.zeros(6)
        e[i] = 1.0
        e[i + 3] = 1.0
        dirs += [e, -e]
    w = np.array([1.0, 0.0, 1.0, 1.0, 0.0, 1.0])
    fw, step = f(w), 0.5
    while step > 1e-9:
        moved = False
        for d in dirs:
            c = w + step * d
            fc = f(c)
            if fc < fw - 1e-14:
                w, fw = c, fc
                moved = True
        if not moved:
            step /= 2
    return fw


def test_single_group_no_penalty_inverts_covariance():
    g = rng(31)
    X = g.normal(size=(200, 4))
    data = multigroup_from_matrices([X])
    est = fit_jgl(data, JGLParams(lam1=0.0, lam2=0.0, penalty="fused"), tol=1e-9)
    assert np.allclose(est.theta[0], np.linalg.inv(data.covariances[0]), atol=1e-4)


def test_anchor_gives_diagonal_estimates():
    g = rng(32)
    data = multigroup_from_matrices([g.normal(size=(50, 3)), g.normal(size=(70, 3))])
    anchor = lambda1_anchor_jgl(data)
    est = fit_jgl(data, JGLParams(lam1=anchor * 1.000001, lam2=0.0, penalty="fused"))
    off = ~np.eye(3, dtype=bool)
    for T in est.theta:
        assert np.all(T[off] == 0.0)  # prox zeros are exact


def test_heavy_fusion_makes_groups_identical():
    data = two_group_instance()
    est = fit_jgl(data, JGLParams(lam1=0.0, lam2=1e4, penalty="fused"), tol=1e-9)
    assert np.allclose(est.theta[0], est.theta[1], atol=1e-8)
    assert np.allclose(np.diag(est.theta[0]), np.diag(est.theta[1]), atol=1e-8)


def test_heavy_group_penalty_empties_graph():
    data = two_group_instance()
    est = fit_jgl(data, JGLParams(lam1=0.0, lam2=1e4, penalty="group"))
    off = ~np.eye(2, dtype=bool)
    for T in est.theta:
        assert np.all(T[off] == 0.0)


@pytest.mark.parametrize("penalty,oracle", [("fused", PATTERN_ORACLE_FUSED),
                                            ("group", PATTERN_ORACLE_GROUP)])
def test_matches_pattern_search(penalty, oracle):
    data = two_group_instance()
    est = fit_jgl(data, JGLParams(lam1=8.0, lam2=5.0, penalty=penalty), tol=1e-9)
    val = penalized_objective(est.theta, data, 8.0, 5.0, penalty)
    assert val <= oracle + 1e-5


def test_pattern_search_agrees_with_frozen_values():
    data = two_group_instance()
    assert pattern_search_2x2(data, 8.0, 5.0, "fused") == pytest.approx(PATTERN_ORACLE_FUSED, abs=1e-7)
    assert pattern_search_2x2(data, 8.0, 5.0, "group") == pytest.approx(PATTERN_ORACLE_GROUP, abs=1e-7)


def test_outputs_symmetric_pd():
    g = rng(40)
    data = multigroup_from_matrices([g.normal(size=(30, 5)), g.normal(size=(45, 5)),
                                     g.normal(size=(60, 5))])
    for penalty in ("fused", "group"):
        est = fit_jgl(data, JGLParams(lam1=5.0, lam2=2.0, penalty=penalty))
        for T in est.theta:
            assert np.abs(T - T.T).max() <= 1e-10
            np.linalg.cholesky(T)  # raises if not PD


def test_deterministic():
    data = two_group_instance()
    a = fit_jgl(data, JGLParams(lam1=2.0, lam2=1.0, penalty="fused"))
    b = fit_jgl(data, JGLParams(lam1=2.0, lam2=1.0, penalty="fused"))
    for Ta, Tb in zip(a.theta, b.theta):
        assert np.array_equal(Ta, Tb)


def test_dataset_validation():
    with pytest.raises(DataError):
        multigroup_from_matrices([])
    with pytest.raises(DataError, match="group 1"):
        multigroup_from_matrices([np.zeros((5, 3)), np.zeros((5, 4))])
    with pytest.raises(DataError, match="2 samples"):
        multigroup_from_matrices([np.zeros((1, 3))])


def test_params_validation():
    with pytest.raises(ValueError):
        JGLParams(lam1=-1.0, lam2=0.0, penalty="fused")
    with pytest.raises(ValueError):
        JGLParams(lam1=0.0, lam2=0.0, penalty="ridge")


def cvxpy_fused_prox(a, mu1, mu2):
    K = len(a)
    z = cvxpy.Variable(K)
    obj = 0.5 * cvxpy.sum_squares(z - a) + mu1 * cvxpy.norm1(z)
    for i in range(K):
        for j in range(i + 1, K):
            obj += mu2 * cvxpy.abs(z[i] - z[j])
    prob = cvxpy.Problem(cvxpy.Minimize(obj))
    prob.solve(solver=cvxpy.CLARABEL)
    return np.asarray(z.value).ravel()


@pytest.mark.parametrize("K", [1, 2, 3, 4])
def test_fused_prox_against_cvxpy(K):
    g = rng(50 + K)
    def objective(z, a, mu1, mu2):
        val = 0.5 * np.sum((z - a) ** 2) + mu1 * np.abs(z).sum()
        for i in range(K):
            for j in range(i + 1, K):
                val += mu2 * abs(z[i] - z[j])
        return val

    for _ in range(12):
        a = g.normal(size=K) * 2
        mu1 = float(g.random() * 0.8)
        mu2 = float(g.random() * 0.8)
        ours = fused_difference_prox(a, mu1, mu2)
        ref = cvxpy_fused_prox(a, mu1, mu2)
        # compare by objective value; minimizers agree when unique
        assert objective(ours, a, mu1, mu2) <= objective(ref, a, mu1, mu2) + 1e-8


def test_fused_prox_vectorized_rows_match_loop():
    g = rng(60)
    A = g.normal(size=(40, 3))
    mu1 = g.random(40) * 0.5
    out = fused_difference_prox(A, mu1, 0.3)
    for i in range(40):
        row = fused_difference_prox(A[i], float(mu1[i]), 0.3)
        assert np.allclose(out[i], row, atol=1e-12)


def test_fused_prox_k1_is_soft_threshold():
    a = np.array([1.5, -0.2, 0.7])[:, None]
    out = fused_difference_prox(a, 0.5, 0.9)
    assert np.allclose(out.ravel(), [1.0, 0.0, 0.2])


def test_fused_prox_refuses_large_k():
    with pytest.raises(ValueError):
        fused_difference_prox(np.zeros((1, 9)), 0.1, 0.1)
