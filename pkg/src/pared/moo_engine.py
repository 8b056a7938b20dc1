"""Sequential model-based search over the hyperparameter domain.

The loop: evaluate a seeded latin-hypercube design, then repeatedly fit one
GP per objective, score a candidate pool by Monte-Carlo expected hypervolume
improvement (common random numbers within an iteration, so the argmax is
deterministic) and evaluate the winner. Failed evaluations are recorded but
do not consume budget; ten consecutive failures abort the run.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .design_space import DesignSpace, DesignPoint, latin_hypercube, point_from_unit
from .errors import ConfigError, NumericalError
from .objectives import (
    ObjectiveVector,
    ModelSummary,
    enet_objectives,
    flasso_objectives,
    jgl_fused_objectives,
    jgl_group_objectives,
)
from .pareto import (
    EvaluationRecord,
    ParetoArchive,
    compute_reference_point,
    ehvi_mc_batch,
    hypervolume,
    non_dominated_filter,
    non_dominated_mask,
    prepare_front_for_hvi,
)
from .solvers.graphical import JGLParams, MultiGroupDataset, fit_jgl
from .solvers.regression import (
    ElasticNetParams,
    FusedLassoParams,
    RegressionDataset,
    fit_elastic_net,
    fit_fused_lasso,
)
from .surrogate import fit_gp, predict

N_PERTURBED = 20
PERTURB_SD = 0.05
MAX_CONSECUTIVE_FAILURES = 10

# stream tags so every random draw has its own counter-based seed
_TAG_INIT, _TAG_GP, _TAG_POOL, _TAG_PERTURB, _TAG_MC = 1, 2, 3, 4, 5


def default_initial_design(total_budget: int, dimension: int) -> int:
    return max(dimension + 2, math.ceil(total_budget / 5))


@dataclass(frozen=True)
class BudgetConfig:
    total_budget: int
    initial_design: int
    candidate_pool_size: int = 1000
    mc_samples: int = 512
    seed: int = 0

    def __post_init__(self):
        if self.total_budget < 1:
            raise ConfigError(f"total budget must be >= 1, got {self.total_budget}")
        if not self.initial_design < self.total_budget:
            raise ConfigError(
                f"initial design ({self.initial_design}) must be smaller than "
                f"the total budget ({self.total_budget})")
        if self.candidate_pool_size < 1:
            raise ConfigError("candidate pool must not be empty")
        if self.mc_samples < 1:
            raise ConfigError("need at least one Monte-Carlo sample")
        if self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")


@dataclass
class MooResult:
    evaluations: list
    archive: ParetoArchive
    hypervolume_trace: list
    config: BudgetConfig
    wall_time: float


def _sub_seed(seed: int, tag: int, *rest) -> int:
    ss = np.random.SeedSequence([int(seed), int(tag), *[int(r) for r in rest]])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _rng(seed: int, tag: int, *rest) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(
        np.random.SeedSequence([int(seed), int(tag), *[int(r) for r in rest]])))


def ehvi(surrogates, u, archive_front, reference_point, mc_samples: int = 512, seed: int = 0) -> float:
    """Monte-Carlo E[max(0, HV(front + {Y}) - HV(front))] for the Gaussian
    prediction of ``surrogates`` at unit point ``u``. The same seed gives the
    same draws for every candidate, which is what the engine relies on."""
    ref = np.asarray(reference_point, dtype=float)
    q = ref.shape[0]
    if len(surrogates) != q:
        raise ValueError("one surrogate per objective is required")
    u = np.asarray(u, dtype=float)
    mu = np.empty((1, q))
    sd = np.empty((1, q))
    for i, gp in enumerate(surrogates):
        m, v = predict(gp, u)
        mu[0, i] = m
        sd[0, i] = math.sqrt(max(v, 0.0))
    front = np.asarray(archive_front, dtype=float).reshape(-1, q) if np.size(archive_front) else np.empty((0, q))
    fr, xorder = prepare_front_for_hvi(front, ref)
    draws = _rng(seed, _TAG_MC).standard_normal((mc_samples, q))
    return float(ehvi_mc_batch(mu, sd, draws, fr, xorder, ref)[0])


def _unique_candidate(u: np.ndarray, seen: set) -> np.ndarray:
    """Nudge an already-evaluated unit point by 1e-6 until it is new."""
    v = u.copy()
    step = 1e-6
    for _ in range(64):
        if tuple(v) not in seen:
            return v
        v = np.clip(v + step, 0.0, 1.0)
        step = -step * 1.5
    return v


def run_moo(problem, space: DesignSpace, budget: BudgetConfig, log="stderr") -> MooResult:
    """Run the full search and return every evaluation, the final archive and
    the retrospective hypervolume trace (computed against the final reference
    point, so it is non-decreasing).

    ``problem`` maps a DesignPoint to (ObjectiveVector, ModelSummary) and may
    raise to signal a failed evaluation. Progress lines go to ``log``
    (stderr by default, None for quiet).
    """
    if budget.initial_design < space.dimension + 2:
        raise ConfigError(
            f"initial design must have at least d+2 = {space.dimension + 2} points, "
            f"got {budget.initial_design}")
    if log == "stderr":
        log = sys.stderr
    t_start = time.monotonic()

    evaluations: list[EvaluationRecord] = []
    seen_units: set = set()
    consecutive_failures = 0

    def evaluate(pt: DesignPoint) -> EvaluationRecord:
        nonlocal consecutive_failures
        rec_id = len(evaluations)
        try:
            obj, summary = problem(pt)
            rec = EvaluationRecord(id=rec_id, point=pt, objectives=obj, summary=summary, status="ok")
            consecutive_failures = 0
        except Exception as exc:  # scored failures keep the loop alive
            rec = EvaluationRecord(id=rec_id, point=pt, objectives=None,
                                   summary={"error": str(exc)}, status="failed")
            consecutive_failures += 1
        evaluations.append(rec)
        seen_units.add(tuple(pt.unit))
        if consecutive_failures >= MAX_CONSECUTIVE_FAILURES:
            raise NumericalError(
                f"{MAX_CONSECUTIVE_FAILURES} consecutive evaluation failures, aborting")
        return rec

    for pt in latin_hypercube(space, budget.initial_design, _sub_seed(budget.seed, _TAG_INIT)):
        rec = evaluate(pt)
        _log_eval(log, rec, len(evaluations), budget.total_budget, space)
    ok_records = [r for r in evaluations if r.status == "ok"]
    if not ok_records:
        raise NumericalError("every initial-design evaluation failed")

    q = len(ok_records[0].objectives.values)
    iteration = 0
    while len(ok_records) < budget.total_budget:
        iteration += 1
        units = np.array([r.point.unit for r in ok_records])
        values = np.array([r.objectives.values for r in ok_records])
        ref = compute_reference_point(values)
        front = values[non_dominated_mask(values)]
        fr, xorder = prepare_front_for_hvi(front, ref)

        gps = [fit_gp(units, values[:, i], _sub_seed(budget.seed, _TAG_GP, iteration, i))
               for i in range(q)]

        pool_pts = latin_hypercube(space, budget.candidate_pool_size,
                                   _sub_seed(budget.seed, _TAG_POOL, iteration))
        pool = np.array([p.unit for p in pool_pts])
        archive_units = np.array([r.point.unit for r in ok_records])[non_dominated_mask(values)]
        prng = _rng(budget.seed, _TAG_PERTURB, iteration)
        perturbed = np.empty((N_PERTURBED, space.dimension))
        for i in range(N_PERTURBED):
            base = archive_units[i % archive_units.shape[0]]
            perturbed[i] = np.clip(base + PERTURB_SD * prng.standard_normal(space.dimension), 0.0, 1.0)
        cand = np.vstack([pool, perturbed])

        mu = np.empty((cand.shape[0], q))
        sd = np.empty((cand.shape[0], q))
        for i, gp in enumerate(gps):
            m, v = predict(gp, cand)
            mu[:, i] = m
            sd[:, i] = np.sqrt(np.maximum(v, 0.0))
        draws = _rng(budget.seed, _TAG_MC, iteration).standard_normal((budget.mc_samples, q))
        scores = ehvi_mc_batch(mu, sd, draws, fr, xorder, ref)
        pick = int(np.argmax(scores))  # ties resolve to the lowest index

        u = _unique_candidate(cand[pick], seen_units)
        rec = evaluate(point_from_unit(space, u))
        if rec.status == "ok":
            ok_records.append(rec)
        _log_eval(log, rec, len(ok_records), budget.total_budget, space,
                  archive_size=int(non_dominated_mask(
                      np.array([r.objectives.values for r in ok_records])).sum()))

    final_values = np.array([r.objectives.values for r in ok_records])
    final_ref = compute_reference_point(final_values)
    archive = non_dominated_filter(ok_records, reference_point=final_ref)
    trace = []
    for i in range(1, len(ok_records) + 1):
        prefix = final_values[:i]
        trace.append(hypervolume(prefix[non_dominated_mask(prefix)], final_ref))
    return MooResult(
        evaluations=evaluations,
        archive=archive,
        hypervolume_trace=trace,
        config=budget,
        wall_time=time.monotonic() - t_start,
    )


def _log_eval(log, rec: EvaluationRecord, done: int, total: int, space: DesignSpace,
              archive_size=None):
    if log is None:
        return
    params = ", ".join(f"{n}={v:.4g}" for n, v in zip(space.names, rec.point.natural))
    if rec.status == "ok":
        vals = ", ".join(f"{v:.6g}" for v in rec.objectives.values)
        extra = f" | archive {archive_size}" if archive_size is not None else ""
        print(f"[pared] eval {done}/{total} ok ({params}) -> ({vals}){extra}", file=log)
    else:
        print(f"[pared] eval {done}/{total} FAILED ({params}): {rec.summary.get('error', '?')}",
              file=log)


# ---------------------------------------------------------------------------
# Problem factories: bind a dataset and solver settings into the callback the
# loop evaluates, and build the default search domains.
# ---------------------------------------------------------------------------

def make_problem_enet(data: RegressionDataset, tol: float = 1e-7, max_iter: int = 100_000):
    def problem(pt: DesignPoint):
        lam, alpha = float(pt.natural[0]), float(pt.natural[1])
        fit = fit_elastic_net(data, ElasticNetParams(lam=lam, alpha=alpha),
                              tol=tol, max_iter=max_iter)
        obj = enet_objectives(fit, data)
        summary = ModelSummary(
            family="enet",
            hyperparameters={"lambda": lam, "alpha": alpha},
            stats={"deviance": obj.values[0], "nonzero": int(obj.values[1]),
                   "l2_norm": obj.values[2], "converged": fit.converged,
                   "iterations": fit.iterations},
            payload={"beta": [float(b) for b in fit.beta]},
        )
        return obj, summary
    return problem


def make_problem_flasso(data: RegressionDataset, tol: float = 1e-5, max_iter: int = 10_000):
    def problem(pt: DesignPoint):
        lam1, lam2 = float(pt.natural[0]), float(pt.natural[1])
        fit = fit_fused_lasso(data, FusedLassoParams(lam1=lam1, lam2=lam2),
                              tol=tol, max_iter=max_iter)
        obj = flasso_objectives(fit, data)
        summary = ModelSummary(
            family="flasso",
            hyperparameters={"lambda1": lam1, "lambda2": lam2},
            stats={"rss": obj.values[0], "nonzero": int(obj.values[1]),
                   "roughness": obj.values[2], "converged": fit.converged,
                   "iterations": fit.iterations},
            payload={"beta": [float(b) for b in fit.beta]},
        )
        return obj, summary
    return problem


def make_problem_jgl(data: MultiGroupDataset, penalty: str, edge_eps: float = 1e-6,
                     tol: float = 1e-5, max_iter: int = 10_000):
    if penalty not in ("fused", "group"):
        raise ConfigError(f"penalty must be 'fused' or 'group', got {penalty!r}")
    score = jgl_fused_objectives if penalty == "fused" else jgl_group_objectives

    def problem(pt: DesignPoint):
        lam1, lam2 = float(pt.natural[0]), float(pt.natural[1])
        est = fit_jgl(data, JGLParams(lam1=lam1, lam2=lam2, penalty=penalty),
                      tol=tol, max_iter=max_iter)
        obj = score(est, data, edge_eps=edge_eps)
        iu = np.triu_indices(data.p, k=1)
        edges = []
        for T in est.theta:
            vals = T[iu]
            keep = np.abs(vals) > edge_eps
            edges.append([[int(i), int(j), float(v)]
                          for i, j, v in zip(iu[0][keep], iu[1][keep], vals[keep])])
        summary = ModelSummary(
            family=f"jgl-{penalty}",
            hyperparameters={"lambda1": lam1, "lambda2": lam2},
            stats={"aic": obj.values[0], "total_edges": int(obj.values[1]),
                   "edges_per_group": [len(e) for e in edges],
                   "min_eigenvalue": float(min(np.linalg.eigvalsh(T).min() for T in est.theta)),
                   "converged": est.converged, "iterations": est.iterations},
            payload={"edges": edges},
        )
        return obj, summary
    return problem
