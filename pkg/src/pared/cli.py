"""Command-line entry point.

Subcommands: one per model family (enet, flasso, jgl) plus `simulate` for
synthetic inputs. Each run writes a versioned JSON result and optionally a
self-contained HTML report. Exit codes: 0 success, 2 configuration error,
3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .design_space import DesignSpace, HyperparameterSpec
from .datasets import (
    load_group_csvs,
    load_regression_csv,
    simulate_groups,
    simulate_regression,
    write_group_csvs,
    write_regression_csv,
)
from .errors import ConfigError, DataError, NumericalError, ParedError
from .moo_engine import (
    BudgetConfig,
    default_initial_design,
    make_problem_enet,
    make_problem_flasso,
    make_problem_jgl,
    run_moo,
)
from .reporting import results_to_dict, write_html_report, write_results_json
from .solvers.graphical import lambda1_anchor_jgl, multigroup_from_matrices
from .solvers.regression import (
    lambda_anchor_enet,
    lambda_anchor_flasso_fusion,
    prepare_regression,
)

ALPHA_ANCHOR_FLOOR = 1e-3
LAMBDA_SPAN = 1e-4  # default lower bound = span * anchor


@dataclass
class RunConfig:
    family: str
    inputs: list
    response: str = "y"
    budget: int = 50
    initial: int | None = None
    seed: int = 0
    penalty: str = "fused"
    bounds: dict = field(default_factory=dict)  # name -> (min, max) overrides
    pool: int = 1000
    mc_samples: int = 512
    tol: float | None = None
    edge_eps: float = 1e-6
    out_json: str | None = None
    out_html: str | None = None


def _log_spec(name: str, anchor: float, bounds: dict) -> HyperparameterSpec:
    lo, hi = bounds.get(name, (None, None))
    if hi is None:
        hi = anchor
    if lo is None:
        lo = LAMBDA_SPAN * hi
    if lo <= 0:
        raise ConfigError(f"{name}: penalty bounds must be positive, got min {lo}")
    return HyperparameterSpec(name, float(lo), float(hi), scale="log10")


def build_space(cfg: RunConfig, data) -> DesignSpace:
    """Default domains: penalties on log10 over [1e-4*anchor, anchor], where
    the anchor is the smallest penalty producing the fully sparse (or fully
    fused) model; the mixing weight alpha is linear on [0, 1]."""
    if cfg.family == "enet":
        a_lo, a_hi = cfg.bounds.get("alpha", (0.0, 1.0))
        # anchor at the middle of the alpha range: anchoring at alpha_max puts
        # the all-zero corner at a single boundary point of the rectangle,
        # leaving the sparse end of the trade-off effectively unreachable
        anchor_alpha = max((float(a_lo) + float(a_hi)) / 2.0, ALPHA_ANCHOR_FLOOR)
        anchor = lambda_anchor_enet(data, anchor_alpha)
        return DesignSpace((
            _log_spec("lambda", anchor, cfg.bounds),
            HyperparameterSpec("alpha", float(a_lo), float(a_hi), scale="linear"),
        ))
    if cfg.family == "flasso":
        return DesignSpace((
            _log_spec("lambda1", lambda_anchor_enet(data, 1.0), cfg.bounds),
            _log_spec("lambda2", lambda_anchor_flasso_fusion(data), cfg.bounds),
        ))
    anchor = lambda1_anchor_jgl(data)
    return DesignSpace((
        _log_spec("lambda1", anchor, cfg.bounds),
        _log_spec("lambda2", anchor, cfg.bounds),
    ))


def run(cfg: RunConfig) -> int:
    """Load data, search, write outputs. Raises ParedError subclasses."""
    if cfg.family == "enet":
        X, y, _ = load_regression_csv(cfg.inputs[0], cfg.response)
        data = prepare_regression(X, y)
        problem = make_problem_enet(data, **_solver_kwargs(cfg, tol_default=1e-7))
        family = "enet"
    elif cfg.family == "flasso":
        X, y, _ = load_regression_csv(cfg.inputs[0], cfg.response)
        data = prepare_regression(X, y)
        problem = make_problem_flasso(data, **_solver_kwargs(cfg, tol_default=1e-5))
        family = "flasso"
    elif cfg.family == "jgl":
        if len(cfg.inputs) < 2:
            raise ConfigError("jgl needs at least two group files")
        mats, _ = load_group_csvs(cfg.inputs)
        data = multigroup_from_matrices(mats)
        problem = make_problem_jgl(data, cfg.penalty, edge_eps=cfg.edge_eps,
                                   **_solver_kwargs(cfg, tol_default=1e-5))
        family = f"jgl-{cfg.penalty}"
    else:
        raise ConfigError(f"unknown family {cfg.family!r}")

    try:
        space = build_space(cfg, data)
    except ValueError as exc:  # user-supplied bounds that fail validation
        raise ConfigError(str(exc)) from exc
    n0 = cfg.initial if cfg.initial is not None else default_initial_design(
        cfg.budget, space.dimension)
    if cfg.budget < n0 + 1:
        raise ConfigError(
            f"budget {cfg.budget} leaves no room for the search: the initial design "
            f"alone needs {n0} evaluations")
    budget = BudgetConfig(total_budget=cfg.budget, initial_design=n0,
                          candidate_pool_size=cfg.pool, mc_samples=cfg.mc_samples,
                          seed=cfg.seed)

    result = run_moo(problem, space, budget)

    doc = results_to_dict(result, family, space, cfg.seed, config_extra={
        "inputs": [str(p) for p in cfg.inputs],
        "response": cfg.response if cfg.family in ("enet", "flasso") else None,
        "edge_eps": cfg.edge_eps if cfg.family == "jgl" else None,
        "tol": cfg.tol,
    })
    json_text = None
    if cfg.out_json:
        json_text = write_results_json(doc, cfg.out_json)
        print(f"wrote {cfg.out_json}")
    if cfg.out_html:
        if json_text is None:
            from .reporting import dumps_results
            json_text = dumps_results(doc)
        write_html_report(json_text, cfg.out_html,
                          title=f"pared report: {family}")
        print(f"wrote {cfg.out_html}")
    if not cfg.out_json and not cfg.out_html:
        arch = len(result.archive.records)
        print(f"archive size {arch}, hypervolume {result.hypervolume_trace[-1]:.6g} "
              f"(no --out-json/--out-html given, nothing written)")
    return 0


def _solver_kwargs(cfg: RunConfig, tol_default: float) -> dict:
    return {"tol": cfg.tol if cfg.tol is not None else tol_default}


def _add_run_flags(sp, two_lambdas: bool):
    sp.add_argument("--budget", type=int, default=50, help="total successful evaluations")
    sp.add_argument("--initial", type=int, default=None,
                    help="initial design size (default max(d+2, budget/5))")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--pool", type=int, default=1000, help="candidate pool size")
    sp.add_argument("--mc-samples", type=int, default=512)
    sp.add_argument("--tol", type=float, default=None, help="solver tolerance")
    sp.add_argument("--out-json", default=None)
    sp.add_argument("--out-html", default=None)
    if two_lambdas:
        sp.add_argument("--lambda1-min", type=float, default=None)
        sp.add_argument("--lambda1-max", type=float, default=None)
        sp.add_argument("--lambda2-min", type=float, default=None)
        sp.add_argument("--lambda2-max", type=float, default=None)
    else:
        sp.add_argument("--lambda-min", type=float, default=None)
        sp.add_argument("--lambda-max", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pared",
        description="Pareto-front hyperparameter selection for penalized models")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    enet = sub.add_parser("enet", help="elastic-net regression")
    enet.add_argument("data", help="CSV with the response and predictors")
    enet.add_argument("--response", default="y")
    enet.add_argument("--alpha-min", type=float, default=0.0)
    enet.add_argument("--alpha-max", type=float, default=1.0)
    _add_run_flags(enet, two_lambdas=False)

    fl = sub.add_parser("flasso", help="fused-lasso regression")
    fl.add_argument("data", help="CSV with the response and predictors")
    fl.add_argument("--response", default="y")
    _add_run_flags(fl, two_lambdas=True)

    jgl = sub.add_parser("jgl", help="joint graphical lasso over several groups")
    jgl.add_argument("data", nargs="+", help="one CSV per group, identical headers")
    jgl.add_argument("--penalty", choices=["fused", "group"], default="fused")
    jgl.add_argument("--edge-eps", type=float, default=1e-6,
                     help="absolute threshold defining an edge")
    _add_run_flags(jgl, two_lambdas=True)

    sim = sub.add_parser("simulate", help="generate synthetic inputs")
    sim_sub = sim.add_subparsers(dest="kind", required=True)
    reg = sim_sub.add_parser("regression")
    reg.add_argument("--n", type=int, default=100)
    reg.add_argument("--p", type=int, default=5)
    reg.add_argument("--seed", type=int, default=0)
    reg.add_argument("--noise", type=float, default=1.0)
    reg.add_argument("--pattern", choices=["dense", "piecewise"], default="dense")
    reg.add_argument("--out", required=True)
    grp = sim_sub.add_parser("groups")
    grp.add_argument("--p", type=int, default=20)
    grp.add_argument("--sizes", required=True, help="comma-separated group sizes")
    grp.add_argument("--seed", type=int, default=0)
    grp.add_argument("--out-prefix", required=True)
    return parser


def _bounds_from_args(args, two_lambdas: bool) -> dict:
    bounds = {}
    if two_lambdas:
        for name in ("lambda1", "lambda2"):
            lo = getattr(args, f"{name}_min")
            hi = getattr(args, f"{name}_max")
            if lo is not None or hi is not None:
                bounds[name] = (lo, hi)
    else:
        if args.lambda_min is not None or args.lambda_max is not None:
            bounds["lambda"] = (args.lambda_min, args.lambda_max)
    if getattr(args, "alpha_min", None) is not None and hasattr(args, "alpha_max"):
        if not 0.0 <= args.alpha_min < args.alpha_max <= 1.0:
            raise ConfigError(
                f"alpha bounds must satisfy 0 <= min < max <= 1, got "
                f"[{args.alpha_min}, {args.alpha_max}]")
        bounds["alpha"] = (args.alpha_min, args.alpha_max)
    return bounds


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _run_simulate(args)
        if args.command in ("enet", "flasso"):
            cfg = RunConfig(
                family=args.command, inputs=[args.data], response=args.response,
                budget=args.budget, initial=args.initial, seed=args.seed,
                bounds=_bounds_from_args(args, two_lambdas=args.command == "flasso"),
                pool=args.pool, mc_samples=args.mc_samples, tol=args.tol,
                out_json=args.out_json, out_html=args.out_html)
            return run(cfg)
        if args.command == "jgl":
            cfg = RunConfig(
                family="jgl", inputs=list(args.data), budget=args.budget,
                initial=args.initial, seed=args.seed, penalty=args.penalty,
                bounds=_bounds_from_args(args, two_lambdas=True), pool=args.pool,
                mc_samples=args.mc_samples, tol=args.tol, edge_eps=args.edge_eps,
                out_json=args.out_json, out_html=args.out_html)
            return run(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except ParedError as exc:
        print(f"pared: error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 1)
    except OSError as exc:
        print(f"pared: i/o error: {exc}", file=sys.stderr)
        return DataError.exit_code


def _run_simulate(args) -> int:
    if args.kind == "regression":
        X, y, _ = simulate_regression(args.n, args.p, args.seed,
                                      pattern=args.pattern, noise=args.noise)
        path = write_regression_csv(args.out, X, y)
        print(f"wrote {path}")
        return 0
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if not sizes:
        raise ConfigError("--sizes must list at least one group size")
    mats, _ = simulate_groups(args.p, sizes, args.seed)
    for path in write_group_csvs(args.out_prefix, mats):
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
