#!/usr/bin/env python3
"""Reproduce the four desk-scale search scenarios and print a timing table.

Each scenario simulates its dataset, runs the full search, and reports wall
time, archive size, and final hypervolume. Pass --out-dir to also write the
JSON/HTML report for every run.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pared.cli import RunConfig, build_space
from pared.datasets import simulate_groups, simulate_regression
from pared.moo_engine import (BudgetConfig, make_problem_enet, make_problem_flasso,
                              make_problem_jgl, run_moo)
from pared.reporting import results_to_dict, write_html_report, write_results_json, dumps_results
from pared.solvers.graphical import multigroup_from_matrices
from pared.solvers.regression import prepare_regression

SCENARIOS = [
    ("enet", dict(budget=50, seed=123)),
    ("flasso", dict(budget=80, seed=11)),
    ("jgl-fused", dict(budget=40, seed=41, sizes=(20, 40, 60, 80))),
    ("jgl-group", dict(budget=50, seed=42, sizes=(30, 50, 40, 70))),
]


def build(name, spec):
    if name == "enet":
        X, y, _ = simulate_regression(100, 5, seed=31)
        data = prepare_regression(X, y)
        return data, make_problem_enet(data), "enet"
    if name == "flasso":
        X, y, _ = simulate_regression(100, 10, seed=57, pattern="piecewise")
        data = prepare_regression(X, y)
        return data, make_problem_flasso(data), "flasso"
    penalty = name.split("-")[1]
    mats, _ = simulate_groups(p=20, sizes=spec["sizes"], seed=19)
    data = multigroup_from_matrices(mats)
    return data, make_problem_jgl(data, penalty), "jgl"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=None,
                    help="write <scenario>.json and <scenario>.html here")
    ap.add_argument("--quiet", action="store_true", help="suppress per-eval progress")
    args = ap.parse_args()

    rows = []
    for name, spec in SCENARIOS:
        data, problem, family = build(name, spec)
        cfg = RunConfig(family=family, inputs=[], budget=spec["budget"], seed=spec["seed"],
                        penalty=name.split("-")[1] if family == "jgl" else "fused")
        space = build_space(cfg, data)
        n0 = max(space.dimension + 2, -(-spec["budget"] // 5))
        t0 = time.monotonic()
        res = run_moo(problem, space,
                      BudgetConfig(spec["budget"], n0, seed=spec["seed"]),
                      log=None if args.quiet else "stderr")
        dt = time.monotonic() - t0
        rows.append((name, spec["budget"], dt, len(res.archive.records),
                     res.hypervolume_trace[-1]))
        if args.out_dir:
            args.out_dir.mkdir(parents=True, exist_ok=True)
            fam = name if family != "jgl" else f"jgl-{cfg.penalty}"
            doc = results_to_dict(res, fam, space, spec["seed"])
            text = write_results_json(doc, args.out_dir / f"{name}.json")
            write_html_report(text, args.out_dir / f"{name}.html",
                              title=f"pared report: {fam}")

    print(f"\n{'scenario':<12}{'budget':>8}{'seconds':>10}{'archive':>9}{'hypervolume':>14}")
    for name, budget, dt, arch, hv in rows:
        print(f"{name:<12}{budget:>8}{dt:>10.1f}{arch:>9}{hv:>14.5g}")


if __name__ == "__main__":
    main()
