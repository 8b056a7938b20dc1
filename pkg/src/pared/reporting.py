"""Result serialization: versioned JSON and a self-contained HTML report.

The JSON layout is stable (fixed key order, no NaN/Inf) so a rerun with the
same seed reproduces the file byte for byte except for wall_time. The HTML
report embeds that JSON verbatim in a data block with id "pared-data" and
inlines the viewer bundle; it loads nothing over the network.
"""

from __future__ import annotations

import html
import importlib.resources
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .design_space import DesignSpace
from .moo_engine import MooResult
from .objectives import ModelSummary

SCHEMA_VERSION = "1"
DATA_BLOCK_ID = "pared-data"


def _clean(value):
    """Make a value JSON-serializable with deterministic formatting."""
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def results_to_dict(result: MooResult, family: str, space: DesignSpace, seed: int,
                    config_extra: dict | None = None) -> dict:
    config = {
        "total_budget": result.config.total_budget,
        "initial_design": result.config.initial_design,
        "candidate_pool_size": result.config.candidate_pool_size,
        "mc_samples": result.config.mc_samples,
        "hyperparameters": [
            {"name": s.name, "lower": s.lower, "upper": s.upper, "scale": s.scale}
            for s in space.specs
        ],
    }
    if config_extra:
        config.update(_clean(config_extra))

    evaluations = []
    for rec in result.evaluations:
        natural = {name: float(v) for name, v in zip(space.names, rec.point.natural)}
        if rec.status == "ok":
            entry = {
                "id": rec.id,
                "unit": [float(u) for u in rec.point.unit],
                "natural": natural,
                "objectives": [float(v) for v in rec.objectives.values],
                "labels": list(rec.objectives.labels),
                "directions": list(rec.objectives.directions),
                "status": "ok",
                "summary": _summary_dict(rec.summary),
            }
        else:
            entry = {
                "id": rec.id,
                "unit": [float(u) for u in rec.point.unit],
                "natural": natural,
                "objectives": None,
                "labels": None,
                "directions": None,
                "status": "failed",
                "summary": _clean(rec.summary) if rec.summary else {},
            }
        evaluations.append(entry)

    return {
        "version": SCHEMA_VERSION,
        "family": family,
        "config": config,
        "evaluations": evaluations,
        "pareto_ids": [r.id for r in result.archive.records],
        "reference_point": [float(v) for v in result.archive.reference_point],
        "hypervolume_trace": [float(v) for v in result.hypervolume_trace],
        "seed": int(seed),
        "wall_time": float(result.wall_time),
    }


def _summary_dict(summary) -> dict:
    if isinstance(summary, ModelSummary):
        return {
            "family": summary.family,
            "hyperparameters": _clean(summary.hyperparameters),
            "stats": _clean(summary.stats),
            "payload": _clean(summary.payload),
        }
    return _clean(summary) if summary else {}


def dumps_results(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False)


def _atomic_write_text(path, text: str):
    """Write to a temp file in the target directory, then rename over the
    destination, so a crash never leaves a partial file behind."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_results_json(doc: dict, path) -> str:
    text = dumps_results(doc)
    _atomic_write_text(path, text)
    return text


def schema_text() -> str:
    return importlib.resources.files("pared").joinpath(
        "assets/results-schema-v1.json").read_text()


def viewer_bundle() -> str:
    return importlib.resources.files("pared").joinpath("assets/viewer.js").read_text()


_HTML_TEMPLATE = """<!doctype html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
<style>
body {{ font-family: system-ui, sans-serif; margin: 1.5rem; color: #1a1a2e; }}
#app {{ max-width: 1100px; }}
.banner {{ background: #fdecea; border: 1px solid #c0392b; color: #7b241c;
          padding: 0.6rem 1rem; border-radius: 4px; margin-bottom: 1rem; }}
</style>
</head>
<body>
<h1>{title}</h1>
<div id="app"><noscript>Enable JavaScript to explore the archive.</noscript></div>
<script type="application/json" id="{block_id}">{data}</script>
<script type="module">
{bundle}
</script>
</body>
</html>
"""


def write_html_report(json_text: str, path, title: str = "pared report") -> None:
    """Emit a single-file report: the result JSON embedded verbatim plus the
    inlined viewer. The only transformation applied to the JSON is the
    JSON-equivalent '<\\/script' escape, which never fires for data the CLI
    produces itself."""
    data = json_text.replace("</script", "<\\/script")
    text = _HTML_TEMPLATE.format(
        title=html.escape(title),
        block_id=DATA_BLOCK_ID,
        data=data,
        bundle=viewer_bundle(),
    )
    _atomic_write_text(path, text)
