"""JSON summary renderer."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from boundary_mipt.core.models import FitResult
from boundary_mipt.render.report_models import RunSummary
from boundary_mipt.version import __version__


def version_string() -> str:
    return f"v{__version__}"


def fit_payload(fit: FitResult) -> dict[str, Any]:
    return {
        "kind": fit.kind,
        "value": fit.value,
        "stderr": fit.stderr,
        "window": fit.window,
        "n_points": fit.n_points,
        "r_squared": fit.r_squared,
    }


def _clean(value: Any) -> Any:
    """Non-finite floats become None so the output stays strict JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def render_json_summary(summary: RunSummary) -> str:
    """Render a run summary as canonical JSON."""
    payload = {
        "version": version_string(),
        "command": summary.command,
        "config": dict(summary.config),
        "fits": [fit_payload(fit) for fit in summary.fits],
        "failures": list(summary.failures),
        "extras": dict(summary.extras),
    }
    return json.dumps(_clean(payload), indent=2, sort_keys=True) + "\n"


def write_json_summary(summary: RunSummary, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_json_summary(summary), encoding="utf-8")
    return path
