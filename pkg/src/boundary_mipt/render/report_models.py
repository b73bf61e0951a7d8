"""Shared report data models for renderers."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

from boundary_mipt.core.models import FitResult, RunRecord


@dataclass(frozen=True)
class PlotSeries:
    """One curve of a plot: a label and its (x, y) points."""

    label: str
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class RunSummary:
    """Everything a command reports besides the raw records."""

    command: str
    config: Mapping[str, Any]
    fits: tuple[FitResult, ...] = ()
    failures: tuple[str, ...] = ()
    extras: Mapping[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return bool(self.failures)


@dataclass(frozen=True)
class RunOutput:
    """Records plus summary, ready to be written."""

    records: tuple[RunRecord, ...]
    summary: RunSummary
    series: tuple[PlotSeries, ...] = ()
    x_label: str = "param"
    y_label: str = "value"
    log_x: bool = False
    log_y: bool = False
