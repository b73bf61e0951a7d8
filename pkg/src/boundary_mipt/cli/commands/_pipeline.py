"""Shared command plumbing: config resolution, fit bookkeeping and output writing."""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Callable, Iterable, Mapping
from dataclasses import replace
from pathlib import Path
from typing import Any, NoReturn

import numpy as np

from boundary_mipt.adapters.config_loader import resolve_config
from boundary_mipt.core.fits import FitError, fit_lambda, fit_lambda_vs_inverse_lx
from boundary_mipt.core.models import ExperimentConfig, FitResult, RunRecord
from boundary_mipt.render import (
    PlotSeries,
    RunOutput,
    RunSummary,
    write_csv,
    write_json_summary,
    write_svg_plot,
)

logger = logging.getLogger("boundary_mipt")

EXIT_CONFIG = 2
EXIT_FIT = 3


def _error(message: str, exit_code: int) -> NoReturn:
    """Print error to stderr and exit."""
    import typer

    typer.echo(f"Error: {message}", err=True)
    raise typer.Exit(code=exit_code)


def load_or_exit(
    command: str, config_path: Path | None, overrides: Mapping[str, Any]
) -> ExperimentConfig:
    """Resolved config, or exit 2 before anything is written."""
    try:
        return resolve_config(command, config_path, overrides)
    except FileNotFoundError:
        _error(f"Config file not found: {config_path}", EXIT_CONFIG)
    except ValueError as exc:
        _error(f"Config validation error: {exc}", EXIT_CONFIG)


def lattice_sizes(cfg: ExperimentConfig) -> list[tuple[int, int]]:
    """(lx, ly) pairs: ly defaults to lx, a single ly applies to every lx, otherwise pairwise."""
    if cfg.ly is None:
        return [(lx, lx) for lx in cfg.lx]
    if len(cfg.ly) == 1:
        return [(lx, cfg.ly[0]) for lx in cfg.lx]
    if len(cfg.ly) != len(cfg.lx):
        raise ValueError(f"ly must have one entry or one per lx, got {cfg.ly} for lx {cfg.lx}")
    return list(zip(cfg.lx, cfg.ly))


def purification_heights(cfg: ExperimentConfig, lx: int) -> list[int]:
    """Heights of a purification sweep: the configured ly list, else 3..lx."""
    heights = sorted(set(cfg.ly)) if cfg.ly is not None else list(range(3, lx + 1))
    if heights[0] < 3:
        raise ValueError(f"purification heights must be >= 3, got {heights}")
    return heights


def region_lengths(cfg: ExperimentConfig, lx: int) -> list[int]:
    """Interval lengths for an alpha fit: configured lengths, else 1..lx/2."""
    lengths = cfg.region_lengths or list(range(1, lx // 2 + 1))
    bad = [length for length in lengths if length >= lx]
    if bad:
        raise ValueError(f"region lengths {bad} do not fit inside lx={lx}")
    return sorted(set(lengths))


def config_or_exit(check: Callable[[], Any]) -> Any:
    """Run a pre-flight check that raises ValueError; exit 2 on failure."""
    try:
        return check()
    except ValueError as exc:
        _error(f"Config validation error: {exc}", EXIT_CONFIG)


class FitLog:
    """Collects fit results and failure messages for the summary."""

    def __init__(self) -> None:
        self.fits: list[FitResult] = []
        self.failures: list[str] = []

    def attempt(self, label: str, fit: Callable[[], FitResult]) -> FitResult | None:
        try:
            result = fit()
        except FitError as exc:
            logger.warning("%s: %s", label, exc)
            self.failures.append(f"{label}: {exc}")
            return None
        result = replace(result, window=f"{label}; {result.window}")
        self.fits.append(result)
        logger.info("%s: %s = %.6g +/- %.3g", label, result.kind, result.value, result.stderr)
        return result


def mean_series(
    records: Iterable[RunRecord],
    *,
    x: Callable[[RunRecord], float],
    label: Callable[[RunRecord], str],
    y: Callable[[RunRecord], float] = lambda r: r.value,
) -> tuple[PlotSeries, ...]:
    """Per-label curves of the mean y at each x."""
    groups: dict[str, dict[float, list[float]]] = defaultdict(lambda: defaultdict(list))
    for record in records:
        groups[label(record)][x(record)].append(y(record))
    return tuple(
        PlotSeries(
            label=name,
            points=tuple((px, float(np.mean(vals))) for px, vals in sorted(points.items())),
        )
        for name, points in sorted(groups.items())
    )


def finish(
    command: str,
    cfg: ExperimentConfig,
    records: Iterable[RunRecord],
    fits: FitLog,
    *,
    extras: Mapping[str, Any] | None = None,
    series: tuple[PlotSeries, ...] = (),
    x_label: str = "param",
    y_label: str = "value",
    log_x: bool = False,
    log_y: bool = False,
) -> RunOutput:
    """Write CSV, JSON and SVG into ``cfg.output``; exit 3 afterwards if a fit failed."""
    output = RunOutput(
        records=tuple(sorted(records, key=lambda r: r.sort_key)),
        summary=RunSummary(
            command=command,
            config=cfg.model_dump(mode="json"),
            fits=tuple(fits.fits),
            failures=tuple(fits.failures),
            extras=dict(extras or {}),
        ),
        series=series,
        x_label=x_label,
        y_label=y_label,
        log_x=log_x,
        log_y=log_y,
    )
    write_outputs(output, cfg.output)
    if output.summary.failed:
        _error("; ".join(output.summary.failures), EXIT_FIT)
    return output


def write_outputs(output: RunOutput, directory: Path) -> list[Path]:
    command = output.summary.command
    paths = [
        write_csv(output.records, directory / f"{command}.csv"),
        write_json_summary(output.summary, directory / f"{command}.json"),
    ]
    if output.series:
        paths.append(
            write_svg_plot(
                output.series,
                directory / f"{command}.svg",
                title=command,
                x_label=output.x_label,
                y_label=output.y_label,
                log_x=output.log_x,
                log_y=output.log_y,
            )
        )
    for path in paths:
        logger.info("wrote %s", path)
    return paths


def purification_fits(cfg: ExperimentConfig, records: list[RunRecord]) -> FitLog:
    """lambda per (p, Lx), lambda against 1/Lx over three or more sizes, and the Ly/Lx collapse."""
    fits = FitLog()
    for p in cfg.params:
        per_size: dict[int, FitResult] = {}
        for size_x in cfg.lx:
            subset = [r for r in records if r.param == p and r.lx == size_x]
            result = fits.attempt(f"p={p:g}, lx={size_x}", lambda: fit_lambda(subset, "rows"))
            if result is not None:
                per_size[size_x] = result
        if len(cfg.lx) >= 3 and len(per_size) == len(cfg.lx):
            fits.attempt(f"p={p:g}", lambda: fit_lambda_vs_inverse_lx(per_size))
        if len(cfg.lx) >= 2:
            at_p = [r for r in records if r.param == p]
            fits.attempt(f"p={p:g}, aspect", lambda: fit_lambda(at_p, "aspect"))
    return fits
