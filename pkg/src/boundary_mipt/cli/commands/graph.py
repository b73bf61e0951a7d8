"""Graph-state model commands: graph-scan, graph-critical, mutual-info, purify."""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import List, Optional

import typer

from boundary_mipt.cli.commands._options import (
    CONFIG_OPTION,
    LX_OPTION,
    LY_OPTION,
    OUTPUT_OPTION,
    Q_OPTION,
    SAMPLES_OPTION,
    SEED_OPTION,
    SWEEP_HEIGHTS_OPTION,
    WINDOW_OPTION,
    WORKERS_OPTION,
    overrides,
)
from boundary_mipt.cli.commands._pipeline import (
    FitLog,
    config_or_exit,
    finish,
    lattice_sizes,
    load_or_exit,
    mean_series,
    purification_fits,
    purification_heights,
    region_lengths,
)
from boundary_mipt.core.experiments import (
    fraction_region,
    interval_region,
    run_entropy_trace,
    run_mutual_info,
    run_strip_entropy,
    run_two_edge_purification,
)
from boundary_mipt.core.fits import (
    DELTA_BINS,
    bin_by_eta,
    estimate_pc,
    fit_alpha,
    fit_delta,
    mutual_info_points,
)
from boundary_mipt.core.models import RunRecord
from boundary_mipt.render import PlotSeries

logger = logging.getLogger("boundary_mipt")

PX_OPTION = typer.Option(None, "--px", help="X-measurement probability; repeat for a grid.")


def _size_label(record: RunRecord) -> str:
    return f"Lx={record.lx}"


def graph_scan(
    config: Optional[Path] = CONFIG_OPTION,
    q: Optional[int] = Q_OPTION,
    lx: Optional[List[int]] = LX_OPTION,
    ly: Optional[List[int]] = LY_OPTION,
    px: Optional[List[float]] = PX_OPTION,
    region_fraction: Optional[float] = typer.Option(
        None, "--region-fraction", help="Boundary interval length as a fraction of Lx."
    ),
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    workers: Optional[int] = WORKERS_OPTION,
    window: Optional[int] = WINDOW_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
) -> None:
    """Boundary entropy over a p_x grid; estimates p_c when three or more sizes are given."""
    cfg = load_or_exit(
        "graph-scan",
        config,
        overrides(
            q=q, lx=lx, ly=ly, params=px, region_fraction=region_fraction,
            samples=samples, seed=seed, workers=workers, window=window, output=output,
        ),
    )
    sizes = config_or_exit(lambda: lattice_sizes(cfg))
    records: list[RunRecord] = []
    for size_x, size_y in sizes:
        region = fraction_region(size_x, cfg.region_fraction)
        for p in cfg.params:
            logger.info("graph-scan: q=%d lx=%d ly=%d p_x=%g", cfg.q, size_x, size_y, p)
            records += run_strip_entropy(
                cfg.lattice(size_x, size_y),
                cfg.q,
                cfg.policy(p),
                region,
                cfg.samples,
                cfg.seed,
                window=cfg.effective_window,
                workers=cfg.workers,
            )
    fits = FitLog()
    if len(sizes) >= 3 and len(cfg.params) >= 2:
        fits.attempt(f"q={cfg.q}", lambda: estimate_pc(records))
    else:
        logger.info("graph-scan: p_c needs >= 3 sizes and >= 2 grid points; skipped")
    finish(
        "graph-scan",
        cfg,
        records,
        fits,
        series=mean_series(
            records, x=lambda r: r.param, label=_size_label, y=lambda r: r.value / math.log(r.lx)
        ),
        x_label="p_x",
        y_label="S_A / ln Lx",
    )


def graph_critical(
    config: Optional[Path] = CONFIG_OPTION,
    q: Optional[int] = Q_OPTION,
    lx: Optional[List[int]] = LX_OPTION,
    ly: Optional[List[int]] = LY_OPTION,
    px: Optional[List[float]] = PX_OPTION,
    lengths: Optional[List[int]] = typer.Option(
        None, "--length", help="Interval length L_A; repeat. Default: 1..Lx/2."
    ),
    trace: bool = typer.Option(
        False, "--trace", help="Record the boundary entropy after every row instead."
    ),
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    workers: Optional[int] = WORKERS_OPTION,
    window: Optional[int] = WINDOW_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
) -> None:
    """Entropy against interval length at fixed p_x, fitted to 2 alpha log(chord length)."""
    cfg = load_or_exit(
        "graph-critical",
        config,
        overrides(
            q=q, lx=lx, ly=ly, params=px, region_lengths=lengths,
            samples=samples, seed=seed, workers=workers, window=window, output=output,
        ),
    )
    sizes = config_or_exit(lambda: lattice_sizes(cfg))
    if trace:
        plans = [(x, y, [fraction_region(x, cfg.region_fraction)]) for x, y in sizes]
    else:
        plans = config_or_exit(
            lambda: [
                (x, y, [interval_region(x, length) for length in region_lengths(cfg, x)])
                for x, y in sizes
            ]
        )
    run = run_entropy_trace if trace else run_strip_entropy
    records: list[RunRecord] = []
    fits = FitLog()
    for size_x, size_y, regions in plans:
        for p in cfg.params:
            logger.info("graph-critical: q=%d lx=%d ly=%d p_x=%g", cfg.q, size_x, size_y, p)
            records += run(
                cfg.lattice(size_x, size_y),
                cfg.q,
                cfg.policy(p),
                regions,
                cfg.samples,
                cfg.seed,
                window=cfg.effective_window,
                workers=cfg.workers,
            )
    if trace:
        finish(
            "graph-critical",
            cfg,
            records,
            fits,
            series=mean_series(
                records, x=lambda r: r.ly, label=lambda r: f"Lx={r.lx}, p_x={r.param:g}"
            ),
            x_label="Ly",
            y_label="S_A",
        )
        return
    for p in cfg.params:
        at_p = [r for r in records if r.param == p]
        fits.attempt(f"q={cfg.q}, p_x={p:g}", lambda: fit_alpha(at_p))
    finish(
        "graph-critical",
        cfg,
        records,
        fits,
        series=mean_series(
            records,
            x=lambda r: int(r.region.split(":")[1]),
            label=lambda r: f"Lx={r.lx}, p_x={r.param:g}",
        ),
        x_label="L_A",
        y_label="S_A",
    )


def _eta_bins(records: list[RunRecord]) -> list[dict[str, float]]:
    points = [(eta, value) for eta, value in mutual_info_points(records) if eta > 0]
    if not points:
        return []
    lo = min(eta for eta, _ in points)
    hi = max(eta for eta, _ in points)
    if hi <= lo:
        return []
    decades = max(1, math.ceil(math.log10(hi / lo)))
    return [
        {
            "eta_lo": b.lo,
            "eta_hi": b.hi,
            "log_eta": b.log_eta,
            "mean": b.mean,
            "std": b.std,
            "count": b.count,
            "relative_spread": b.relative_spread,
        }
        for b in bin_by_eta(points, lo, hi, DELTA_BINS * decades)
    ]


def mutual_info(
    config: Optional[Path] = CONFIG_OPTION,
    q: Optional[int] = Q_OPTION,
    lx: Optional[List[int]] = LX_OPTION,
    ly: Optional[List[int]] = LY_OPTION,
    px: Optional[List[float]] = PX_OPTION,
    draws: Optional[int] = typer.Option(
        None, "--draws", help="Random interval pairs per trajectory."
    ),
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    workers: Optional[int] = WORKERS_OPTION,
    window: Optional[int] = WINDOW_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
) -> None:
    """Mutual information of random interval pairs, binned by cross ratio; fits Delta."""
    cfg = load_or_exit(
        "mutual-info",
        config,
        overrides(
            q=q, lx=lx, ly=ly, params=px, interval_draws=draws,
            samples=samples, seed=seed, workers=workers, window=window, output=output,
        ),
    )
    sizes = config_or_exit(lambda: lattice_sizes(cfg))
    records: list[RunRecord] = []
    for size_x, size_y in sizes:
        for p in cfg.params:
            logger.info("mutual-info: q=%d lx=%d ly=%d p_x=%g", cfg.q, size_x, size_y, p)
            records += run_mutual_info(
                cfg.lattice(size_x, size_y),
                cfg.q,
                cfg.policy(p),
                cfg.samples,
                cfg.seed,
                draws=cfg.interval_draws,
                window=cfg.effective_window,
                workers=cfg.workers,
            )
    fits = FitLog()
    bins: dict[str, list[dict[str, float]]] = {}
    for p in cfg.params:
        at_p = [r for r in records if r.param == p]
        bins[f"{p:g}"] = _eta_bins(at_p)
        fits.attempt(f"q={cfg.q}, p_x={p:g}", lambda: fit_delta(at_p))
    series = tuple(
        _bin_series(f"p_x={key}", value) for key, value in bins.items() if value
    )
    finish(
        "mutual-info",
        cfg,
        records,
        fits,
        extras={"eta_bins": bins},
        series=series,
        x_label="eta",
        y_label="I_AB",
        log_x=True,
        log_y=True,
    )


def _bin_series(label: str, bins: list[dict[str, float]]) -> PlotSeries:
    return PlotSeries(
        label=label,
        points=tuple((math.exp(b["log_eta"]), b["mean"]) for b in bins if b["mean"] > 0),
    )


def purify(
    config: Optional[Path] = CONFIG_OPTION,
    q: Optional[int] = Q_OPTION,
    lx: Optional[List[int]] = LX_OPTION,
    ly: Optional[List[int]] = SWEEP_HEIGHTS_OPTION,
    px: Optional[List[float]] = PX_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    workers: Optional[int] = WORKERS_OPTION,
    window: Optional[int] = WINDOW_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
) -> None:
    """Entropy of the top row with both edges kept, against Ly; fits the decay rate lambda."""
    cfg = load_or_exit(
        "purify",
        config,
        overrides(
            q=q, lx=lx, ly=ly, params=px,
            samples=samples, seed=seed, workers=workers, window=window, output=output,
        ),
    )
    plans = config_or_exit(lambda: [(x, purification_heights(cfg, x)) for x in cfg.lx])
    records: list[RunRecord] = []
    for size_x, heights in plans:
        for p in cfg.params:
            logger.info(
                "purify: q=%d lx=%d ly=%d..%d p_x=%g", cfg.q, size_x, heights[0], heights[-1], p
            )
            records += run_two_edge_purification(
                cfg.lattice(size_x, heights[-1]),
                cfg.q,
                cfg.policy(p),
                cfg.samples,
                cfg.seed,
                ly_values=heights,
                window=cfg.effective_window,
                workers=cfg.workers,
            )
    fits = purification_fits(cfg, records)
    finish(
        "purify",
        cfg,
        records,
        fits,
        series=mean_series(records, x=lambda r: r.ly, label=lambda r: f"Lx={r.lx}, p={r.param:g}"),
        x_label="Ly",
        y_label="S_top",
        log_y=True,
    )

