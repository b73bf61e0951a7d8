"""Shallow Clifford circuit commands: clifford-scan, clifford-purify."""

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
    run_strip_entropy,
    run_two_edge_purification,
)
from boundary_mipt.core.fits import estimate_pc, fit_alpha
from boundary_mipt.core.models import RunRecord

logger = logging.getLogger("boundary_mipt")

P_OPTION = typer.Option(None, "--p", help="Gate probability; repeat for a grid.")
T_OPTION = typer.Option(None, "--t", help="Circuit depth in time steps.")
BC_OPTION = typer.Option(None, "--bc-x", help="Horizontal boundary: periodic or open.")


def clifford_scan(
    config: Optional[Path] = CONFIG_OPTION,
    lx: Optional[List[int]] = LX_OPTION,
    ly: Optional[List[int]] = LY_OPTION,
    p: Optional[List[float]] = P_OPTION,
    t: Optional[int] = T_OPTION,
    bc_x: Optional[str] = BC_OPTION,
    region_fraction: Optional[float] = typer.Option(
        None, "--region-fraction", help="Boundary interval length as a fraction of Lx."
    ),
    lengths: Optional[List[int]] = typer.Option(
        None, "--length", help="Interval lengths for the alpha fit at p_c. Default: 1..Lx/2."
    ),
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    workers: Optional[int] = WORKERS_OPTION,
    window: Optional[int] = WINDOW_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
) -> None:
    """Boundary entropy over a gate-probability grid; p_c from size crossings, alpha near p_c."""
    cfg = load_or_exit(
        "clifford-scan",
        config,
        overrides(
            lx=lx, ly=ly, params=p, t=t, bc_x=bc_x, region_fraction=region_fraction,
            region_lengths=lengths, samples=samples, seed=seed, workers=workers,
            window=window, output=output,
        ),
    )
    sizes = config_or_exit(lambda: lattice_sizes(cfg))
    size_x, size_y = max(sizes)
    alpha_lengths = config_or_exit(lambda: region_lengths(cfg, size_x))
    records: list[RunRecord] = []
    for x, y in sizes:
        region = fraction_region(x, cfg.region_fraction)
        for gate_p in cfg.params:
            logger.info("clifford-scan: t=%d lx=%d ly=%d p=%g", cfg.t, x, y, gate_p)
            records += run_strip_entropy(
                cfg.lattice(x, y),
                2,
                cfg.policy(gate_p),
                region,
                cfg.samples,
                cfg.seed,
                circuit=cfg.circuit(gate_p),
                window=cfg.effective_window,
                workers=cfg.workers,
            )
    fits = FitLog()
    extras: dict[str, object] = {}
    if len(sizes) >= 3 and len(cfg.params) >= 2:
        pc = fits.attempt(f"t={cfg.t}", lambda: estimate_pc(records))
        if pc is not None:
            nearest = min(cfg.params, key=lambda value: abs(value - pc.value))
            extras["alpha_param"] = nearest
            logger.info("clifford-scan: alpha at p=%g, lx=%d", nearest, size_x)
            critical = run_strip_entropy(
                cfg.lattice(size_x, size_y),
                2,
                cfg.policy(nearest),
                [interval_region(size_x, length) for length in alpha_lengths],
                cfg.samples,
                cfg.seed,
                circuit=cfg.circuit(nearest),
                window=cfg.effective_window,
                workers=cfg.workers,
            )
            # Fraction-region records of the scan share (region, sample) keys with these.
            scan_regions = {r.region for r in records if r.lx == size_x and r.param == nearest}
            records += [r for r in critical if r.region not in scan_regions]
            fits.attempt(f"t={cfg.t}, p={nearest:g}, lx={size_x}", lambda: fit_alpha(critical))
    else:
        logger.info("clifford-scan: p_c needs >= 3 sizes and >= 2 grid points; skipped")
    scan_region = {x: fraction_region(x, cfg.region_fraction).describe() for x, _ in sizes}
    finish(
        "clifford-scan",
        cfg,
        records,
        fits,
        extras=extras,
        series=mean_series(
            [r for r in records if r.region == scan_region[r.lx]],
            x=lambda r: r.param,
            label=lambda r: f"Lx={r.lx}",
            y=lambda r: r.value / math.log(r.lx),
        ),
        x_label="p",
        y_label="S_A / ln Lx",
    )


def clifford_purify(
    config: Optional[Path] = CONFIG_OPTION,
    lx: Optional[List[int]] = LX_OPTION,
    ly: Optional[List[int]] = SWEEP_HEIGHTS_OPTION,
    p: Optional[List[float]] = P_OPTION,
    t: Optional[int] = T_OPTION,
    bc_x: Optional[str] = BC_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    workers: Optional[int] = WORKERS_OPTION,
    window: Optional[int] = WINDOW_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
) -> None:
    """Two-edge purification of the shallow Clifford circuit; lambda per size and in Ly/Lx."""
    cfg = load_or_exit(
        "clifford-purify",
        config,
        overrides(
            lx=lx, ly=ly, params=p, t=t, bc_x=bc_x, samples=samples, seed=seed,
            workers=workers, window=window, output=output,
        ),
    )
    plans = config_or_exit(lambda: [(x, purification_heights(cfg, x)) for x in cfg.lx])
    records: list[RunRecord] = []
    for size_x, heights in plans:
        for gate_p in cfg.params:
            logger.info(
                "clifford-purify: t=%d lx=%d ly=%d..%d p=%g bc=%s",
                cfg.t, size_x, heights[0], heights[-1], gate_p, cfg.bc_x,
            )
            records += run_two_edge_purification(
                cfg.lattice(size_x, heights[-1]),
                2,
                cfg.policy(gate_p),
                cfg.samples,
                cfg.seed,
                ly_values=heights,
                circuit=cfg.circuit(gate_p),
                window=cfg.effective_window,
                workers=cfg.workers,
            )
    finish(
        "clifford-purify",
        cfg,
        records,
        purification_fits(cfg, records),
        extras={"bc_x": cfg.bc_x},
        series=mean_series(
            records, x=lambda r: r.ly / r.lx, label=lambda r: f"Lx={r.lx}, p={r.param:g}"
        ),
        x_label="Ly / Lx",
        y_label="S_top",
        log_y=True,
    )
