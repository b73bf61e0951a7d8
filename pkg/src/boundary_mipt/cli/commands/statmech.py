"""Statistical-mechanics commands: couplings, rbim-mc."""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import List, Optional

import typer

from boundary_mipt.cli.commands._options import (
    CONFIG_OPTION,
    LX_OPTION,
    OUTPUT_OPTION,
    SAMPLES_OPTION,
    SEED_OPTION,
    WORKERS_OPTION,
    overrides,
)
from boundary_mipt.cli.commands._pipeline import (
    EXIT_CONFIG,
    EXIT_FIT,
    FitLog,
    _error,
    finish,
    load_or_exit,
    mean_series,
)
from boundary_mipt.core.rbim import binder_crossing, rbim_records, run_rbim_scan
from boundary_mipt.core.statmech import (
    AnsatzError,
    Couplings,
    coupling_jvert,
    effective_couplings,
    plaquette_coefficients,
    plaquette_expansion,
    plaquette_orbits,
)
from boundary_mipt.render import RunSummary, render_json_summary

logger = logging.getLogger("boundary_mipt")


def _couplings_payload(couplings: Couplings) -> dict[str, object]:
    q = int(couplings.q)
    c4, c2, c3 = plaquette_coefficients(q)
    e4, e2, e3 = plaquette_expansion(q)
    return {
        "q": q,
        "j_vert": couplings.j_vert,
        "j_horiz": couplings.j_horiz,
        "j12": couplings.j12,
        "j13": couplings.j13,
        "j1234": couplings.j1234,
        "log_constant": couplings.log_constant,
        "flipped_orbits": list(couplings.flipped_orbits),
        "residual": couplings.residual,
        "orbits": {name: float(value) for name, value in plaquette_orbits(q).items()},
        "plaquette_coefficients": {"four_body": c4, "nearest": c2, "diagonal": c3},
        "large_q_coefficients": {"four_body": e4, "nearest": e2, "diagonal": e3},
    }


def couplings(
    q: List[int] = typer.Option([2], "--q", help="Local dimension; repeat for several."),
    strict: bool = typer.Option(
        False, "--strict", help="Fail when a plaquette orbit weight is negative."
    ),
    output: Optional[Path] = typer.Option(
        None, "--output", "-o", help="Also write the JSON to this file."
    ),
) -> None:
    """Print the Ising couplings of the two-replica permutation-spin model as JSON."""
    bad = [value for value in q if value < 2]
    if bad:
        _error(f"q must be >= 2, got {bad}", EXIT_CONFIG)
    entries = []
    for value in q:
        try:
            fitted = effective_couplings(value, allow_negative=not strict)
        except AnsatzError as exc:
            _error(str(exc), EXIT_FIT)
        if fitted.flipped_orbits:
            typer.echo(
                f"Warning: q={value}: sign-flipped plaquette orbits "
                f"{', '.join(fitted.flipped_orbits)} fitted by magnitude (see flipped_orbits)",
                err=True,
            )
        entries.append(_couplings_payload(fitted))
    text = render_json_summary(
        RunSummary(
            command="couplings",
            config={"q": list(q), "strict": strict},
            extras={"couplings": entries},
        )
    )
    if output is not None:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text, encoding="utf-8")
    typer.echo(text, nl=False)


def rbim_mc(
    config: Optional[Path] = CONFIG_OPTION,
    q: Optional[int] = typer.Option(
        None, "--q", help="Local dimension setting the default coupling K = 2 J_vert(q)."
    ),
    lx: Optional[List[int]] = LX_OPTION,
    p_bond: Optional[List[float]] = typer.Option(
        None, "--p-bond", help="Bond occupation probability; repeat for a grid."
    ),
    k: Optional[List[float]] = typer.Option(
        None, "--k", help="Bond strength K; repeat for a grid. Default: 2 J_vert(q)."
    ),
    sweeps: Optional[int] = typer.Option(None, "--sweeps", help="Measured sweeps per chain."),
    burn_in: Optional[int] = typer.Option(None, "--burn-in", help="Discarded sweeps."),
    samples: Optional[int] = SAMPLES_OPTION,
    seed: Optional[int] = SEED_OPTION,
    workers: Optional[int] = WORKERS_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
) -> None:
    """Single-spin-flip (heat-bath) runs of the bond-diluted Ising model; Binder crossings between sizes."""
    cfg = load_or_exit(
        "rbim-mc",
        config,
        overrides(
            q=q, lx=lx, params=p_bond, couplings=k, sweeps=sweeps, burn_in=burn_in,
            samples=samples, seed=seed, workers=workers, output=output,
        ),
    )
    strengths = cfg.couplings or [2 * coupling_jvert(cfg.q)]
    logger.info("rbim-mc: sizes %s, K %s, %d p values", cfg.lx, strengths, len(cfg.params))
    results = run_rbim_scan(
        cfg.lx,
        strengths,
        cfg.params,
        cfg.samples,
        cfg.sweeps,
        cfg.seed,
        burn_in=cfg.burn_in,
        workers=cfg.workers,
    )
    fits = FitLog()
    if len(cfg.lx) >= 2 and len(cfg.params) >= 2:
        for strength in strengths:
            subset = [r for r in results if r.coupling == strength]
            fits.attempt(f"K={strength:.6g}", lambda: binder_crossing(subset, "p_bond"))
    elif len(cfg.lx) >= 2 and len(strengths) >= 2:
        p = cfg.params[0]
        fits.attempt(f"p_bond={p:g}", lambda: binder_crossing(results, "coupling"))
    records = rbim_records(results, cfg.seed)
    axis_is_k = len(cfg.params) < 2 <= len(strengths)
    finish(
        "rbim-mc",
        cfg,
        records,
        fits,
        extras={
            "couplings": strengths,
            "mean_bond_fraction": (
                math.fsum(r.bond_fraction for r in results) / len(results) if results else 0.0
            ),
        },
        series=mean_series(
            [r for r in records if r.region.startswith("binder@")],
            x=(lambda r: float(r.region.split("=", 1)[1])) if axis_is_k else (lambda r: r.param),
            label=lambda r: f"L={r.lx}",
        ),
        x_label="K" if axis_is_k else "p_bond",
        y_label="U4",
    )
