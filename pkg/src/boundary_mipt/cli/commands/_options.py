"""Typer options shared by the experiment commands."""

from __future__ import annotations

import typer

CONFIG_OPTION = typer.Option(None, "--config", "-c", help="Path to config YAML.")
Q_OPTION = typer.Option(None, "--q", help="Prime local dimension.")
LX_OPTION = typer.Option(None, "--lx", help="Lattice width; repeat for several sizes.")
LY_OPTION = typer.Option(None, "--ly", help="Lattice height(s); defaults to Lx.")
SAMPLES_OPTION = typer.Option(None, "--samples", "-n", help="Samples per grid point.")
SEED_OPTION = typer.Option(None, "--seed", help="Master seed.")
WORKERS_OPTION = typer.Option(
    None, "--workers", "-j", help="Worker processes (default: $BOUNDARY_MIPT_WORKERS or 1)."
)
WINDOW_OPTION = typer.Option(None, "--window", help="Rows held by the streaming driver.")
OUTPUT_OPTION = typer.Option(None, "--output", "-o", help="Output directory.")
SWEEP_HEIGHTS_OPTION = typer.Option(
    None, "--ly", help="Heights of the sweep; repeat. Default: 3..Lx."
)


def overrides(**flags: object) -> dict[str, object]:
    """Flag values with unset flags (None or empty lists) removed."""
    out: dict[str, object] = {}
    for key, value in flags.items():
        if isinstance(value, (list, tuple)):
            value = list(value) or None
        if value is not None:
            out[key] = value
    return out
