"""Hidden verify command: dense state-vector differential checks of the stabilizer engine."""

from __future__ import annotations

import logging
from typing import List

import typer

from boundary_mipt.cli.commands._pipeline import EXIT_CONFIG, _error
from boundary_mipt.core.oracle import DifferentialResult, run_differential

logger = logging.getLogger("boundary_mipt")


def _row(result: DifferentialResult) -> str:
    status = "PASS" if result.passed else "FAIL"
    return (
        f"| {result.q:>3} | {result.n_sites:>5} | {result.sequences:>9} | "
        f"{result.comparisons:>11} | {len(result.mismatches):>10} | {status} |"
    )


def run(
    q: List[int] = typer.Option([2, 3], "--q", help="Prime local dimension; repeat."),
    sites: List[int] = typer.Option([4, 6], "--sites", help="Number of sites; repeat."),
    sequences: int = typer.Option(100, "--sequences", help="Random sequences per case."),
    depth: int = typer.Option(12, "--depth", help="Operations per sequence."),
    seed: int = typer.Option(0, "--seed", help="Master seed."),
) -> None:
    """Compare tableau and dense entropies on random gate and measurement sequences."""
    if sequences < 1 or depth < 1:
        _error("--sequences and --depth must be >= 1", EXIT_CONFIG)
    results: list[DifferentialResult] = []
    for modulus in q:
        for n_sites in sites:
            try:
                results.append(run_differential(modulus, n_sites, sequences, seed, depth=depth))
            except ValueError as exc:
                _error(f"q={modulus}, sites={n_sites}: {exc}", EXIT_CONFIG)
    typer.echo("|   q | sites | sequences | comparisons | mismatches | status |")
    typer.echo("|-----|-------|-----------|-------------|------------|--------|")
    for result in results:
        typer.echo(_row(result))
    failed = [r for r in results if not r.passed]
    for result in failed:
        for mismatch in result.mismatches[:5]:
            typer.echo(f"  q={result.q}: {mismatch}", err=True)
    if failed:
        raise typer.Exit(code=1)
