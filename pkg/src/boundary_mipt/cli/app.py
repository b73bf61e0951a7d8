"""Typer application entrypoint."""

import logging
from typing import Optional

import typer

from boundary_mipt.cli.commands.clifford import clifford_purify, clifford_scan
from boundary_mipt.cli.commands.graph import graph_critical, graph_scan, mutual_info, purify
from boundary_mipt.cli.commands.statmech import couplings, rbim_mc
from boundary_mipt.cli.commands.verify import run as run_verify
from boundary_mipt.version import __version__

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Measurement-induced entanglement transitions on the boundary of 2D shallow circuits.",
)


def _version_callback(value: bool) -> None:
    if value:
        typer.echo(f"boundary-mipt {__version__}")
        raise typer.Exit()


@app.callback()
def _global_options(
    verbose: bool = typer.Option(
        False, "--verbose", "-v", help="Enable debug logging."
    ),
    version: Optional[bool] = typer.Option(  # noqa: ARG001
        None,
        "--version",
        callback=_version_callback,
        is_eager=True,
        help="Show version and exit.",
    ),
) -> None:
    """Global options for boundary-mipt."""
    if verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s: %(message)s", force=True)


app.command("graph-scan")(graph_scan)
app.command("graph-critical")(graph_critical)
app.command("mutual-info")(mutual_info)
app.command("purify")(purify)
app.command("clifford-scan")(clifford_scan)
app.command("clifford-purify")(clifford_purify)
app.command("couplings")(couplings)
app.command("rbim-mc")(rbim_mc)
app.command("verify", hidden=True)(run_verify)


def main() -> None:
    """Run the CLI app."""
    app()


if __name__ == "__main__":
    main()
