"""Output rendering modules."""

from boundary_mipt.render.csv_records import CSV_HEADER, read_csv, render_csv, write_csv
from boundary_mipt.render.json_summary import render_json_summary, write_json_summary
from boundary_mipt.render.report_models import PlotSeries, RunOutput, RunSummary
from boundary_mipt.render.svg_plot import write_svg_plot

__all__ = [
    "CSV_HEADER",
    "PlotSeries",
    "RunOutput",
    "RunSummary",
    "read_csv",
    "render_csv",
    "render_json_summary",
    "write_csv",
    "write_json_summary",
    "write_svg_plot",
]
