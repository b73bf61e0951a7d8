"""Tests for the CSV, JSON and SVG renderers."""

from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from boundary_mipt.core.models import FitResult, RunRecord
from boundary_mipt.render import (
    CSV_HEADER,
    PlotSeries,
    RunSummary,
    read_csv,
    render_csv,
    render_json_summary,
    write_csv,
    write_json_summary,
    write_svg_plot,
)

RECORDS = [
    RunRecord("graph", 2, 16, 16, 0.95, "0:4", 1, 0, 2.0),
    RunRecord("graph", 2, 8, 8, 0.95, "0:2", 0, 0, 1.0 / 3.0),
]


class TestCsv:
    def test_header_and_order(self) -> None:
        lines = render_csv(RECORDS).splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert lines[1].startswith("graph,2,8,8,")
        assert lines[2].startswith("graph,2,16,16,")

    def test_full_precision_floats(self) -> None:
        assert "0.33333333333333331" in render_csv(RECORDS)

    def test_written_file_reads_back(self, tmp_path: Path) -> None:
        path = write_csv(RECORDS, tmp_path / "out" / "run.csv")
        assert read_csv(path) == sorted(RECORDS, key=lambda r: r.sort_key)

    def test_bad_header(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="unexpected header"):
            read_csv(path)


class TestJson:
    def _summary(self) -> RunSummary:
        return RunSummary(
            command="graph-scan",
            config={"q": 2, "lx": [8, 16]},
            fits=(FitResult(kind="pc", value=0.95, stderr=0.01, window="p in [0.9, 0.99]"),),
            failures=("lx=8: too few points",),
            extras={"ratio": math.nan, "nested": {"inf": math.inf}},
        )

    def test_payload(self) -> None:
        payload = json.loads(render_json_summary(self._summary()))
        assert payload["version"] == "v0.1.0"
        assert payload["command"] == "graph-scan"
        assert payload["fits"][0]["kind"] == "pc"
        assert payload["fits"][0]["r_squared"] is None
        assert payload["failures"] == ["lx=8: too few points"]

    def test_non_finite_values_become_null(self) -> None:
        text = render_json_summary(self._summary())
        assert "NaN" not in text
        payload = json.loads(text)
        assert payload["extras"] == {"nested": {"inf": None}, "ratio": None}

    def test_canonical_formatting(self, tmp_path: Path) -> None:
        path = write_json_summary(self._summary(), tmp_path / "s.json")
        text = path.read_text(encoding="utf-8")
        assert text.endswith("}\n")
        assert text == json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n"

    def test_failed_flag(self) -> None:
        assert self._summary().failed
        assert not RunSummary(command="x", config={}).failed


class TestSvg:
    def test_writes_svg(self, tmp_path: Path) -> None:
        series = (
            PlotSeries(label="Lx=8", points=((0.9, 0.5), (0.95, 0.4))),
            PlotSeries(label="empty", points=()),
        )
        path = write_svg_plot(series, tmp_path / "plots" / "p.svg", title="t", log_y=True)
        text = path.read_text(encoding="utf-8")
        assert "<svg" in text

    def test_output_is_reproducible(self, tmp_path: Path) -> None:
        series = (PlotSeries(label="a", points=((1.0, 2.0), (2.0, 3.0))),)
        first = write_svg_plot(series, tmp_path / "a.svg").read_bytes()
        second = write_svg_plot(series, tmp_path / "b.svg").read_bytes()
        assert first == second
