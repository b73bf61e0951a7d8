"""Smoke tests for package metadata."""

from boundary_mipt import __version__
from boundary_mipt.render.json_summary import version_string


def test_version_string_present() -> None:
    assert __version__ == "0.1.0"
    assert version_string() == "v0.1.0"
