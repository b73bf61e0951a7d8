"""boundary-mipt package."""

from boundary_mipt.version import __version__

__all__ = ["__version__"]
