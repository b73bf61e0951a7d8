"""Version constants for boundary-mipt."""

__version__ = "0.1.0"
