"""Mobility-aid survey analytics and barrier-aware sidewalk routing."""

from sidewalk_access.errors import SidewalkAccessError

__version__ = "0.1.0"

__all__ = ["SidewalkAccessError", "__version__"]
