"""Semiscale - numerical laboratory for Favard, Hölder and extrapolation spaces"""

import importlib.metadata

try:
    __version__ = importlib.metadata.version("semiscale")
except importlib.metadata.PackageNotFoundError:
    # Fallback for development mode
    __version__ = "0.1.0"

__all__ = ["__version__"]
