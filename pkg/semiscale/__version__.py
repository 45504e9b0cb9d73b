"""Version information for semiscale"""

__version__ = "0.1.0"
