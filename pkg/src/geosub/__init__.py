"""Slow and fast subspaces of linear systems ``x' = Ax + Bu, y = Cx + Du``."""
__version__ = "0.1.0"

from .sysmodel import StateSpaceSystem, load, loads, random_system, save  # noqa: E402

__all__ = ["StateSpaceSystem", "load", "loads", "random_system", "save", "__version__"]
