"""Weighted l1 sparse recovery: solver, certificates, oracle and phase-transition harness."""

from wl1._core import *  # noqa: F401,F403

__version__ = "1.0.0"
