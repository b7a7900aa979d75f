"""Transient stability analysis of grid-connected converters under power
synchronization control: per-unit network reduction, phase-portrait and
closed-form CCA/CCT analysis, and event-driven time-domain simulation."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
