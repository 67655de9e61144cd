"""Workbench for computer-aided optimization of electric-erosion machining.

Stores experiments, plans factorial designs, validates measured data,
fits and ranks empirical models, optimizes process settings and compares
time/cost against conventional machining.
"""

__version__ = "0.1.0"

from .api import Workbench
from .store import ExperimentStore

__all__ = ["Workbench", "ExperimentStore", "__version__"]
