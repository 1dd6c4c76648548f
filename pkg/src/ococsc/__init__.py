"""Online convex optimization under a budget on total l2 switching cost."""

from ._jit import USE_NUMBA
from .engine import GameConfig, Transcript, audit_bounds, regret, run_game

__all__ = ["GameConfig", "Transcript", "USE_NUMBA", "audit_bounds", "regret", "run_game"]
__version__ = "0.1.0"
