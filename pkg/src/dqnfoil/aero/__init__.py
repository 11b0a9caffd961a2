"""Pressure distributions and the aerodynamic measures derived from them."""
from .measures import DRAG_MIN, LIFT_MAX, compute_measures, reward_from_measures
from .panel import solve_cp_panel, solve_panel
from .types import AeroMeasures, CpDistribution, XfoilSettings
from .xfoil import xfoil_solve

__all__ = [
    "AeroMeasures", "CpDistribution", "XfoilSettings", "DRAG_MIN", "LIFT_MAX",
    "compute_measures", "reward_from_measures", "solve_cp_panel", "solve_panel",
    "xfoil_solve",
]
