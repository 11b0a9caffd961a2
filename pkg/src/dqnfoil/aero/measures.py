"""Reduction of a Cp distribution to lift/drag measures and rewards.

Panels are walked in profile order (TE -> upper -> LE -> lower -> TE,
counterclockwise), so the outward normal times panel length is
``(dy, -dx)``. Pressure force is then ``(-sum Cp dy, sum Cp dx)``; the
measures carry the conventional factor 0.5 per element.
"""
from __future__ import annotations

import numpy as np

from ..geometry import AirfoilProfile
from .types import AeroMeasures, CpDistribution

DRAG_MIN = "drag_min"
LIFT_MAX = "lift_max"


def compute_measures(cp: CpDistribution, profile: AirfoilProfile, cl=None, cd=None) -> AeroMeasures:
    """Lift measure ``0.5 sum Cp dx`` and drag measure ``-0.5 sum Cp dy``.

    Positive LM is upward lift, positive DM is downstream drag.
    """
    c = np.asarray(cp.cp if isinstance(cp, CpDistribution) else cp, dtype=np.float64)
    if len(c) != profile.m:
        raise ValueError(f"Cp length {len(c)} does not match panel count {profile.m}")
    d = np.diff(profile.points, axis=0)
    lm = 0.5 * float(np.dot(c, d[:, 0]))
    dm = -0.5 * float(np.dot(c, d[:, 1]))
    return AeroMeasures(lm, dm, cl, cd)


def reward_from_measures(measures: AeroMeasures, mode: str = DRAG_MIN, literal_ra: bool = False) -> float:
    """Per-step reward.

    ``drag_min`` penalises drag and any lift magnitude (``-DM - |LM|``);
    with ``literal_ra`` the lift term keeps its sign (``-DM - LM``).
    ``lift_max`` rewards the lift measure.
    """
    lm, dm = measures.lift_measure, measures.drag_measure
    if mode == DRAG_MIN:
        return -dm - (lm if literal_ra else abs(lm))
    if mode == LIFT_MAX:
        return lm
    raise ValueError(f"unknown reward mode {mode!r}")
