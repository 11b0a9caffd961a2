"""Inviscid Hess-Smith panel solver.

Constant-strength sources on every panel plus one vortex strength shared
by all panels. Flow tangency at panel midpoints, Kutta condition on the two
trailing-edge panels, freestream speed 1.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.linalg import lapack, lu_factor, lu_solve

from .. import kernels
from ..errors import GeometryError, SolverError
from ..geometry import AirfoilProfile, validate_profile
from .types import CpDistribution

MIN_PANEL_LENGTH = 1e-5
MAX_CONDITION = 1e12


def panel_system(profile: AirfoilProfile, alpha: float):
    """Assemble the ``(m+1) x (m+1)`` system and the tangential operator.

    Returns ``(A, rhs, T, vt_inf)`` where ``T @ [sigma, gamma] + vt_inf``
    is the tangential velocity at each midpoint.
    """
    x, y = profile.x, profile.y
    an, at, bn, bt = kernels.influence_matrices(x, y)
    m = profile.m
    d = np.diff(profile.points, axis=0)
    length = np.hypot(d[:, 0], d[:, 1])
    tx, ty = d[:, 0] / length, d[:, 1] / length
    a = math.radians(alpha)
    uinf, vinf = math.cos(a), math.sin(a)
    vn_inf = uinf * ty - vinf * tx
    vt_inf = uinf * tx + vinf * ty

    A = np.empty((m + 1, m + 1))
    A[:m, :m] = an
    A[:m, m] = bn.sum(axis=1)
    A[m, :m] = at[0] + at[m - 1]
    A[m, m] = bt[0].sum() + bt[m - 1].sum()
    rhs = np.empty(m + 1)
    rhs[:m] = -vn_inf
    rhs[m] = -(vt_inf[0] + vt_inf[m - 1])

    T = np.empty((m, m + 1))
    T[:, :m] = at
    T[:, m] = bt.sum(axis=1)
    return A, rhs, T, vt_inf


def solve_panel(profile: AirfoilProfile, alpha: float = 0.0):
    """Solve for singularity strengths.

    Returns ``(sigma, gamma, vt)`` with per-panel source strengths, the
    global vortex strength and midpoint tangential velocities.
    """
    diag = validate_profile(profile)
    if not diag.is_closed:
        raise GeometryError("profile is not closed")
    if diag.has_self_intersection:
        raise GeometryError("profile self-intersects")
    if diag.min_thickness < 0.0:
        raise GeometryError(f"negative thickness {diag.min_thickness:.3g}")
    if diag.min_panel_length < MIN_PANEL_LENGTH:
        raise GeometryError(f"panel shorter than {MIN_PANEL_LENGTH:g} chord")

    A, rhs, T, vt_inf = panel_system(profile, alpha)
    anorm = np.abs(A).sum(axis=0).max()
    lu, piv = lu_factor(A, check_finite=False)
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    cond = math.inf if rcond == 0.0 else 1.0 / rcond
    if info != 0 or not cond < MAX_CONDITION:
        raise SolverError(f"panel system ill-conditioned (condition estimate {cond:.3g})", cond)
    sol = lu_solve((lu, piv), rhs, check_finite=False)
    vt = T @ sol + vt_inf
    return sol[:-1], float(sol[-1]), vt


def solve_cp_panel(profile: AirfoilProfile, alpha: float = 0.0) -> CpDistribution:
    """Per-panel pressure coefficient ``1 - Vt**2``."""
    _, _, vt = solve_panel(profile, alpha)
    return CpDistribution(1.0 - vt * vt, alpha, "panel")
