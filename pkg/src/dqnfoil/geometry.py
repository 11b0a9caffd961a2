"""Bezier-parameterized airfoil shapes.

An airfoil is four quartic Bezier curves joined at the leading edge, the
upper crest and the lower trough, and the trailing edge::

    0 upper-front  LE    -> crest
    1 upper-rear   crest -> TE
    2 lower-front  LE    -> trough
    3 lower-rear   trough -> TE

Only control-point y coordinates ever move; x is frozen at construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .errors import ConfigurationError, ConstraintViolation

DEGREE = 4
N_POINTS = DEGREE + 1
UPPER_FRONT, UPPER_REAR, LOWER_FRONT, LOWER_REAR = range(4)
MIRROR = {UPPER_FRONT: LOWER_FRONT, UPPER_REAR: LOWER_REAR}


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


# -----------------------------------------------------------------------------
# Bernstein / Bezier primitives
# -----------------------------------------------------------------------------

def _check_t(t):
    t = np.asarray(t, dtype=np.float64)
    if np.any(~np.isfinite(t)) or np.any(t < 0.0) or np.any(t > 1.0):
        raise ValueError("curve parameter must lie in [0, 1]")
    return t


def bernstein(n: int, i: int, t):
    """Bernstein basis polynomial ``C(n, i) t**i (1 - t)**(n - i)``.

    Accepts scalar or array ``t``.
    """
    if n < 0 or not 0 <= i <= n:
        raise ValueError(f"index {i} out of range for degree {n}")
    t = _check_t(t)
    w = math.comb(n, i) * t ** i * (1.0 - t) ** (n - i)
    return float(w) if w.ndim == 0 else w


def bernstein_matrix(n: int, t) -> np.ndarray:
    """Basis matrix with shape ``(len(t), n + 1)``."""
    t = np.atleast_1d(_check_t(t))
    return np.stack([math.comb(n, i) * t ** i * (1.0 - t) ** (n - i)
                     for i in range(n + 1)], axis=1)


@dataclass(frozen=True)
class BezierCurve:
    """Quartic Bezier curve defined by 5 planar control points."""

    control_points: np.ndarray

    def __post_init__(self):
        p = _frozen(self.control_points)
        if p.shape != (N_POINTS, 2):
            raise ValueError(f"expected {N_POINTS} planar control points, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("control points must be finite")
        if np.any(np.diff(p[:, 0]) < 0.0):
            raise ValueError("control point x coordinates must be non-decreasing")
        object.__setattr__(self, "control_points", p)

    def __call__(self, t):
        return bezier_point(self, t)


def bezier_point(curve: BezierCurve, t):
    """Evaluate ``C(t) = sum_i B_{4,i}(t) P_i``.

    Scalar ``t`` returns shape (2,), array ``t`` returns (len(t), 2).
    """
    scalar = np.ndim(t) == 0
    pts = bernstein_matrix(DEGREE, t) @ curve.control_points
    return pts[0] if scalar else pts


def bezier_derivative(curve: BezierCurve, t):
    """Hodograph ``C'(t) = n sum_i B_{n-1,i}(t) (P_{i+1} - P_i)``."""
    scalar = np.ndim(t) == 0
    diffs = np.diff(curve.control_points, axis=0)
    d = DEGREE * (bernstein_matrix(DEGREE - 1, t) @ diffs)
    return d[0] if scalar else d


# -----------------------------------------------------------------------------
# Control polygon
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class GeometryConfig:
    x_t: float = 0.3
    thickness: float = 0.12
    symmetric_mode: bool = True
    c1_clamping: bool = True
    y_min: float = -0.25
    y_max: float = 0.25

    def validate(self):
        if not self.thickness > 0.0:
            raise ConfigurationError("thickness must be positive", "geometry.thickness")
        if not 0.0 < self.x_t < 1.0:
            raise ConfigurationError("x_t must lie in (0, 1)", "geometry.x_t")
        if not self.y_min < 0.0 < self.y_max:
            raise ConfigurationError("displacement box must bracket 0", "geometry.y_min")
        if self.thickness / 2 > min(-self.y_min, self.y_max):
            raise ConfigurationError("displacement box narrower than thickness", "geometry.y_max")


@dataclass(frozen=True)
class ControlPolygon:
    """Four joined Bezier curves plus their mutation constraints.

    ``points`` has shape (4, 5, 2). ``mutable_mask`` has shape (4, 5).
    ``clamp_spec`` lists ``((curve, point), y)`` entries whose y is pinned.
    """

    points: np.ndarray
    mutable_mask: np.ndarray
    clamp_spec: tuple = ()
    symmetric_mode: bool = True
    y_min: float = -0.25
    y_max: float = 0.25

    def __post_init__(self):
        pts = _frozen(self.points)
        mask = np.array(self.mutable_mask, dtype=bool)
        mask.setflags(write=False)
        if pts.shape != (4, N_POINTS, 2) or mask.shape != (4, N_POINTS):
            raise ValueError("control polygon must hold 4 curves of 5 points")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "mutable_mask", mask)
        object.__setattr__(self, "clamp_spec", tuple(
            ((int(c), int(k)), float(v)) for (c, k), v in self.clamp_spec))

    @property
    def curves(self):
        return [BezierCurve(self.points[c]) for c in range(4)]

    def mutable_refs(self):
        """Mutable (curve, point) references, curve-by-curve then by index."""
        return [(int(c), int(k)) for c, k in zip(*np.nonzero(self.mutable_mask))]

    def y(self, ref):
        c, k = ref
        return float(self.points[c, k, 1])

    def with_points(self, points):
        return replace(self, points=points)


def naca4_thickness(x, thickness=0.12):
    """Symmetric NACA 4-digit half thickness with a closed trailing edge."""
    x = np.asarray(x, dtype=np.float64)
    return 5.0 * thickness * (0.2969 * np.sqrt(x) - 0.1260 * x - 0.3516 * x ** 2
                              + 0.2843 * x ** 3 - 0.1036 * x ** 4)


def _template(cfg: GeometryConfig) -> ControlPolygon:
    xt, h = cfg.x_t, cfg.thickness / 2
    # front curves: P1 sits on the leading edge so the nose can be round
    front_x = np.array([0.0, 0.0, xt / 3, 2 * xt / 3, xt])
    rear_x = np.linspace(xt, 1.0, N_POINTS)
    pts = np.zeros((4, N_POINTS, 2))
    for c, xs, sign in ((UPPER_FRONT, front_x, 1), (UPPER_REAR, rear_x, 1),
                        (LOWER_FRONT, front_x, -1), (LOWER_REAR, rear_x, -1)):
        pts[c, :, 0] = xs
        pts[c, :, 1] = np.interp(xs, [0, xt, 1], [0, sign * h, 0])
    pts[UPPER_FRONT, -1, 1] = pts[UPPER_REAR, 0, 1] = h
    pts[LOWER_FRONT, -1, 1] = pts[LOWER_REAR, 0, 1] = -h

    clamps = []
    if cfg.c1_clamping:
        for c, k, v in ((UPPER_FRONT, 3, h), (UPPER_REAR, 1, h),
                        (LOWER_FRONT, 3, -h), (LOWER_REAR, 1, -h)):
            pts[c, k, 1] = v
            clamps.append(((c, k), v))
    mask = np.zeros((4, N_POINTS), dtype=bool)
    mask[:, 1:-1] = True
    for (c, k), _ in clamps:
        mask[c, k] = False
    if cfg.symmetric_mode:
        mask[LOWER_FRONT] = mask[LOWER_REAR] = False
    return ControlPolygon(pts, mask, tuple(clamps), cfg.symmetric_mode, cfg.y_min, cfg.y_max)


def _invert_x(xs_ctrl, x):
    """Parameter t with x(t) = x for a monotone Bezier x component."""
    lo = np.zeros_like(x)
    hi = np.ones_like(x)
    coeff = np.array([math.comb(DEGREE, i) for i in range(N_POINTS)], dtype=float)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        B = coeff * mid[:, None] ** np.arange(N_POINTS) * (1 - mid[:, None]) ** np.arange(DEGREE, -1, -1)
        below = B @ xs_ctrl < x
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def fit_curve_y(xs_ctrl, fixed, x_target, y_target):
    """Least-squares y values for the free control points of one curve.

    ``fixed`` maps point index to its pinned y. Returns all 5 y values.
    """
    x_target = np.asarray(x_target, dtype=np.float64)
    y_target = np.asarray(y_target, dtype=np.float64)
    if x_target.size == 0:
        raise ValueError("no target points to fit")
    t = _invert_x(np.asarray(xs_ctrl, dtype=np.float64), x_target)
    M = bernstein_matrix(DEGREE, np.clip(t, 0.0, 1.0))
    free = [k for k in range(N_POINTS) if k not in fixed]
    rhs = y_target - sum(M[:, k] * v for k, v in fixed.items())
    A = M[:, free]
    if free and np.linalg.matrix_rank(A) < len(free):
        raise np.linalg.LinAlgError("rank-deficient Bernstein basis; target samples too few or duplicated")
    ys = np.zeros(N_POINTS)
    for k, v in fixed.items():
        ys[k] = v
    if free:
        ys[free] = np.linalg.lstsq(A, rhs, rcond=None)[0]
    return ys


def fit_polygon(target: "AirfoilProfile", template: ControlPolygon) -> ControlPolygon:
    """Fit the template's free y values to a target profile, curve by curve.

    The target is split at its leading edge (minimum x) and at the template
    joint x into the four curve spans.
    """
    pts = np.asarray(target.points, dtype=np.float64)
    if len(pts) == 0:
        raise ValueError("target profile has no points")
    ile = int(np.argmin(pts[:, 0]))
    upper = pts[:ile + 1][::-1]
    lower = pts[ile:]
    new = np.array(template.points)
    for c, surf in ((UPPER_FRONT, upper), (UPPER_REAR, upper),
                    (LOWER_FRONT, lower), (LOWER_REAR, lower)):
        ctrl = template.points[c]
        x0, x1 = ctrl[0, 0], ctrl[-1, 0]
        sel = (surf[:, 0] > x0) & (surf[:, 0] < x1)
        fixed = {0: ctrl[0, 1], N_POINTS - 1: ctrl[-1, 1]}
        fixed.update({k: v for (cc, k), v in template.clamp_spec if cc == c})
        new[c, :, 1] = fit_curve_y(ctrl[:, 0], fixed, surf[sel, 0], surf[sel, 1])
    if template.symmetric_mode:
        new[LOWER_FRONT, :, 1] = -new[UPPER_FRONT, :, 1]
        new[LOWER_REAR, :, 1] = -new[UPPER_REAR, :, 1]
    new[..., 1] = np.clip(new[..., 1], template.y_min, template.y_max)
    return template.with_points(new)


def naca4_profile(thickness=0.12, n=400) -> "AirfoilProfile":
    """Dense NACA 4-digit symmetric profile in TE -> upper -> LE -> lower order."""
    beta = np.linspace(0.0, np.pi, n // 2 + 1)
    xs = 0.5 * (1.0 - np.cos(beta))
    ys = naca4_thickness(xs, thickness)
    ys[-1] = 0.0
    x = np.concatenate([xs[::-1], xs[1:]])
    y = np.concatenate([ys[::-1], -ys[1:]])
    return AirfoilProfile(np.column_stack([x, y]))


def build_naca0012_polygon(cfg: GeometryConfig | None = None) -> ControlPolygon:
    """Control polygon fitted to the NACA 4-digit thickness law.

    Crest and trough sit at ``(x_t, +-t/2)``; leading and trailing edges at
    (0, 0) and (1, 0).
    """
    cfg = cfg or GeometryConfig()
    cfg.validate()
    template = _template(cfg)
    return fit_polygon(naca4_profile(cfg.thickness), template)


# -----------------------------------------------------------------------------
# Mutation
# -----------------------------------------------------------------------------

def apply_displacement(polygon: ControlPolygon, ref, dy: float) -> ControlPolygon:
    """Move one mutable control point perpendicular to the chord.

    In symmetric mode the mirrored lower point moves by ``-dy``. The new y
    is saturated to ``[y_min, y_max]``.
    """
    c, k = ref
    if not (0 <= c < 4 and 0 <= k < N_POINTS) or not polygon.mutable_mask[c, k]:
        raise ConstraintViolation(f"control point {tuple(ref)} is not mutable")
    if dy == 0.0:
        return polygon
    pts = np.array(polygon.points)
    y = min(max(pts[c, k, 1] + dy, polygon.y_min), polygon.y_max)
    pts[c, k, 1] = y
    if polygon.symmetric_mode and c in MIRROR:
        pts[MIRROR[c], k, 1] = -y
    return polygon.with_points(pts)


# -----------------------------------------------------------------------------
# Sampling and validation
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class AirfoilProfile:
    """Closed polyline, TE -> upper surface -> LE -> lower surface -> TE."""

    points: np.ndarray

    def __post_init__(self):
        p = _frozen(self.points)
        if p.ndim != 2 or p.shape[1] != 2:
            raise ValueError("profile points must have shape (n, 2)")
        object.__setattr__(self, "points", p)

    @property
    def m(self) -> int:
        return len(self.points) - 1

    @property
    def x(self):
        return self.points[:, 0]

    @property
    def y(self):
        return self.points[:, 1]

    def midpoints(self):
        return 0.5 * (self.points[:-1] + self.points[1:])

    def panel_lengths(self):
        return np.hypot(*np.diff(self.points, axis=0).T)


def cosine_parameters(q: int) -> np.ndarray:
    return 0.5 * (1.0 - np.cos(np.pi * np.arange(q + 1) / q))


def sample_profile(polygon: ControlPolygon, m: int = 200) -> AirfoilProfile:
    """Sample every curve at ``m/4`` cosine-spaced panels and stitch them."""
    if m < 40 or m % 4:
        raise ValueError("panel count must be >= 40 and divisible by 4")
    t = cosine_parameters(m // 4)
    B = bernstein_matrix(DEGREE, t)
    seg = [B @ polygon.points[c] for c in range(4)]
    pts = np.concatenate([
        seg[UPPER_REAR][::-1],
        seg[UPPER_FRONT][::-1][1:],
        seg[LOWER_FRONT][1:],
        seg[LOWER_REAR][1:],
    ])
    return AirfoilProfile(pts)


@dataclass(frozen=True)
class ProfileDiagnostics:
    is_closed: bool
    has_self_intersection: bool
    min_thickness: float
    max_thickness: float
    min_panel_length: float = field(default=float("nan"))

    @property
    def valid(self) -> bool:
        return self.is_closed and not self.has_self_intersection and self.min_thickness >= 0.0


def _surface(pts):
    order = np.argsort(pts[:, 0], kind="stable")
    return pts[order, 0], pts[order, 1]


def validate_profile(profile: AirfoilProfile) -> ProfileDiagnostics:
    """Closure, self-intersection and thickness diagnostics.

    Thickness is upper minus lower y, interpolated at every interior x
    station of either surface. The surfaces split at the minimum-x point.
    """
    pts = profile.points
    if len(pts) == 0:
        raise ValueError("empty profile")
    closed = bool(np.all(np.abs(pts[0] - pts[-1]) <= 1e-12))
    crossing = kernels.has_self_intersection(pts[:, 0], pts[:, 1])
    ile = int(np.argmin(pts[:, 0]))
    xu, yu = _surface(pts[:ile + 1])
    xl, yl = _surface(pts[ile:])
    lo, hi = max(xu[0], xl[0]), min(xu[-1], xl[-1])
    xs = np.unique(np.concatenate([xu, xl]))
    xs = xs[(xs > lo) & (xs < hi)]
    if xs.size:
        th = np.interp(xs, xu, yu) - np.interp(xs, xl, yl)
        tmin, tmax = float(th.min()), float(th.max())
    else:
        tmin = tmax = 0.0
    lengths = profile.panel_lengths()
    return ProfileDiagnostics(closed, crossing, tmin, tmax,
                              float(lengths.min()) if lengths.size else 0.0)


def write_coordinates(profile: AirfoilProfile, path, name="dqnfoil"):
    """Write a name line followed by ``x y`` rows (XFOIL-loadable)."""
    with open(path, "w") as fh:
        fh.write(f"{name}\n")
        for x, y in profile.points:
            fh.write(f"{x: .12f} {y: .12f}\n")
