"""Episodic MDP over the mutable control points of an airfoil.

One step displaces the next mutable control point by one of the action
space's step sizes; an episode visits every mutable point once.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .aero import (DRAG_MIN, LIFT_MAX, AeroMeasures, XfoilSettings, compute_measures,
                   reward_from_measures, solve_cp_panel, xfoil_solve)
from .errors import ConfigurationError, EnvStateError, SolverError, GeometryError
from .geometry import (ControlPolygon, GeometryConfig, ProfileDiagnostics, apply_displacement,
                       build_naca0012_polygon, sample_profile, validate_profile)

DEFAULT_STEPS = (-0.01, -0.005, -0.001, 0.0, 0.001, 0.005, 0.01)
MIN_PANEL_LENGTH = 1e-5


@dataclass(frozen=True)
class ActionSpace:
    steps: tuple = DEFAULT_STEPS

    def __post_init__(self):
        steps = tuple(float(s) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise ConfigurationError("action space is empty", "env.actions")
        if list(steps) != sorted(steps):
            raise ConfigurationError("action steps must be sorted ascending", "env.actions")
        if 0.0 not in steps:
            raise ConfigurationError("action steps must contain 0", "env.actions")

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class EnvConfig:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    actions: ActionSpace = field(default_factory=ActionSpace)
    reward_mode: str = DRAG_MIN
    reward_ra_literal: bool = False
    reward_delta: bool = False
    reward_scale: float = 1.0
    invalid_penalty: float = -1.0
    backend: str = "panel"
    xfoil: XfoilSettings = field(default_factory=XfoilSettings)
    alpha: float = 0.0
    panels: int = 200
    state_mode: str = "control"
    profile_features: int = 64
    warm_start: bool = False

    def validate(self):
        self.geometry.validate()
        if self.reward_mode not in (DRAG_MIN, LIFT_MAX):
            raise ConfigurationError(f"unknown reward mode {self.reward_mode!r}", "env.reward_mode")
        if self.backend not in ("panel", "xfoil"):
            raise ConfigurationError(f"unknown backend {self.backend!r}", "env.backend")
        if self.state_mode not in ("control", "profile"):
            raise ConfigurationError(f"unknown state mode {self.state_mode!r}", "env.state_mode")
        if self.panels < 40 or self.panels % 4:
            raise ConfigurationError("panels must be >= 40 and divisible by 4", "env.panels")
        if self.profile_features < 2:
            raise ConfigurationError("profile_features must be >= 2", "env.profile_features")
        if not self.reward_scale > 0:
            raise ConfigurationError("reward_scale must be positive", "env.reward_scale")
        if not self.actions.steps[0] < 0.0 < self.actions.steps[-1] and len(self.actions) > 1:
            raise ConfigurationError("action steps need a negative and a positive entry", "env.actions")


@dataclass(frozen=True)
class EnvState:
    vector: np.ndarray
    step_index: int
    N: int


@dataclass(frozen=True)
class StepOutcome:
    next_state: EnvState
    reward: float
    done: bool
    measures: AeroMeasures
    diagnostics: ProfileDiagnostics
    point_ref: tuple = (0, 0)
    action: float = 0.0
    valid: bool = True


def episode_return(rewards, gamma) -> float:
    """Discounted sum ``sum_k gamma**k r_k``."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    total, w = 0.0, 1.0
    for r in rewards:
        total += w * r
        w *= gamma
    return total


def evaluate(polygon: ControlPolygon, cfg: EnvConfig):
    """Sample, validate and solve one shape.

    Returns ``(profile, diagnostics, cp, measures)``; cp and measures are
    None when the shape is invalid.
    """
    profile = sample_profile(polygon, cfg.panels)
    diag = validate_profile(profile)
    if not diag.valid or diag.min_panel_length < MIN_PANEL_LENGTH:
        return profile, diag, None, None
    try:
        if cfg.backend == "panel":
            cp = solve_cp_panel(profile, cfg.alpha)
            measures = compute_measures(cp, profile)
        else:
            cp, measures = xfoil_solve(profile, replace(cfg.xfoil, alpha=cfg.alpha))
    except (SolverError, GeometryError) as exc:
        if isinstance(exc, SolverError):
            exc.polygon = polygon
        raise
    return profile, diag, cp, measures


class AirfoilEnv:
    """Environment instance; owned by one trajectory at a time."""

    def __init__(self, config: Optional[EnvConfig] = None, initial_polygon=None):
        self.config = config or EnvConfig()
        self.config.validate()
        self.initial_polygon = initial_polygon or build_naca0012_polygon(self.config.geometry)
        self.refs = self.initial_polygon.mutable_refs()
        self.N = len(self.refs)
        if self.N == 0:
            raise ConfigurationError("no mutable control points", "geometry")
        self.best_polygon = self.initial_polygon
        _, self.initial_diagnostics, _, self.initial_measures = evaluate(self.initial_polygon, self.config)
        if self.initial_measures is None:
            raise ConfigurationError("initial shape is invalid", "geometry")
        self.polygon = self.initial_polygon
        self.step_index = 0
        self.measures = self.initial_measures
        self.diagnostics = self.initial_diagnostics

    @property
    def n_actions(self):
        return len(self.config.actions)

    @property
    def state_size(self):
        if self.config.state_mode == "control":
            return 2 * self.N
        return self.config.profile_features + self.N

    @property
    def done(self):
        return self.step_index >= self.N

    def shape_reward(self, measures):
        c = self.config
        return c.reward_scale * reward_from_measures(measures, c.reward_mode, c.reward_ra_literal)

    def reset(self) -> EnvState:
        start = self.best_polygon if self.config.warm_start else self.initial_polygon
        if start is not self.polygon:
            _, self.diagnostics, _, self.measures = evaluate(start, self.config)
        self.polygon = start
        self.step_index = 0
        return self.encode_state()

    def encode_state(self) -> EnvState:
        c = self.config
        lo, hi = c.geometry.y_min, c.geometry.y_max
        if c.state_mode == "control":
            ys = np.array([self.polygon.y(r) for r in self.refs])
        else:
            prof = sample_profile(self.polygon, c.panels)
            idx = np.round(np.linspace(0, prof.m, c.profile_features)).astype(int)
            ys = prof.y[idx]
        feats = 2.0 * (ys - lo) / (hi - lo) - 1.0
        onehot = np.zeros(self.N)
        if self.step_index < self.N:
            onehot[self.step_index] = 1.0
        vec = np.concatenate([feats, onehot])
        vec.setflags(write=False)
        return EnvState(vec, self.step_index, self.N)

    def step(self, action_index: int) -> StepOutcome:
        if self.done:
            raise EnvStateError("episode is over; call reset()")
        steps = self.config.actions.steps
        if not 0 <= action_index < len(steps):
            raise ValueError(f"action index {action_index} outside action space")
        ref = self.refs[self.step_index]
        dy = steps[action_index]
        old_measures = self.measures
        candidate = apply_displacement(self.polygon, ref, dy)
        valid = True
        if candidate is self.polygon or np.array_equal(candidate.points, self.polygon.points):
            measures, diag = self.measures, self.diagnostics
        else:
            _, diag, _, measures = evaluate(candidate, self.config)
            valid = measures is not None
        if valid:
            self.polygon, self.measures, self.diagnostics = candidate, measures, diag
            reward = self.shape_reward(measures)
            if self.config.reward_delta:
                reward -= self.shape_reward(old_measures)
        else:
            reward = self.config.invalid_penalty
        self.step_index += 1
        return StepOutcome(self.encode_state(), float(reward), self.done, self.measures, diag,
                           ref, dy, valid)
