"""Experiment configuration: INI files with one section per component.

Every key is addressed by a dotted path (``training.gamma``,
``geometry.c1_clamping``). A file only needs the keys it overrides; the
``run.preset`` key picks the starting defaults.
"""
from __future__ import annotations

import configparser
import dataclasses
import shutil
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from ..aero import XfoilSettings
from ..aero.types import XFOIL_ENV
from ..agent import TrainingConfig
from ..env import ActionSpace, EnvConfig
from ..errors import ConfigurationError
from ..geometry import GeometryConfig

PRESETS = ("drag_min_symmetric", "lift_max", "custom")

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str = "custom"
    env: EnvConfig = field(default_factory=EnvConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    output_dir: str = "runs/default"
    name: str = "dqnfoil"
    export_svg: bool = True
    export_cp: bool = True

    def validate(self):
        if self.preset not in PRESETS:
            raise ConfigurationError(f"unknown preset {self.preset!r}", "run.preset")
        self.env.validate()
        self.training.validate()
        if self.env.backend == "xfoil":
            exe = self.env.xfoil.executable_path
            if not (Path(exe).is_file() or shutil.which(exe)):
                raise ConfigurationError(f"XFOIL executable not found: {exe}", "xfoil.executable_path")
        return self


def preset_config(name: str) -> ExperimentConfig:
    """Defaults for a named preset.

    ``custom`` uses the plain library defaults. The two paper cases use
    delta rewards scaled to O(1) and momentum SGD so that a 200-episode
    budget is enough for the network to separate the actions.
    """
    if name not in PRESETS:
        raise ConfigurationError(f"unknown preset {name!r}", "run.preset")
    if name == "custom":
        return ExperimentConfig(preset=name)
    training = TrainingConfig(learning_rate=1e-2, momentum=0.9, decay_steps=400, episodes=200)
    if name == "drag_min_symmetric":
        env = EnvConfig(geometry=GeometryConfig(symmetric_mode=True), reward_mode="drag_min",
                        reward_delta=True, reward_scale=1e4)
    else:
        env = EnvConfig(geometry=GeometryConfig(symmetric_mode=False), reward_mode="lift_max",
                        reward_delta=True, reward_scale=1e2)
    return ExperimentConfig(preset=name, env=env, training=training,
                            output_dir=f"runs/{name}", name=name)


# -- value coercion -----------------------------------------------------------

def _coerce(raw: str, default, key, annotation=""):
    text = raw.strip()
    try:
        if default is None and "Path" in str(annotation):
            return None if text.lower() in ("", "none") else text
        if isinstance(default, bool):
            low = text.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError(text)
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
        if isinstance(default, tuple):
            kind = type(default[0]) if default else float
            return tuple(kind(v) for v in text.replace(",", " ").split())
        if default is None:
            if text.lower() in ("", "none"):
                return None
            return float(text)
        return text
    except ValueError:
        raise ConfigurationError(f"cannot parse {raw!r} as {type(default).__name__}", key) from None


def _apply(obj, section, items):
    names = {f.name: f for f in fields(obj)}
    updates = {}
    for k, raw in items.items():
        key = f"{section}.{k}"
        if k not in names:
            raise ConfigurationError("unknown key", key)
        current = getattr(obj, k)
        if dataclasses.is_dataclass(current):
            raise ConfigurationError("is a section, not a value", key)
        updates[k] = _coerce(raw, current, key, names[k].type)
    try:
        return replace(obj, **updates)
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(str(exc), section) from None


def parse_config(text: str, source="<string>") -> ExperimentConfig:
    """Build an :class:`ExperimentConfig` from INI text."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=str(source))
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config: {exc}") from None
    known = {"run", "env", "geometry", "training", "xfoil"}
    for s in cp.sections():
        if s not in known:
            raise ConfigurationError("unknown section", s)

    run = dict(cp["run"]) if cp.has_section("run") else {}
    cfg = preset_config(run.pop("preset", "custom").strip())
    env = cfg.env
    if cp.has_section("geometry"):
        env = replace(env, geometry=_apply(env.geometry, "geometry", dict(cp["geometry"])))
    if cp.has_section("xfoil"):
        env = replace(env, xfoil=_apply(env.xfoil, "xfoil", dict(cp["xfoil"])))
    if cp.has_section("env"):
        items = dict(cp["env"])
        if "actions" in items:
            steps = _coerce(items.pop("actions"), (0.0,), "env.actions")
            env = replace(env, actions=ActionSpace(steps))
        env = _apply(env, "env", items)
    training = cfg.training
    if cp.has_section("training"):
        training = _apply(training, "training", dict(cp["training"]))
    cfg = replace(cfg, env=env, training=training)
    cfg = _apply(cfg, "run", run)
    return cfg.validate()


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file: {exc}") from None
    return parse_config(text, path)


# -- serialization ------------------------------------------------------------

def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return ", ".join(repr(x) for x in v)
    if v is None:
        return "none"
    return repr(v) if isinstance(v, float) else str(v)


def _section(obj, skip=()):
    return {f.name: _fmt(getattr(obj, f.name)) for f in fields(obj)
            if f.name not in skip and not dataclasses.is_dataclass(getattr(obj, f.name))}


def config_to_ini(cfg: ExperimentConfig) -> str:
    """Serialize a config; ``parse_config`` of the result reproduces it."""
    env_items = _section(cfg.env)
    env_items["actions"] = _fmt(cfg.env.actions.steps)
    sections = {
        "run": {"preset": cfg.preset, **_section(cfg, skip=("preset",))},
        "env": env_items,
        "geometry": _section(cfg.env.geometry),
        "training": _section(cfg.training),
        "xfoil": _section(cfg.env.xfoil),
    }
    lines = []
    for name, items in sections.items():
        lines.append(f"[{name}]")
        lines += [f"{k} = {v}" for k, v in items.items()]
        lines.append("")
    return "\n".join(lines)


_DOCS = {
    "run.preset": "drag_min_symmetric | lift_max | custom; selects the starting defaults",
    "env.actions": "displacement steps in chord fractions, ascending, must include 0",
    "env.reward_mode": "drag_min (-DM - |LM|) | lift_max (LM)",
    "env.reward_ra_literal": "drag_min uses -DM - LM instead of -DM - |LM|",
    "env.reward_delta": "reward is the change in shape reward caused by the step",
    "env.reward_scale": "multiplier applied to shape rewards (not to invalid_penalty)",
    "env.invalid_penalty": "reward for a step that produced an invalid shape (reverted)",
    "env.backend": "panel | xfoil",
    "env.state_mode": "control (mutable control-point y) | profile (sampled y)",
    "env.warm_start": "episodes start from the best shape found so far",
    "geometry.c1_clamping": "pin the crest/trough neighbours to the joint y",
    "geometry.symmetric_mode": "lower surface mirrors the upper surface",
    "training.hidden": "hidden layer widths",
    "training.momentum": "0 = plain SGD",
    "training.target_update": "sync a frozen target network every N updates; 0 = off",
    "xfoil.executable_path": f"defaults to ${XFOIL_ENV} or 'xfoil' on PATH",
    "xfoil.reynolds": "none = inviscid",
}


def config_reference(preset="custom") -> str:
    """INI text listing every key with its default and a short note."""
    out = []
    for line in config_to_ini(preset_config(preset)).splitlines():
        if line.startswith("["):
            section = line[1:-1]
        elif "=" in line:
            key = f"{section}.{line.split('=')[0].strip()}"
            if key in _DOCS:
                out.append(f"# {_DOCS[key]}")
        out.append(line)
    return "\n".join(out) + "\n"


def config_from_dict(d) -> ExperimentConfig:
    """Inverse of ``dataclasses.asdict`` on an ExperimentConfig."""
    env = dict(d["env"])
    env["geometry"] = GeometryConfig(**env["geometry"])
    env["actions"] = ActionSpace(tuple(env["actions"]["steps"]))
    x = dict(env["xfoil"])
    env["xfoil"] = XfoilSettings(**x)
    training = dict(d["training"])
    training["hidden"] = tuple(training["hidden"])
    return replace(ExperimentConfig(), **{**d, "env": EnvConfig(**env),
                                          "training": TrainingConfig(**training)})
