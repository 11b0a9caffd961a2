"""Training runs, the random-action baseline, and their on-disk artifacts."""
from __future__ import annotations

import dataclasses
import json
import logging
import time
from dataclasses import dataclass, replace
from pathlib import Path

from .. import kernels
from ..agent import Trainer
from ..env import evaluate
from ..errors import ConfigurationError, DivergenceError
from . import export
from .config import ExperimentConfig, config_from_dict, load_config

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "dqnfoil-checkpoint"
CHECKPOINT_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3


@dataclass
class RunArtifacts:
    out_dir: Path
    files: dict
    summary: dict
    report: object
    status: int = EXIT_OK


def _measures_dict(m):
    return {"LM": m.lift_measure, "DM": m.drag_measure, "CL": m.cl, "CD": m.cd}


def write_checkpoint(trainer: Trainer, cfg: ExperimentConfig, path):
    doc = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "config": dataclasses.asdict(cfg),
        "state": trainer.state_dict(),
    }
    Path(path).write_text(json.dumps(doc, indent=1, default=str))


def read_checkpoint(path):
    """Return ``(ExperimentConfig, state dict)``."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise ConfigurationError(f"cannot read checkpoint {path}: {exc}") from None
    if doc.get("format") != CHECKPOINT_FORMAT or doc.get("version") != CHECKPOINT_VERSION:
        raise ConfigurationError(f"{path} is not a version {CHECKPOINT_VERSION} checkpoint")
    return config_from_dict(doc["config"]), doc["state"]


def write_artifacts(trainer: Trainer, cfg: ExperimentConfig, out_dir, wall_time=0.0, status=EXIT_OK):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rep = trainer.report
    env_cfg = trainer.env_config
    files = {}

    shapes = {}
    for label, poly in (("initial", trainer.env.initial_polygon), ("best", rep.best_polygon)):
        profile, _, cp, measures = evaluate(poly, env_cfg)
        shapes[label] = (profile, cp, measures)
        files[f"{label}_profile"] = out / f"{label}_profile.csv"
        export.export_profile(profile, files[f"{label}_profile"])
        if cfg.export_cp and cp is not None:
            files[f"{label}_cp"] = out / f"{label}_cp.csv"
            export.export_cp(cp, profile, files[f"{label}_cp"])

    files["measures"] = out / "measures.csv"
    export.export_measures([(env_cfg.alpha, shapes[k][2]) for k in ("initial", "best")], files["measures"])
    files["training_log"] = out / "training_log.csv"
    export.export_training_log(rep, files["training_log"])
    files["episode_trace"] = out / "episode_trace.csv"
    export.export_trace(rep, files["episode_trace"])
    files["checkpoint"] = out / "checkpoint.json"
    write_checkpoint(trainer, cfg, files["checkpoint"])
    if cfg.export_svg:
        files["svg"] = out / "profiles.svg"
        export.render_svg(shapes["initial"][0], shapes["best"][0], files["svg"],
                          shapes["initial"][1], shapes["best"][1])

    summary = {
        "tag": rep.tag,
        "preset": cfg.preset,
        "seed": trainer.config.seed,
        "episodes": rep.episodes,
        "status": "diverged" if status == EXIT_DIVERGED else "ok",
        "initial": _measures_dict(shapes["initial"][2]),
        "best": _measures_dict(shapes["best"][2]),
        "initial_return": rep.initial_return,
        "best_return": rep.best_return,
        "wall_time_s": wall_time,
        "kernel_backend": kernels.BACKEND,
    }
    files["summary"] = out / "summary.json"
    files["summary"].write_text(json.dumps(summary, indent=2) + "\n")
    return RunArtifacts(out, files, summary, rep, status)


def _execute(trainer: Trainer, cfg: ExperimentConfig, out_dir, episodes=None):
    t0 = time.perf_counter()
    status = EXIT_OK
    try:
        trainer.run(episodes)
    except DivergenceError as exc:
        log.error("%s", exc)
        status = EXIT_DIVERGED
    return write_artifacts(trainer, cfg, out_dir, time.perf_counter() - t0, status)


def _resolve(config):
    if isinstance(config, ExperimentConfig):
        return config.validate()
    return load_config(config)


def run(config, out_dir=None, seed=None) -> RunArtifacts:
    """Train under ``config`` (path or ExperimentConfig) and write artifacts.

    Config errors raise before anything is written.
    """
    cfg = _resolve(config)
    if seed is not None:
        cfg = replace(cfg, training=replace(cfg.training, seed=int(seed)))
    trainer = Trainer(cfg.env, cfg.training)
    return _execute(trainer, cfg, out_dir or cfg.output_dir)


def run_random_baseline(config, out_dir=None, seed=None) -> RunArtifacts:
    """Same loop with epsilon pinned to 1 and no network updates."""
    cfg = _resolve(config)
    training = replace(cfg.training, learn=False)
    if seed is not None:
        training = replace(training, seed=int(seed))
    cfg = replace(cfg, training=training)
    trainer = Trainer(cfg.env, cfg.training)
    return _execute(trainer, cfg, out_dir or f"{cfg.output_dir}_baseline")


def resume(checkpoint_path, episodes=None, out_dir=None) -> RunArtifacts:
    """Continue a checkpointed run for ``episodes`` more (default: up to its budget)."""
    cfg, state = read_checkpoint(checkpoint_path)
    cfg.validate()
    trainer = Trainer(cfg.env, cfg.training)
    trainer.load_state_dict(state)
    if episodes is None:
        episodes = max(cfg.training.episodes - trainer.episode, 0)
    cfg = replace(cfg, training=replace(cfg.training, episodes=trainer.episode + episodes))
    trainer.config = cfg.training
    return _execute(trainer, cfg, out_dir or Path(checkpoint_path).parent, episodes)
