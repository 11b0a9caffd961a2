"""Command-line driver, experiment presets and artifact export."""
from .config import ExperimentConfig, config_reference, load_config, parse_config, preset_config
from .export import export_cp, export_profile, read_profile, render_svg
from .runner import RunArtifacts, resume, run, run_random_baseline

__all__ = [
    "ExperimentConfig", "config_reference", "load_config", "parse_config", "preset_config",
    "export_cp", "export_profile", "read_profile", "render_svg",
    "RunArtifacts", "resume", "run", "run_random_baseline",
]
