import json
from dataclasses import replace

import numpy as np
import pytest

from dqnfoil.aero import compute_measures, solve_cp_panel
from dqnfoil.agent import TrainingConfig
from dqnfoil.driver import cli
from dqnfoil.driver.config import (ExperimentConfig, config_reference, config_to_ini, load_config,
                                   parse_config, preset_config)
from dqnfoil.driver.export import export_cp, export_profile, read_profile, render_svg
from dqnfoil.driver.runner import read_checkpoint, resume, run, run_random_baseline
from dqnfoil.env import ActionSpace, EnvConfig
from dqnfoil.errors import ConfigurationError

TINY = TrainingConfig(batch_size=4, episodes=4, hidden=(8,), seed=3)


def tiny(**env_kw):
    return ExperimentConfig(env=EnvConfig(**env_kw), training=TINY, preset="custom")


class TestConfig:
    def test_preset_defaults(self):
        c = parse_config("[run]\npreset = lift_max\n")
        assert c.env.reward_mode == "lift_max" and not c.env.geometry.symmetric_mode

    def test_overrides(self):
        c = parse_config("[training]\ngamma = 0.9\nhidden = 16, 16\n[env]\nactions = -0.01, 0, 0.01\n"
                         "[geometry]\nc1_clamping = false\n")
        assert c.training.gamma == 0.9 and c.training.hidden == (16, 16)
        assert c.env.actions.steps == (-0.01, 0.0, 0.01)
        assert c.env.geometry.c1_clamping is False

    def test_unknown_key_named(self):
        with pytest.raises(ConfigurationError, match="training.gama"):
            parse_config("[training]\ngama = 0.9\n")

    def test_unknown_section(self):
        with pytest.raises(ConfigurationError, match="solver"):
            parse_config("[solver]\nx = 1\n")

    def test_bad_value(self):
        with pytest.raises(ConfigurationError, match="training.episodes"):
            parse_config("[training]\nepisodes = many\n")

    def test_invalid_range(self):
        with pytest.raises(ConfigurationError, match="training.gamma"):
            parse_config("[training]\ngamma = 2\n")

    def test_malformed(self):
        with pytest.raises(ConfigurationError):
            parse_config("no section header\n")

    def test_missing_xfoil(self):
        with pytest.raises(ConfigurationError, match="xfoil.executable_path"):
            parse_config("[env]\nbackend = xfoil\n[xfoil]\nexecutable_path = /no/xfoil\n")

    @pytest.mark.parametrize("preset", ["custom", "drag_min_symmetric", "lift_max"])
    def test_ini_round_trip(self, preset):
        cfg = preset_config(preset)
        assert parse_config(config_to_ini(cfg)) == cfg

    def test_reference_lists_every_section(self):
        text = config_reference()
        for s in ("[run]", "[env]", "[geometry]", "[training]", "[xfoil]"):
            assert s in text
        assert parse_config(text) == preset_config("custom")

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config(tmp_path / "nope.ini")


class TestExport:
    def test_profile_round_trip(self, naca_profile, tmp_path):
        export_profile(naca_profile, tmp_path / "p.csv")
        assert np.array_equal(read_profile(tmp_path / "p.csv").points, naca_profile.points)

    def test_dat_read(self, naca_profile, tmp_path):
        from dqnfoil.geometry import write_coordinates
        write_coordinates(naca_profile, tmp_path / "p.dat", "naca")
        assert np.allclose(read_profile(tmp_path / "p.dat").points, naca_profile.points, atol=1e-7)

    def test_cp_rows(self, naca_profile, tmp_path):
        export_cp(solve_cp_panel(naca_profile, 0.0), naca_profile, tmp_path / "cp.csv")
        lines = (tmp_path / "cp.csv").read_text().splitlines()
        assert lines[0].startswith("x") and len(lines) == naca_profile.m + 1

    def test_svg(self, naca_profile, tmp_path):
        render_svg(naca_profile, naca_profile, tmp_path / "s.svg")
        text = (tmp_path / "s.svg").read_text()
        assert text.startswith("<svg") or text.startswith("<?xml")
        assert "#1f4fd8" in text and "#d81f1f" in text


@pytest.fixture(scope="module")
def arts(tmp_path_factory):
    return run(tiny(), tmp_path_factory.mktemp("run"))


class TestRunner:
    def test_files(self, arts):
        names = {p.name for p in arts.out_dir.iterdir()}
        assert {"initial_profile.csv", "best_profile.csv", "initial_cp.csv", "best_cp.csv", "measures.csv",
                "training_log.csv", "episode_trace.csv", "checkpoint.json", "profiles.svg",
                "summary.json"} <= names

    def test_log_rows(self, arts):
        log = (arts.out_dir / "training_log.csv").read_text().splitlines()
        trace = (arts.out_dir / "episode_trace.csv").read_text().splitlines()
        assert len(log) == 1 + 4 and len(trace) == 1 + 16

    def test_summary_matches_best_profile(self, arts):
        s = json.loads((arts.out_dir / "summary.json").read_text())
        prof = read_profile(arts.out_dir / "best_profile.csv")
        m = compute_measures(solve_cp_panel(prof, 0.0), prof)
        assert abs(m.drag_measure - s["best"]["DM"]) < 1e-12
        assert abs(m.lift_measure - s["best"]["LM"]) < 1e-12
        assert s["best_return"] >= s["initial_return"]

    def test_checkpoint_config(self, arts):
        cfg, state = read_checkpoint(arts.out_dir / "checkpoint.json")
        assert cfg == tiny() and state["episode"] == 4

    def test_resume_matches_uninterrupted(self, tmp_path):
        cfg = replace(tiny(), training=replace(TINY, episodes=6))
        full = run(cfg, tmp_path / "full")
        half = run(replace(cfg, training=replace(cfg.training, episodes=3)), tmp_path / "half")
        resumed = resume(half.files["checkpoint"], 3, tmp_path / "resumed")
        a = (full.out_dir / "training_log.csv").read_bytes()
        b = (resumed.out_dir / "training_log.csv").read_bytes()
        assert a == b
        assert (full.out_dir / "episode_trace.csv").read_bytes() == \
            (resumed.out_dir / "episode_trace.csv").read_bytes()

    def test_baseline_deterministic(self, tmp_path):
        a = run_random_baseline(tiny(), tmp_path / "a")
        b = run_random_baseline(tiny(), tmp_path / "b")
        assert a.summary["tag"] == "baseline"
        assert (a.out_dir / "training_log.csv").read_bytes() == (b.out_dir / "training_log.csv").read_bytes()

    def test_zero_only_actions_keep_initial(self, tmp_path):
        arts = run(tiny(actions=ActionSpace((0.0,))), tmp_path)
        assert arts.summary["best"] == arts.summary["initial"]
        assert (arts.out_dir / "best_profile.csv").read_bytes() == \
            (arts.out_dir / "initial_profile.csv").read_bytes()

    def test_bad_config_writes_nothing(self, tmp_path):
        ini = tmp_path / "bad.ini"
        ini.write_text("[training]\nbogus = 1\n")
        out = tmp_path / "out"
        assert cli.main(["run", "--config", str(ini), "--out", str(out)]) == 2
        assert not out.exists()


class TestCli:
    def test_eval(self, capsys):
        assert cli.main(["eval", "--preset", "custom", "--alpha", "0"]) == 0
        res = json.loads(capsys.readouterr().out)
        assert res["backend"] == "panel" and abs(res["LM"]) < 1e-6

    def test_eval_profile_file(self, naca_profile, tmp_path, capsys):
        export_profile(naca_profile, tmp_path / "p.csv")
        assert cli.main(["eval", "--profile", str(tmp_path / "p.csv"), "--out", str(tmp_path / "o")]) == 0
        assert (tmp_path / "o" / "cp.csv").exists()

    def test_eval_with_fake_xfoil(self, fake_xfoil, capsys, caplog):
        assert cli.main(["eval", "--backend", "xfoil", "--xfoil", fake_xfoil]) == 0
        res = json.loads(capsys.readouterr().out)
        assert res["CD"] == 0.00541 and "within_reference_tolerance" in res

    def test_eval_missing_xfoil(self, capsys):
        assert cli.main(["eval", "--backend", "xfoil", "--xfoil", "/no/such/xfoil"]) == 1
        assert "/no/such/xfoil" in capsys.readouterr().err

    def test_defaults(self, capsys):
        assert cli.main(["defaults"]) == 0
        assert "[training]" in capsys.readouterr().out

    def test_export(self, tmp_path, capsys):
        assert cli.main(["export", "--preset", "custom", "--out", str(tmp_path)]) == 0
        for f in ("profile.csv", "profile.dat", "cp.csv", "profiles.svg", "config_reference.ini"):
            assert (tmp_path / f).exists()
