"""``dqnfoil`` command-line interface."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from ..aero import compute_measures, solve_cp_panel, xfoil_solve
from ..errors import ConfigurationError, DqnfoilError
from ..geometry import build_naca0012_polygon, sample_profile, write_coordinates
from . import export
from .config import PRESETS, config_reference, load_config, preset_config
from .runner import EXIT_CONFIG, EXIT_OK, resume, run, run_random_baseline

log = logging.getLogger("dqnfoil")

# Cd of the stock NACA0012 at 0 deg reported for the XFOIL reference case
REFERENCE_DM = 0.00106
REFERENCE_TOL = 0.5


def _config(args):
    if args.config:
        return load_config(args.config)
    return preset_config(args.preset).validate()


def _report(arts):
    print(json.dumps(arts.summary, indent=2))
    return arts.status


def cmd_run(args):
    return _report(run(_config(args), args.out, args.seed))


def cmd_baseline(args):
    return _report(run_random_baseline(_config(args), args.out, args.seed))


def cmd_resume(args):
    return _report(resume(args.checkpoint, args.episodes, args.out))


def _profile(args, cfg):
    if args.profile:
        return export.read_profile(args.profile)
    return sample_profile(build_naca0012_polygon(cfg.env.geometry), cfg.env.panels)


def cmd_eval(args):
    cfg = _config(args)
    profile = _profile(args, cfg)
    alpha = cfg.env.alpha if args.alpha is None else args.alpha
    backend = args.backend or cfg.env.backend
    if backend == "xfoil":
        xs = cfg.env.xfoil
        if args.xfoil:
            xs = replace(xs, executable_path=args.xfoil)
        if args.reynolds is not None:
            xs = replace(xs, reynolds=args.reynolds)
        cp, measures = xfoil_solve(profile, replace(xs, alpha=alpha))
    else:
        cp = solve_cp_panel(profile, alpha)
        measures = compute_measures(cp, profile)
    result = {"backend": backend, "alpha": alpha, "LM": measures.lift_measure,
              "DM": measures.drag_measure, "CL": measures.cl, "CD": measures.cd}
    if backend == "xfoil":
        rel = abs(measures.drag_measure - REFERENCE_DM) / REFERENCE_DM
        result["reference_DM"] = REFERENCE_DM
        result["within_reference_tolerance"] = rel <= REFERENCE_TOL
        if rel > REFERENCE_TOL:
            log.warning("DM %.5g differs from reference %.5g by %.0f%%",
                        measures.drag_measure, REFERENCE_DM, 100 * rel)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        export.export_measures([(alpha, measures)], out / "measures.csv")
        export.export_cp(cp, profile, out / "cp.csv")
    print(json.dumps(result, indent=2))
    return EXIT_OK


def cmd_export(args):
    cfg = _config(args)
    out = Path(args.out or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    initial = sample_profile(build_naca0012_polygon(cfg.env.geometry), cfg.env.panels)
    best = export.read_profile(args.profile) if args.profile else initial
    cp_i = solve_cp_panel(initial, cfg.env.alpha)
    cp_b = solve_cp_panel(best, cfg.env.alpha)
    export.export_profile(best, out / "profile.csv")
    write_coordinates(best, out / "profile.dat", name=cfg.name)
    export.export_cp(cp_b, best, out / "cp.csv")
    export.render_svg(initial, best, out / "profiles.svg", cp_i, cp_b)
    (out / "config_reference.ini").write_text(config_reference(cfg.preset))
    print(str(out))
    return EXIT_OK


def cmd_defaults(args):
    sys.stdout.write(config_reference(args.preset))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="dqnfoil", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, preset=True):
        sp.add_argument("--config", help="INI experiment config")
        if preset:
            sp.add_argument("--preset", choices=PRESETS, default="drag_min_symmetric",
                            help="used when --config is not given")
        sp.add_argument("--out", help="output directory")

    for name, fn, helptext in (("run", cmd_run, "train the DQN and write artifacts"),
                               ("baseline", cmd_baseline, "random-action baseline")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--seed", type=int, help="overrides training.seed")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("resume", help="continue training from a checkpoint")
    sp.add_argument("--checkpoint", required=True)
    sp.add_argument("--episodes", type=int, help="additional episodes (default: remaining budget)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_resume)

    sp = sub.add_parser("eval", help="one-shot solve and measures for a profile")
    common(sp)
    sp.add_argument("--profile", help="profile CSV or coordinate file (default: initial NACA0012)")
    sp.add_argument("--backend", choices=("panel", "xfoil"))
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--reynolds", type=float, help="XFOIL viscous Reynolds number")
    sp.add_argument("--xfoil", help="XFOIL executable")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("export", help="write profile, Cp, SVG and config reference")
    common(sp)
    sp.add_argument("--profile", help="shape to export (default: initial NACA0012)")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("defaults", help="print every config key with its default")
    sp.add_argument("--preset", choices=PRESETS, default="custom")
    sp.set_defaults(func=cmd_defaults)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DqnfoilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
