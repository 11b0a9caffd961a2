"""Artifact writers: profile/Cp/measure CSVs, logs, and an SVG overlay."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from ..geometry import AirfoilProfile

INITIAL_COLOR = "#1f4fd8"
BEST_COLOR = "#d81f1f"


def _num(v):
    if v is None:
        return ""
    return repr(float(v))


def _open(path):
    path = Path(path)
    return path.open("w", newline="")


def export_profile(profile: AirfoilProfile, path):
    """``x,y`` rows in traversal order; ``repr`` floats round-trip exactly."""
    with _open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y"])
        for x, y in profile.points:
            w.writerow([_num(x), _num(y)])


def read_profile(path) -> AirfoilProfile:
    """Load an ``x,y`` CSV or a name-line-plus-``x y`` coordinate file."""
    lines = Path(path).read_text().splitlines()
    rows = []
    for line in lines:
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            continue
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            continue
    if not rows:
        raise ValueError(f"no coordinate rows in {path}")
    return AirfoilProfile(np.array(rows))


def export_cp(cp, profile: AirfoilProfile, path):
    """``x,Cp`` per panel, x at the panel midpoint."""
    values = cp.cp if hasattr(cp, "cp") else cp
    if len(values) != profile.m:
        raise ValueError("Cp length does not match panel count")
    with _open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "Cp"])
        for x, c in zip(profile.midpoints()[:, 0], values):
            w.writerow([_num(x), _num(c)])


def export_measures(rows, path):
    """Rows of ``(alpha, AeroMeasures)``."""
    with _open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "LM", "DM", "CL", "CD"])
        for alpha, m in rows:
            w.writerow([_num(alpha), _num(m.lift_measure), _num(m.drag_measure), _num(m.cl), _num(m.cd)])


def export_training_log(report, path):
    with _open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["episode", "return", "best_return", "epsilon", "mean_loss", "best_DM", "best_LM"])
        for k in range(report.episodes):
            w.writerow([k, _num(report.returns[k]), _num(report.best_returns[k]), _num(report.epsilons[k]),
                        _num(report.mean_losses[k]), _num(report.best_dm[k]), _num(report.best_lm[k])])


def export_trace(report, path):
    with _open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["episode", "step", "point_ref", "action", "reward", "LM", "DM", "valid"])
        for ep, step, ref, action, reward, lm, dm, valid in report.steps:
            w.writerow([ep, step, f"{ref[0]}:{ref[1]}", _num(action), _num(reward), _num(lm), _num(dm),
                        int(bool(valid))])


def _polyline(points, color, width, dashed=False):
    coords = " ".join(f"{x:.5f},{y:.5f}" for x, y in points)
    dash = ' stroke-dasharray="0.01,0.006"' if dashed else ""
    return (f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"{dash}/>')


def render_svg(initial: AirfoilProfile, best: AirfoilProfile, path, cp_initial=None, cp_best=None):
    """Overlay of both profiles over a unit-chord viewBox, plus a Cp panel.

    The profile panel occupies y in [-0.3, 0.3]; the Cp panel below it maps
    -Cp (suction up) onto y in [0.4, 1.0].
    """
    def flip(pts):
        return np.column_stack([pts[:, 0], -pts[:, 1]])

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-0.05 -0.35 1.1 1.45" '
        'width="880" height="1160">',
        '<rect x="-0.05" y="-0.35" width="1.1" height="1.45" fill="white"/>',
        '<line x1="0" y1="0" x2="1" y2="0" stroke="#bbbbbb" stroke-width="0.001"/>',
        _polyline(flip(initial.points), INITIAL_COLOR, 0.002),
        _polyline(flip(best.points), BEST_COLOR, 0.002),
    ]
    cps = [(c, p, col) for c, p, col in ((cp_initial, initial, INITIAL_COLOR), (cp_best, best, BEST_COLOR))
           if c is not None]
    if cps:
        vals = np.concatenate([np.asarray(c.cp if hasattr(c, "cp") else c) for c, _, _ in cps])
        lo, hi = float(np.min(-vals)), float(np.max(-vals))
        span = hi - lo if hi > lo and math.isfinite(hi - lo) else 1.0
        parts.append('<line x1="0" y1="1.0" x2="1" y2="1.0" stroke="#bbbbbb" stroke-width="0.001"/>')
        for c, prof, col in cps:
            v = -np.asarray(c.cp if hasattr(c, "cp") else c)
            y = 1.0 - 0.6 * (v - lo) / span
            parts.append(_polyline(np.column_stack([prof.midpoints()[:, 0], y]), col, 0.0015, dashed=True))
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
