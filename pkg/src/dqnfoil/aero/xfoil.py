"""Adapter driving an external XFOIL process through its stdin command language."""
from __future__ import annotations

import shutil
import subprocess
import tempfile
from pathlib import Path

import numpy as np

from ..errors import XfoilConvergenceError, XfoilProtocolError, XfoilSpawnError, XfoilTimeout
from ..geometry import AirfoilProfile, write_coordinates
from .measures import compute_measures
from .types import AeroMeasures, CpDistribution, XfoilSettings

COORD_FILE = "foil.dat"
CP_FILE = "foil.cp"
POLAR_FILE = "foil.pol"
NONCONVERGED = "convergence failed"


def build_script(settings: XfoilSettings, coord_file=COORD_FILE, cp_file=CP_FILE,
                 polar_file=POLAR_FILE) -> str:
    lines = [f"LOAD {coord_file}", "OPER"]
    if settings.reynolds is not None:
        lines.append(f"VISC {settings.reynolds:g}")
    lines += [
        f"MACH {settings.mach:g}",
        "PACC", polar_file, "",
        f"ALFA {settings.alpha:g}",
        f"CPWR {cp_file}",
        "",
        "QUIT",
    ]
    return "\n".join(lines) + "\n"


def _floats(line):
    try:
        return [float(v) for v in line.split()]
    except ValueError:
        return None


def parse_cp_file(path):
    """Return ``(x, y or None, cp)`` arrays from a CPWR dump.

    Non-numeric lines are treated as headers. Two columns mean ``x Cp``,
    three mean ``x y Cp``.
    """
    rows = []
    ncol = None
    for line in Path(path).read_text().splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        vals = _floats(line)
        if vals is None:
            if rows:
                raise XfoilProtocolError("non-numeric row in Cp file", line)
            continue
        if ncol is None:
            ncol = len(vals)
            if ncol not in (2, 3):
                raise XfoilProtocolError("unexpected column count in Cp file", line)
        elif len(vals) != ncol:
            raise XfoilProtocolError("ragged row in Cp file", line)
        rows.append(vals)
    if not rows:
        raise XfoilProtocolError("Cp file has no data rows")
    a = np.array(rows)
    if ncol == 2:
        return a[:, 0], None, a[:, 1]
    return a[:, 0], a[:, 1], a[:, 2]


def parse_polar(path):
    """Return ``(alpha, CL, CD)`` of the last data row of a polar file."""
    text = Path(path).read_text().splitlines()
    dashes = [i for i, line in enumerate(text) if line.strip().startswith("---")]
    if not dashes:
        raise XfoilProtocolError("polar file has no header separator")
    row = None
    for line in text[dashes[-1] + 1:]:
        if not line.strip():
            continue
        vals = _floats(line)
        if vals is None or len(vals) < 3:
            raise XfoilProtocolError("unparsable polar row", line)
        row = vals
    if row is None:
        raise XfoilProtocolError("polar file has no data rows (solution not accumulated)")
    return row[0], row[1], row[2]


def _surface_coordinate(x, y):
    """Monotone coordinate along the loop for resampling.

    Normalized arc length when y is known; otherwise ``1 - x`` on the upper
    branch and ``1 + x`` on the lower one (split at minimum x).
    """
    if y is not None:
        s = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(x), np.diff(y)))])
        return s / s[-1]
    ile = int(np.argmin(x))
    s = np.where(np.arange(len(x)) <= ile, 1.0 - x, 1.0 + x)
    return np.maximum.accumulate(s) / 2.0


def resample_cp(x, y, cp, profile: AirfoilProfile) -> np.ndarray:
    """Linearly interpolate XFOIL node Cp onto the profile's panel midpoints."""
    s_src = _surface_coordinate(np.asarray(x), None if y is None else np.asarray(y))
    s_nodes = _surface_coordinate(profile.x, None if y is None else profile.y)
    s_mid = 0.5 * (s_nodes[:-1] + s_nodes[1:])
    return np.interp(s_mid, s_src, cp)


def xfoil_solve(profile: AirfoilProfile, settings: XfoilSettings):
    """Run XFOIL once and return ``(CpDistribution, AeroMeasures)``.

    A fresh temporary working directory is used unless ``settings.workdir``
    is given. Temporary files are removed on success.
    """
    exe = settings.executable_path
    resolved = shutil.which(exe) or (exe if Path(exe).is_file() else None)
    if resolved is None:
        raise XfoilSpawnError(f"XFOIL executable not found: {exe}")

    own_dir = settings.workdir is None
    workdir = Path(tempfile.mkdtemp(prefix="dqnfoil-xfoil-")) if own_dir else Path(settings.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    files = [workdir / f for f in (COORD_FILE, CP_FILE, POLAR_FILE)]
    for f in files[1:]:
        f.unlink(missing_ok=True)
    write_coordinates(profile, files[0])

    try:
        proc = subprocess.run([resolved], input=build_script(settings), cwd=workdir,
                              capture_output=True, text=True, timeout=settings.timeout)
    except subprocess.TimeoutExpired as exc:
        raise XfoilTimeout(f"XFOIL exceeded {settings.timeout:g} s") from exc
    except OSError as exc:
        raise XfoilSpawnError(f"cannot start XFOIL at {resolved}: {exc}") from exc

    if NONCONVERGED in proc.stdout.lower():
        raise XfoilConvergenceError(f"XFOIL did not converge at alpha={settings.alpha:g}")
    for f in files[1:]:
        if not f.exists():
            raise XfoilProtocolError(f"XFOIL produced no {f.name} (exit code {proc.returncode})")

    x, y, cp_nodes = parse_cp_file(files[1])
    _, cl, cd = parse_polar(files[2])
    cp = CpDistribution(resample_cp(x, y, cp_nodes, profile), settings.alpha, "xfoil")
    m = compute_measures(cp, profile, cl=cl, cd=cd)

    if not settings.keep_files:
        if own_dir:
            shutil.rmtree(workdir, ignore_errors=True)
        else:
            for f in files:
                f.unlink(missing_ok=True)
    return cp, AeroMeasures(m.lift_measure, m.drag_measure, cl, cd)
