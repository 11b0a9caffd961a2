import stat
import sys
import textwrap

import numpy as np
import pytest

from dqnfoil.geometry import AirfoilProfile, build_naca0012_polygon, cosine_parameters, sample_profile

ACCEPTANCE = []


def circle_profile(m, radius=0.5):
    """Circle through (0, 0) and (1, 0), counterclockwise from the right.

    Each quarter arc gets m/4 cosine-spaced panels, the same clustering the
    airfoil sampler uses.
    """
    t = cosine_parameters(m // 4)
    theta = np.concatenate([0.5 * np.pi * (q + t[:-1]) for q in range(4)] + [[2 * np.pi]])
    pts = np.column_stack([0.5 + radius * np.cos(theta), radius * np.sin(theta)])
    pts[-1] = pts[0]
    return AirfoilProfile(pts)


@pytest.fixture(scope="session")
def naca_profile():
    return sample_profile(build_naca0012_polygon(), 200)


FAKE_XFOIL = r'''
import os, sys, time
mode = os.environ.get("FAKE_XFOIL_MODE", "ok")
script = sys.stdin.read()
with open("stdin.log", "w") as fh:
    fh.write(script)
if mode == "sleep":
    time.sleep(30)
lines = script.splitlines()
coords = []
for ln in open(lines[0].split()[1]).read().splitlines()[1:]:
    coords.append([float(v) for v in ln.split()])
polar = lines[lines.index("PACC") + 1]
cpfile = [ln.split()[1] for ln in lines if ln.startswith("CPWR")][0]
alpha = float([ln.split()[1] for ln in lines if ln.startswith("ALFA")][0])
if mode == "noconv":
    print(" VISCAL:  Convergence failed")
    sys.exit(0)
with open(polar, "w") as fh:
    fh.write(" XFOIL         Version 6.99\n\n Calculated polar for: fake\n\n")
    fh.write("   alpha    CL        CD       CDp       CM     Top_Xtr  Bot_Xtr\n")
    fh.write("  ------ -------- --------- --------- -------- -------- --------\n")
    fh.write("   %.3f   0.0123   0.00541   0.00100  -0.0010   1.0000   1.0000\n" % alpha)
with open(cpfile, "w") as fh:
    if mode == "garbage":
        fh.write("#    x        y        Cp\n  0.1 0.2 0.3\n  not numbers here\n")
    else:
        fh.write("#    x        y        Cp  \n")
        # Cp linear in normalized arc length: exact under linear resampling
        import math
        s = [0.0]
        for (x0, y0), (x1, y1) in zip(coords[:-1], coords[1:]):
            s.append(s[-1] + math.hypot(x1 - x0, y1 - y0))
        for (x, y), si in zip(coords, s):
            fh.write("%10.7f %10.7f %10.7f\n" % (x, y, 1.0 - 2.0 * si / s[-1]))
'''


@pytest.fixture
def fake_xfoil(tmp_path):
    path = tmp_path / "bin" / "xfoil"
    path.parent.mkdir()
    path.write_text(f"#!{sys.executable}\n" + textwrap.dedent(FAKE_XFOIL))
    path.chmod(path.stat().st_mode | stat.S_IEXEC | stat.S_IXGRP | stat.S_IXOTH)
    return str(path)


def record(criterion, passed, detail=""):
    ACCEPTANCE.append((criterion, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        label = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        terminalreporter.write_line(f"{label}  {name}  {detail}")
