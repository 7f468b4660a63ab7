# This file is part of nlcm
# See file LICENSE.txt for license information.

# Exercises the command line front end through nlcm.cli.main, the way the
# console script calls it.

import csv
import io
import xml.etree.ElementTree as ET

import numpy as np

from nlcm.cli import (main, EXIT_OK, EXIT_FAILED, EXIT_ERROR, EXIT_USAGE,
                      CSV_HEADER, FIGURE_CENTERS)

SVG = "{http://www.w3.org/2000/svg}"

def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err

def test_integrate(capsys):
    status, out, err = run(capsys, "integrate", "--q", "0,1", "--v", "1,0",
                           "--h", "1e-3", "--t1", "5")
    assert status == EXIT_OK
    assert "\r" not in out
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 1 + 5001
    data = np.array([[float(x) for x in row] for row in rows[1:]])
    assert data[0].tolist() == [0, 0, 1, 1, 0, 0.5, 1]
    assert np.max(np.abs(data[:, 5] - 0.5)) <= 1e-8
    assert data[-1, 0] == 5
    assert np.allclose(data[-1, 1:3], [np.tanh(5), 1 / np.cosh(5)],
                       rtol=0, atol=1e-8)
    # E and p recomputed from the printed columns agree to the last digit
    for t, q1, q2, v1, v2, E, p in data[::97]:
        assert E == (v1 ** 2 + v2 ** 2) / (2 * q2 ** 2)
        assert p == v1 / q2 ** 2

def test_integrate_rest(capsys):
    status, out, err = run(capsys, "integrate", "--q", "0,1", "--v", "0,0",
                           "--h", "0.1", "--t1", "1")
    assert status == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert len(rows) == 11
    assert all(row[1:] == ["0", "1", "0", "0", "0", "0"] for row in rows)

def test_integrate_outside_half_plane(capsys):
    status, out, err = run(capsys, "integrate", "--q", "0,-1", "--v", "1,0")
    assert status == EXIT_ERROR
    assert out == ""
    assert "q2 > 0" in err

def test_integrate_is_deterministic(capsys):
    argv = ["integrate", "--q", "1,2", "--v", "0.3,-0.4", "--h", "0.01"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second

def test_usage_errors(capsys, tmpdir):
    out_path = str(tmpdir.join("out.svg"))
    for argv in [[],
                 ["frobnicate"],
                 ["integrate", "--q", "1"],
                 ["integrate", "--q", "a,b"],
                 ["integrate", "--v", "1,nan"],
                 ["integrate", "--bogus"],
                 ["integrate", "--h", "0"],
                 ["verify", "--t0", "5", "--t1", "5"],
                 ["integrate", "--h", "1", "--t1", "1"],
                 ["verify", "--h", "0.7", "--t1", "1"],
                 ["integrate", "--h", "inf"],
                 ["integrate", "--h", "nan"],
                 ["geodesic", "--t1", "inf"],
                 ["plot", "--out", out_path, "--spec", "0,1,1,0",
                  "--h", "1", "--t1", "1"],
                 ["plot"],
                 ["plot", "--out", out_path],
                 ["plot", "--out", out_path, "--spec", "0,1,1"],
                 ["plot", "--out", out_path, "--figure", "--samples", "10"]]:
        status, out, err = run(capsys, *argv)
        assert status == EXIT_USAGE, argv
        assert "error" in err
    assert not tmpdir.join("out.svg").check()

def test_verify(capsys):
    status, out, err = run(capsys, "verify")
    assert status == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "E=0.5 p=1 h=0.001 steps=5000"
    assert lines[-1] == "all 7 checks passed"
    assert "FAILED" not in out
    for name in ["energy E", "momentum p", "q1-translation",
                 "q2-translation", "trigonometric",
                 "q2-translation closed form", "linear ODE"]:
        assert name in out

def test_verify_coarse_step_fails(capsys):
    status, out, err = run(capsys, "verify", "--h", "0.1")
    assert status == EXIT_FAILED
    failed = [line for line in out.splitlines() if line.endswith("FAILED")]
    assert any(line.startswith("linear ODE") for line in failed)
    assert "checks FAILED" in out.splitlines()[-1]

def test_verify_rest(capsys):
    status, out, err = run(capsys, "verify", "--q", "7,3", "--v", "0,0",
                           "--h", "0.1", "--t1", "1")
    assert status == EXIT_OK
    assert out.startswith("E=0 p=0 ")
    assert "0.000e+00 <= 1e-05 ok" in out

def test_geodesic(capsys):
    status, out, err = run(capsys, "geodesic", "--q", "0,1", "--v", "1,0")
    assert status == EXIT_OK
    assert out == ("E=0.5 p=1 c1=0.5 c2=0.5 c3=1\n"
                   "half-circle center=0 radius=1\n")
    status, out, err = run(capsys, "geodesic", "--q", "0,1", "--v", "0,1")
    assert status == EXIT_OK
    assert out.splitlines()[-1] == "vertical-line x=0"
    status, out, err = run(capsys, "geodesic", "--q", "7,3", "--v", "0,0")
    assert status == EXIT_OK
    assert out.splitlines()[-1] == "point (7,3)"
    status, out, err = run(capsys, "geodesic", "--q=-1,2", "--v", "0,0")
    assert out.splitlines()[-1] == "point (-1,2)"
    status, out, err = run(capsys, "geodesic", "--q", "0,0")
    assert status == EXIT_ERROR

def test_geodesic_nearly_vertical(capsys):
    for v, sign in [("1e-170,1", 1), ("1e-170,-1", -1), ("1e-160,1", 1)]:
        status, out, err = run(capsys, "geodesic", "--q", "0,1", "--v", v)
        assert status == EXIT_OK, v
        kind, center, radius = out.splitlines()[-1].split()
        assert kind == "half-circle"
        center = float(center[len("center="):])
        radius = float(radius[len("radius="):])
        assert np.isfinite(center) and np.isfinite(radius)
        assert np.sign(center) == sign
        # the circle passes through the initial point (0, 1)
        assert abs(np.hypot(center, 1) - radius) <= 1e-12 * radius

def polylines(path):
    root = ET.parse(str(path)).getroot()
    assert root.tag == SVG + "svg"
    return root.findall(SVG + "polyline")

def points_of(polyline):
    pairs = [pair.split(",") for pair in polyline.get("points").split()]
    # q2 is stored negated
    return np.array([[float(x), -float(y)] for x, y in pairs])

def test_plot_half_circle(capsys, tmpdir):
    path = tmpdir.join("circle.svg")
    status, out, err = run(capsys, "plot", "--out", str(path),
                           "--spec", "0,1,1,0", "--t0=-3", "--t1", "3")
    assert status == EXIT_OK
    (line,) = polylines(path)
    xy = points_of(line)
    assert len(xy) == 400
    assert np.all(xy[:, 1] > 0)
    assert np.max(np.abs(xy[:, 0] ** 2 + xy[:, 1] ** 2 - 1)) <= 1e-3

def test_plot_figure(capsys, tmpdir):
    path = tmpdir.join("figure.svg")
    status, out, err = run(capsys, "plot", "--out", str(path), "--figure",
                           "--samples", "200")
    assert status == EXIT_OK
    lines = polylines(path)
    assert len(lines) == len(FIGURE_CENTERS) + 2
    widths = [float(line.get("stroke-width")) for line in lines]
    assert widths[0] > max(widths[1:])
    strokes = set((line.get("stroke"), line.get("stroke-dasharray"))
                  for line in lines)
    assert len(strokes) == len(lines)
    reference = points_of(lines[0])
    assert len(reference) == 200
    assert np.max(np.abs(reference[:, 0] ** 2 + reference[:, 1] ** 2 - 1)
                  ) <= 1e-3
    # every other geodesic passes (close to) P = (3, 1) and stays off the
    # reference half-circle
    for line in lines[1:]:
        xy = points_of(line)
        assert np.min(np.hypot(xy[:, 0] - 3, xy[:, 1] - 1)) <= 0.05
        assert np.min(np.abs(np.hypot(xy[:, 0], xy[:, 1]) - 1)) > 0.05

def test_plot_is_deterministic(capsys, tmpdir):
    paths = [tmpdir.join("a.svg"), tmpdir.join("b.svg")]
    for path in paths:
        status, out, err = run(capsys, "plot", "--out", str(path), "--figure",
                               "--spec", "1,2,0.3,-0.4", "--spec", "2,1,0,1")
        assert status == EXIT_OK
    assert paths[0].read_binary() == paths[1].read_binary()
    assert len(polylines(paths[0])) == len(FIGURE_CENTERS) + 4

def test_plot_unwritable(capsys, tmpdir):
    path = tmpdir.join("no such directory", "out.svg")
    status, out, err = run(capsys, "plot", "--out", str(path),
                           "--spec", "0,1,1,0")
    assert status == EXIT_ERROR
    assert "error" in err

def test_main_module_does_not_run_on_import():
    import nlcm.__main__
