import io
import math
import re
import subprocess
import sys

import pytest

from smocking import closedform as cf
from smocking.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_dist():
    code, out = call("dist", "--x1", "0.6", "--y1", "0", "--x2", "2.4", "--y2", "0")
    assert code == 0 and out.strip() == "1.8"


def test_dist_far_uses_infinite_pattern():
    code, out = call("dist", "--x1", "0", "--y1", "0", "--x2", "300", "--y2", "100")
    assert code == 0
    assert abs(float(out) - cf.norm_F((300, 100))) <= cf.SANDWICH_GAP + 3


def test_stitch_dist_matches_closed_form():
    code, out = call("stitch-dist", "--j", "3", "0", "--k", "6", "3")
    assert code == 0
    assert abs(float(out) - cf.stitch_distance_closed_form((3, 0), (6, 3))) <= 1e-9
    code, out2 = call("stitch-dist", "--j", "3", "0", "--k", "6", "3", "--closed-form")
    assert code == 0 and abs(float(out2) - float(out)) <= 1e-9


def test_stitch_dist_bad_index():
    code, _ = call("stitch-dist", "--j", "1", "0", "--k", "6", "3")
    assert code == 2


def test_geodesic_lists_parts():
    code, out = call("geodesic", "--j", "0", "0", "--k", "6", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == f"length {2 + 2 * math.sqrt(2):.12g}"
    assert lines[1] == "hops 3"
    assert sorted(re.search(r"part=(\S+)", l).group(1) for l in lines[2:]) == sorted("→↗↗")


def test_geodesic_needs_endpoints():
    code, _ = call("geodesic", "--x1", "0")
    assert code == 2


@pytest.mark.slow
def test_verify_all_window_15():
    code, out = call("verify", "--suite", "all", "--window", "15")
    assert code == 0, out
    assert out.count("PASS") == 9


def test_verify_csv_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["verify", "--suite", "deviation", "--samples", "200", "--seed", "5"]
    assert call(*args, "-o", str(a))[0] == 0
    assert call(*args, "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0].startswith("suite,samples,max_abs_error")


def test_converge_stdout_deterministic():
    args = ["converge", "--scales", "1,8,64", "--samples", "50", "--seed", "3"]
    c1, o1 = call(*args)
    c2, o2 = call(*args)
    assert c1 == c2 == 0 and o1 == o2
    assert o1.splitlines()[0] == "R,sup_deviation,bound_K_over_R,samples,seed"
    assert len(o1.splitlines()) == 4


def test_converge_bad_scales():
    assert call("converge", "--scales", "1,x")[0] == 2
    assert call("converge", "--scales", "-1")[0] == 2


def test_sphere():
    code, out = call("sphere", "--points", "8")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "x,y" and rows[1] == "1.5,0"


def test_render_counts(tmp_path):
    f = tmp_path / "p.svg"
    code, _ = call("render", "--window", "4", "--stitch-geodesic", "0", "0", "3", "3", "-o", str(f))
    assert code == 0
    svg = f.read_text()
    assert svg.count("<line ") == 13
    assert svg.count("<polyline ") == 2


def test_render_awesome():
    code, out = call("render", "--window", "9", "--awesome", "6", "3", "--awesome", "0", "3")
    assert code == 0
    assert out.count("<polyline ") == 5
    assert out.startswith("<svg")


def test_pattern_file(tmp_path):
    f = tmp_path / "pat.txt"
    f.write_text("H 0 0\nH 3 0\nV 1.5 1.5\n")
    code, out = call("stitch-dist", "--pattern", str(f), "--j", "0", "0", "--k", "3", "0")
    assert code == 0 and float(out) == pytest.approx(2.0)


def test_pattern_file_errors(tmp_path):
    assert call("dist", "--pattern", str(tmp_path / "missing"), "--x1", "0", "--y1", "0",
                "--x2", "1", "--y2", "1")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("H 0 0\nH 0 0\n")
    assert call("dist", "--pattern", str(bad), "--x1", "0", "--y1", "0", "--x2", "1", "--y2", "1")[0] == 2


def test_window_too_small():
    assert call("dist", "--window", "3", "--x1", "0", "--y1", "0", "--x2", "9", "--y2", "0")[0] == 2


@pytest.mark.parametrize("argv", [["bogus"], ["dist", "--x1", "abc", "--y1", "0", "--x2", "1", "--y2", "1"],
                                  ["dist", "--tolerance", "0", "--x1", "0", "--y1", "0", "--x2", "1", "--y2", "1"]])
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "smocking", "dist", "--x1", "0", "--y1", "2",
                        "--x2", "0", "--y2", "-2"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "4"
