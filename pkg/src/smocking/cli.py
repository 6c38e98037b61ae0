"""Command-line interface.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import analysis, closedform as cf
from .geom import Point2
from .metric import CheckeredMetric, WindowError, geodesic, pseudometric, required_window
from .pattern import Pattern, PatternError, StitchIndex, checkered_pattern, load_pattern
from .render import render_svg

SUITES = ("formula", "awesome", "sandwich", "norm", "dilation", "lemmas", "monotone",
          "deviation", "metric")
GRAPH_LIMIT = 60.0


def fmt(v: float) -> str:
    return f"{v:.12g}"


class InputError(Exception):
    pass


def _pattern(args, need: float = 0.0) -> Pattern | None:
    """The pattern named on the command line; None means the infinite pattern H."""
    if args.pattern != "checkered":
        try:
            return load_pattern(args.pattern)
        except OSError as e:
            raise InputError(f"cannot read pattern file: {e}") from None
    radius = args.window if args.window is not None else need
    if args.window is None and radius > GRAPH_LIMIT:
        return None
    return checkered_pattern(radius)


def _index(pair) -> StitchIndex:
    try:
        return StitchIndex.checkered(*pair)
    except PatternError as e:
        raise InputError(str(e)) from None


def cmd_dist(args, out):
    x, y = Point2(args.x1, args.y1), Point2(args.x2, args.y2)
    pattern = _pattern(args, required_window(x, y))
    d = CheckeredMetric().distance(x, y) if pattern is None else pseudometric(pattern, x, y)
    print(fmt(d), file=out)
    return 0


def cmd_stitch_dist(args, out):
    j, k = _index(args.j), _index(args.k)
    if args.closed_form:
        print(fmt(cf.stitch_distance_closed_form(j, k)), file=out)
        return 0
    pattern = _pattern(args, required_window(Point2(*j.key), Point2(*k.key)))
    if pattern is None:
        d = CheckeredMetric().stitch_distance(j, k)
    else:
        d = pseudometric(pattern, pattern.stitch(j).index, pattern.stitch(k).index)
    print(fmt(d), file=out)
    return 0


def _geodesic(args):
    if args.j is not None:
        if args.k is None:
            raise InputError("--j needs --k")
        a, b = _index(args.j), _index(args.k)
        pa, pb = Point2(*a.key), Point2(*b.key)
    else:
        if None in (args.x1, args.y1, args.x2, args.y2):
            raise InputError("give --x1 --y1 --x2 --y2 or --j/--k")
        pa, pb = Point2(args.x1, args.y1), Point2(args.x2, args.y2)
        a, b = pa, pb
    pattern = _pattern(args, required_window(pa, pb))
    if pattern is None:
        raise InputError(f"geodesic extraction needs --window (required radius "
                         f"{required_window(pa, pb):g} exceeds {GRAPH_LIMIT:g})")
    if isinstance(a, StitchIndex):
        a, b = pattern.stitch(a).index, pattern.stitch(b).index
    return pattern, geodesic(pattern, a, b)


def cmd_geodesic(args, out):
    pattern, g = _geodesic(args)
    print(f"length {fmt(g.distance)}", file=out)
    print(f"hops {g.path.combinatorial_length}", file=out)
    for i, s in enumerate(g.path.segments):
        part = cf.classify_network_part(s, pattern)
        kind = part.kind.value if part else "-"
        print(f"{i} ({fmt(s.start.x)},{fmt(s.start.y)}) -> ({fmt(s.end.x)},{fmt(s.end.y)}) "
              f"len={fmt(s.length)} part={kind}", file=out)
    return 0


def _run_suite(name, args):
    w = args.window if args.window is not None else 15.0
    n = args.samples
    if name == "formula":
        return analysis.verify_formula(w)
    if name == "awesome":
        return analysis.verify_awesome(w)
    if name == "sandwich":
        return analysis.verify_sandwich(w)
    if name == "norm":
        return analysis.verify_norm_axioms(n, args.seed)
    if name == "dilation":
        return analysis.verify_dilation(n, args.seed)
    if name == "lemmas":
        return analysis.verify_lemma_inequalities(n, args.seed)
    if name == "monotone":
        return analysis.verify_monotone_geodesics(w)
    if name == "deviation":
        return analysis.deviation_sup(args.ball, n, args.seed)
    if name == "metric":
        return analysis.verify_metric_axioms(n, args.ball / 2, args.seed)
    raise InputError(f"unknown suite {name}")


def cmd_verify(args, out):
    names = SUITES if args.suite == "all" else (args.suite,)
    if args.pattern != "checkered":
        raise InputError("verification suites run on the checkered pattern only")
    reports = []
    for name in names:
        r = _run_suite(name, args)
        reports.append(r)
        print(r.summary(), file=out)
        if name == "monotone" and r.extras["non_monotone"]:
            print(f"  non-monotone geodesics: {r.extras['non_monotone']}", file=out)
    _write(args, analysis.reports_csv(reports))
    return 0 if all(r.passed for r in reports) else 1


def _scales(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"malformed --scales {text!r}") from None
    if not vals or any(not math.isfinite(v) or v <= 0 for v in vals):
        raise InputError("--scales must be positive numbers")
    return vals


def cmd_converge(args, out):
    points = analysis.convergence_curve(_scales(args.scales), args.ball, args.samples, args.seed)
    text = analysis.convergence_csv(points)
    if args.output:
        _write(args, text)
        for p in points:
            print(f"R={fmt(p.scale)} sup={fmt(p.sup_deviation)} K/R={fmt(p.bound)}", file=out)
    else:
        out.write(text)
    return 0 if all(p.within_bound for p in points) else 1


def cmd_sphere(args, out):
    pts = analysis.trace_unit_sphere(args.points)
    lines = ["x,y"] + [f"{fmt(x)},{fmt(y)}" for x, y in pts]
    text = "\n".join(lines) + "\n"
    if args.output:
        _write(args, text)
    else:
        out.write(text)
    dev = float(analysis.octagon_distance(pts).max())
    print(f"max distance to octagon {dev:.3g}", file=sys.stderr)
    return 0 if dev <= analysis.SPHERE_TOL else 1


def cmd_render(args, out):
    paths = []
    if args.geodesic or args.stitch_geodesic:
        if args.geodesic:
            args.x1, args.y1, args.x2, args.y2 = args.geodesic
            args.j = args.k = None
        else:
            args.j, args.k = args.stitch_geodesic[:2], args.stitch_geodesic[2:]
        # --window sets the drawn area; the search uses the window the query needs
        drawn, args.window = args.window, None
        _, g = _geodesic(args)
        args.window = drawn
        paths.append(g.path)
    for a in args.awesome or ():
        paths.append(cf.awesome_path((0, 0), _index(a)))
    radius = args.window if args.window is not None else 9.0
    pattern = checkered_pattern(radius) if args.pattern == "checkered" else load_pattern(args.pattern)
    svg = render_svg(pattern, paths)
    if args.output:
        _write(args, svg)
    else:
        out.write(svg)
    return 0


def _write(args, text: str):
    if not args.output:
        return
    try:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise InputError(f"cannot write {args.output}: {e}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smocking", description="Smocked metric spaces and the checkered pattern H.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pattern", default="checkered",
                        help='"checkered" (default) or a pattern file path')
    common.add_argument("--window", type=float, default=None, help="index window radius")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", "-o", default=None, help="output file (CSV or SVG)")
    common.add_argument("--tolerance", type=float, default=1e-9)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dist", parents=[common], help="pseudodistance between two points")
    for name in ("--x1", "--y1", "--x2", "--y2"):
        s.add_argument(name, type=float, required=True)
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("stitch-dist", parents=[common], help="distance between two stitches")
    s.add_argument("--j", type=float, nargs=2, required=True, metavar=("J1", "J2"))
    s.add_argument("--k", type=float, nargs=2, required=True, metavar=("K1", "K2"))
    s.add_argument("--closed-form", action="store_true", help="print the formula value instead")
    s.set_defaults(func=cmd_stitch_dist)

    s = sub.add_parser("geodesic", parents=[common], help="geodesic hops and network parts")
    for name in ("--x1", "--y1", "--x2", "--y2"):
        s.add_argument(name, type=float)
    s.add_argument("--j", type=float, nargs=2, metavar=("J1", "J2"))
    s.add_argument("--k", type=float, nargs=2, metavar=("K1", "K2"))
    s.set_defaults(func=cmd_geodesic)

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--ball", type=float, default=100.0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("converge", parents=[common], help="rescaled deviation curve")
    s.add_argument("--scales", default="1,2,4,8,16,32,64,128,256")
    s.add_argument("--ball", type=float, default=5.0)
    s.add_argument("--samples", type=int, default=1000)
    s.set_defaults(func=cmd_converge)

    s = sub.add_parser("sphere", parents=[common], help="trace the unit sphere of F")
    s.add_argument("--points", type=int, default=64)
    s.set_defaults(func=cmd_sphere)

    s = sub.add_parser("render", parents=[common], help="SVG of the pattern and paths")
    s.add_argument("--geodesic", type=float, nargs=4, metavar=("X1", "Y1", "X2", "Y2"))
    s.add_argument("--stitch-geodesic", type=float, nargs=4, metavar=("J1", "J2", "K1", "K2"))
    s.add_argument("--awesome", type=float, nargs=2, action="append", metavar=("J1", "J2"),
                   help="add the awesome path from I_0 (repeatable)")
    s.set_defaults(func=cmd_render)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.tolerance <= 0 or (args.window is not None and args.window < 0):
        print("smocking: --tolerance must be > 0 and --window >= 0", file=sys.stderr)
        return 2
    try:
        return args.func(args, out)
    except (InputError, PatternError, WindowError, ValueError) as e:
        print(f"smocking: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
