"""Command-line interface.

Subcommands: ``generate`` (periodic / spiral / lattice), ``classify``,
``verify``, ``walk``, ``render``.  Exit code 0 when every requested check
passes, 1 when violations were found, 2 on usage or input errors.
Diagnostics go to stderr; results go to stdout as key=value lines.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import TilingError
from .generators import (
    LEFT_B_FIRST,
    RIGHT_B_FIRST,
    PeriodicSpec,
    SpiralSpec,
    klaassen_spiral,
    periodic_three_size,
    uniform_lattice,
)
from .geometry import ExactScalar
from .model import Window
from .structure import check_lemma7, check_lemma8, check_lemma9, check_lemma10, classify
from .svgrender import RenderStyle, render_svg
from .tilingio import load, save
from .verify import conclusions, detect_periods, hypotheses
from .walk import extract_graph, simulate

ALL_CHECKS = ("hypotheses", "lemma7", "lemma8", "lemma9", "lemma10",
              "conclusions", "periods")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _window(text: str) -> Window:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window must be X0:X1:Y0:Y1")
    vals = [ExactScalar(_rational(p)) for p in parts]
    try:
        return Window(vals[0], vals[1], vals[2], vals[3])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tritiling")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="construct a tiling and save it")
    gsub = gen.add_subparsers(dest="kind", required=True)

    gp = gsub.add_parser("periodic", help="periodic three-size tiling")
    gp.add_argument("--b", type=_rational, required=True)
    gp.add_argument("--c", type=_rational, required=True)
    gp.add_argument("--window", type=_window, required=True)
    gp.add_argument("--chirality", choices=("left", "right"), default="left")
    gp.add_argument("-o", "--output", required=True)
    gp.set_defaults(func=_cmd_generate_periodic)

    gs = gsub.add_parser("spiral", help="similarity spiral tiling")
    gs.add_argument("--px", type=float, required=True)
    gs.add_argument("--py", type=float, required=True)
    gs.add_argument("--ax", type=float, required=True)
    gs.add_argument("--ay", type=float, required=True)
    gs.add_argument("--imin", type=int, required=True)
    gs.add_argument("--imax", type=int, required=True)
    gs.add_argument("-o", "--output", required=True)
    gs.set_defaults(func=_cmd_generate_spiral)

    gl = gsub.add_parser("lattice", help="edge-to-edge lattice (negative control)")
    gl.add_argument("--s", type=_rational, required=True)
    gl.add_argument("--window", type=_window, required=True)
    gl.add_argument("-o", "--output", required=True)
    gl.set_defaults(func=_cmd_generate_lattice)

    cl = sub.add_parser("classify", help="classify every triangle")
    cl.add_argument("file")
    cl.add_argument("--json", action="store_true")
    cl.set_defaults(func=_cmd_classify)

    ve = sub.add_parser("verify", help="run verification checks")
    ve.add_argument("file")
    ve.add_argument("--delta", type=_rational, required=True,
                    help="positive lower bound the side lengths must meet")
    ve.add_argument("--checks", default=",".join(ALL_CHECKS))
    ve.set_defaults(func=_cmd_verify)

    wa = sub.add_parser("walk", help="simulate the large-triangle walk")
    wa.add_argument("file")
    wa.add_argument("--steps", type=int, required=True)
    wa.add_argument("--trials", type=int, required=True)
    wa.add_argument("--seed", type=int, required=True)
    wa.add_argument("--csv")
    wa.set_defaults(func=_cmd_walk)

    re = sub.add_parser("render", help="render a patch to SVG")
    re.add_argument("file")
    re.add_argument("-o", "--output", required=True)
    re.add_argument("--labels", action="store_true")
    re.set_defaults(func=_cmd_render)

    return p


def _cmd_generate_periodic(args) -> int:
    chir = LEFT_B_FIRST if args.chirality == "left" else RIGHT_B_FIRST
    patch = periodic_three_size(PeriodicSpec(args.b, args.c, chir), args.window)
    save(patch, args.output)
    print(f"triangles={len(patch.triangles)}")
    return 0


def _cmd_generate_spiral(args) -> int:
    spec = SpiralSpec(p=(args.px, args.py), a=(args.ax, args.ay),
                      i_min=args.imin, i_max=args.imax)
    patch = klaassen_spiral(spec)
    save(patch, args.output)
    print(f"triangles={len(patch.triangles)}")
    return 0


def _cmd_generate_lattice(args) -> int:
    patch = uniform_lattice(args.s, args.window)
    save(patch, args.output)
    print(f"triangles={len(patch.triangles)}")
    return 0


def _cmd_classify(args) -> int:
    patch = load(args.file)
    classes = [classify(patch, i) for i in range(len(patch.triangles))]
    if args.json:
        payload = {
            "triangles": len(patch.triangles),
            "counts": _class_counts(classes),
            "classes": [c.value for c in classes],
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        for name, count in sorted(_class_counts(classes).items()):
            print(f"count.{name}={count}")
    return 0


def _class_counts(classes) -> dict[str, int]:
    out: dict[str, int] = {}
    for c in classes:
        out[c.value] = out.get(c.value, 0) + 1
    return out


def _cmd_verify(args) -> int:
    patch = load(args.file)
    requested = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = [c for c in requested if c not in ALL_CHECKS]
    if unknown:
        print(f"error: unknown checks: {', '.join(unknown)}", file=sys.stderr)
        return 2
    ok = True
    for check in requested:
        if check == "hypotheses":
            rep = hypotheses(patch, args.delta)
            for line in rep.lines():
                print(line)
            ok &= rep.passed
        elif check in ("lemma7", "lemma8", "lemma9"):
            fn = {"lemma7": check_lemma7, "lemma8": check_lemma8,
                  "lemma9": check_lemma9}[check]
            violations = fn(patch)
            print(f"{check}={'pass' if not violations else 'FAIL'} "
                  f"({len(violations)} violations)")
            for v in violations[:10]:
                print(f"  {v}")
            ok &= not violations
        elif check == "lemma10":
            res = check_lemma10(patch)
            print(f"lemma10={'pass' if res.ok else 'FAIL'} "
                  f"({len(res.violations)} deviations, "
                  f"{len(res.skipped)} skipped for missing neighbors)")
            for t, dev in res.violations[:10]:
                print(f"  triangle {t}: deviation {dev.to_float():.12g}")
            ok &= res.ok
        elif check == "conclusions":
            rep = conclusions(patch)
            for line in rep.lines():
                print(line)
            ok &= rep.passed
        elif check == "periods":
            periods = detect_periods(patch)
            print(f"periods={'pass' if len(periods) == 2 else 'FAIL'} "
                  f"({len(periods)} independent translations)")
            for v in periods:
                print(f"  ({v[0].to_float():.12g}, {v[1].to_float():.12g})")
            ok &= len(periods) == 2
    return 0 if ok else 1


def _cmd_walk(args) -> int:
    patch = load(args.file)
    graph = extract_graph(patch)
    step_set = graph.step_set()
    stats = simulate(step_set, args.steps, args.trials, args.seed)
    for line in stats.key_values():
        print(line)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(stats.csv_text())
    return 0


def _cmd_render(args) -> int:
    patch = load(args.file)
    style = RenderStyle(labels=args.labels, show_subdivision=args.labels)
    render_svg(patch, args.output, style)
    return 0


def cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code else 0
    try:
        return args.func(args)
    except (TilingError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()
