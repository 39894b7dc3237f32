"""Command-line front end.

One binary, subcommand dispatch.  Exit 0 when the requested check passes
(or the command is a pure computation), 1 when a verification fails, and
2 on input problems.  Output is deterministic byte-for-byte for fixed
inputs and flags; ``--stamp`` opts into a timestamp, ``--json`` switches
stdout to a machine-readable report.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import jsonio
from .axioms import check_cech_axioms
from .cycles import (
    auto_window,
    system_boundary_check,
    validate_cycle_system,
    validate_hcyc,
    validate_hpath,
)
from .descriptive import (
    check_descriptive_axioms,
    descriptive_closure,
    descriptive_intersection,
)
from .errors import (
    GluePreconditionError,
    InputError,
    ProxtopError,
    RasterizationError,
)
from .grid import PixelSet, jordan_partition, rasterize_cycle
from .homotopy import check_proximal_continuity, glue, verify_homotopy
from .nerve import (
    alexandrov_quadruple_check,
    betti,
    build_nerve,
    check_good_cover,
    free_group_presentation,
    nerve_vs_union_check,
)
from .persistence import report as track_table
from .persistence import track as run_tracker
from .spaces import FiniteProximitySpace, MetricGap
from .spaces import closure as plain_closure


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((_jsonable(v) for v in value), key=str)
    return value


def _emit(args, lines, payload) -> None:
    if args.json:
        data = _jsonable(payload)
        if args.stamp:
            data["generated"] = datetime.now(timezone.utc).isoformat()
        sys.stdout.write(jsonio.dump_json(data))
        return
    if args.stamp:
        print(f"generated: {datetime.now(timezone.utc).isoformat()}")
    for line in lines:
        print(line)


def _window_arg(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    try:
        w, h = (int(p) for p in parts)
        if w <= 0 or h <= 0:
            raise ValueError
        return w, h
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"window must look like 64x48, got {text!r}")


def _nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("value must be nonnegative")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("value must be nonnegative")
    return value


def _id_list(space, text, file):
    raw = [part.strip() for part in text.split(",") if part.strip()]
    return [jsonio.resolve_id(space, r, file, "--set") for r in raw]


def _with_tau(space: FiniteProximitySpace, tau) -> FiniteProximitySpace:
    if tau is None:
        return space
    return FiniteProximitySpace(space.points, MetricGap(tau))


def cmd_check_axioms(args) -> int:
    space = jsonio.parse_space(jsonio.load_document(args.file), args.file)
    space = _with_tau(space, args.tau)
    if args.descriptive:
        report = check_descriptive_axioms(space, epsilon=args.epsilon)
    else:
        report = check_cech_axioms(space)
    rows = [{
        "axiom": r.axiom,
        "passed": r.passed,
        "witness": _jsonable(r.witness),
        "method": r.method,
    } for r in report.results]
    lines = [r.describe() for r in report.results]
    lines.append(report.point_symmetry.describe())
    lines.append("all axioms hold" if report.all_passed
                 else "axiom failure detected")
    _emit(args, lines, {
        "axioms": rows,
        "point_symmetry": report.point_symmetry.passed,
        "all_passed": report.all_passed,
    })
    return 0 if report.all_passed else 1


def cmd_closure(args) -> int:
    space = jsonio.parse_space(jsonio.load_document(args.file), args.file)
    space = _with_tau(space, args.tau)
    ids = _id_list(space, args.set, args.file)
    if args.descriptive:
        out = descriptive_closure(space, ids, epsilon=args.epsilon)
    else:
        out = plain_closure(space, ids)
    members = sorted(out, key=str)
    _emit(args, [f"closure: {', '.join(map(str, members))}"], {
        "set": sorted(ids, key=str),
        "closure": members,
        "descriptive": args.descriptive,
    })
    return 0


def cmd_dintersect(args) -> int:
    space = jsonio.parse_space(jsonio.load_document(args.file), args.file)
    first = _id_list(space, args.first, args.file)
    second = _id_list(space, args.second, args.file)
    out = descriptive_intersection(
        space, first, second, epsilon=args.epsilon)
    members = sorted(out, key=str)
    lines = [f"descriptive intersection: {', '.join(map(str, members))}"
             if members else "descriptive intersection: empty",
             f"near: {'yes' if members else 'no'}"]
    _emit(args, lines, {
        "first": sorted(first, key=str),
        "second": sorted(second, key=str),
        "intersection": members,
        "near": bool(members),
    })
    return 0


def cmd_continuity(args) -> int:
    f = jsonio.parse_map(jsonio.load_document(args.file), args.file)
    report = check_proximal_continuity(f, mode=args.mode, epsilon=args.epsilon)
    lines = [f"continuous ({args.mode}): "
             f"{'yes' if report.continuous else 'no'}"]
    if report.witness:
        (a, b), (fa, fb) = report.witness
        lines.append(
            f"witness: {a}, {b} are near but images {fa}, {fb} are not")
    _emit(args, lines, {
        "continuous": report.continuous,
        "mode": report.mode,
        "witness": _jsonable(report.witness),
    })
    return 0 if report.continuous else 1


def cmd_glue(args) -> int:
    f, g, ambient = jsonio.parse_glue(
        jsonio.load_document(args.file), args.file)
    try:
        glued = glue(f, g, ambient, mode=args.mode, epsilon=args.epsilon)
    except GluePreconditionError as exc:
        _emit(args, [f"glue failed: {exc}"], {
            "glued": False,
            "condition": exc.condition,
            "detail": str(exc),
        })
        return 1
    assignment = {str(k): v for k, v in sorted(
        glued.mapping.items(), key=lambda kv: str(kv[0]))}
    lines = ["glued map:"] + [f"  {k} -> {v}" for k, v in assignment.items()]
    _emit(args, lines, {"glued": True, "assignment": assignment})
    return 0


def cmd_homotopy(args) -> int:
    witness, f, g = jsonio.parse_homotopy(
        jsonio.load_document(args.file), args.file)
    report = verify_homotopy(
        witness, f, g, mode=args.mode, epsilon=args.epsilon)
    lines = ([f"homotopy verified over {witness.k + 1} time steps"]
             if report.ok else
             [f"homotopy failed: {msg}" for msg in report.failures])
    _emit(args, lines, {
        "ok": report.ok,
        "steps": witness.k + 1,
        "failures": list(report.failures),
    })
    return 0 if report.ok else 1


def cmd_cycles(args) -> int:
    kind, space, structure = jsonio.parse_cycles(
        jsonio.load_document(args.file), args.file)
    payload: dict = {"kind": kind}
    if kind == "path":
        report = validate_hpath(space, structure)
        lines = ["path valid" if report.ok else "path invalid"]
        lines.extend(f"  {d}" for d in report.diagnostics)
        payload.update(ok=report.ok, diagnostics=list(report.diagnostics))
        if args.emit_svg:
            raise InputError(
                args.file, "--emit-svg", "open paths have no region overlay")
        _emit(args, lines, payload)
        return 0 if report.ok else 1
    if kind == "cycle":
        report = validate_hcyc(space, structure, window=args.window)
        lines = ["cycle valid" if report.ok else "cycle invalid"]
        lines.extend(f"  {d}" for d in report.diagnostics)
        if report.interior_size is not None:
            lines.append(f"interior pixels: {report.interior_size}")
        payload.update(ok=report.ok, diagnostics=list(report.diagnostics),
                       interior_size=report.interior_size)
        partition = report.partition
    else:
        report = validate_cycle_system(
            space, structure, window=args.window)
        lines = ["system valid" if report.ok else "system invalid"]
        lines.extend(f"  {d}" for d in report.diagnostics)
        payload.update(ok=report.ok, diagnostics=list(report.diagnostics),
                       clasp=report.clasp,
                       junctions=[str(j) for j in report.junctions])
        partition = None
        if report.ok:
            boundary = system_boundary_check(structure, window=args.window)
            partition = boundary.partition
            lines.append(
                f"regions: {len(boundary.partition.interior_regions)} "
                f"interior, {len(boundary.partition.exterior_regions)} "
                f"exterior; common boundary: "
                f"{'yes' if boundary.common_boundary else 'no'}")
            payload["boundary"] = {
                "interior_regions": len(boundary.partition.interior_regions),
                "exterior_regions": len(boundary.partition.exterior_regions),
                "common_boundary": boundary.common_boundary,
                "junction_pixels": sorted(
                    list(p) for p in boundary.junction_pixels),
                "passed": boundary.passed,
            }
    if args.emit_svg:
        if partition is None:
            raise InputError(
                args.file, "--emit-svg",
                "no region overlay for an invalid structure")
        from .render import render_regions
        render_regions(partition, args.emit_svg)
        lines.append(f"wrote {args.emit_svg}")
    _emit(args, lines, payload)
    return 0 if report.ok else 1


def cmd_nerve(args) -> int:
    parsed = jsonio.parse_cover(jsonio.load_document(args.file), args.file)
    if parsed[0] == "rects":
        if args.descriptive:
            raise InputError(
                args.file, "--descriptive",
                "rectangle covers support plain mode only")
        _, rects, window = parsed
        report = nerve_vs_union_check(rects, window)
        lines = [
            f"nerve betti: {report.nerve_betti}",
            f"union betti: {report.union_betti}",
            f"match: {'yes' if report.match else 'no'}",
        ]
        _emit(args, lines, {
            "simplices": [list(s) for s in report.nerve.simplices],
            "nerve_betti": list(report.nerve_betti),
            "union_betti": list(report.union_betti),
            "match": report.match,
        })
        return 0 if report.match else 1
    cover = parsed[1]
    mode = "descriptive" if args.descriptive else "plain"
    nerve = build_nerve(cover, mode=mode, epsilon=args.epsilon)
    b = betti(nerve)
    pres = free_group_presentation(nerve.vertices, nerve.edges)
    lines = [
        f"simplices: {' '.join('-'.join(map(str, s)) for s in nerve.simplices)}",
        f"betti: {b}",
        f"skeleton free-group rank: {pres.rank}",
    ]
    _emit(args, lines, {
        "mode": mode,
        "simplices": [list(s) for s in nerve.simplices],
        "betti": list(b),
        "skeleton_rank": pres.rank,
    })
    return 0


def cmd_betti(args) -> int:
    cx = jsonio.parse_complex(jsonio.load_document(args.file), args.file)
    b = betti(cx)
    pres = free_group_presentation(cx.vertices, cx.edges)
    lines = [f"betti: {b}", f"skeleton free-group rank: {pres.rank}"]
    _emit(args, lines, {
        "betti": list(b),
        "skeleton_rank": pres.rank,
        "generators": [[list(e) for e in gen] for gen in pres.generators],
    })
    return 0


def cmd_goodcover(args) -> int:
    parsed = jsonio.parse_cover(jsonio.load_document(args.file), args.file)
    if parsed[0] != "ids":
        raise InputError(
            args.file, "elements", "good-cover checks need an id cover")
    report = check_good_cover(
        parsed[1], mode=args.mode, epsilon=args.epsilon)
    lines = []
    for item in report.intersections:
        which = " & ".join(str(i) for i in item.indices)
        verdict = "contractible" if item.contractible else "NOT contractible"
        lines.append(f"elements {which}: {verdict} ({item.reason})")
    lines.append(f"good cover ({report.mode}): "
                 f"{'yes' if report.ok else 'no'}")
    _emit(args, lines, {
        "mode": report.mode,
        "ok": report.ok,
        "intersections": [{
            "elements": list(item.indices),
            "ids": sorted(map(str, item.ids)),
            "contractible": item.contractible,
            "reason": item.reason,
        } for item in report.intersections],
    })
    return 0 if report.ok else 1


def _load_curve(args) -> PixelSet:
    path = Path(args.file)
    if path.suffix.lower() in (".pbm", ".pgm"):
        pixels = jsonio.load_pixels(path)
        if args.window:
            pixels = PixelSet(pixels.pixels, args.window)
        return pixels
    doc = jsonio.load_document(args.file)
    shape = jsonio.parse_shape(doc, args.file)
    if isinstance(shape, PixelSet):
        if args.window:
            shape = PixelSet(shape.pixels, args.window)
        return shape
    if hasattr(shape, "vertices") and not hasattr(shape, "cycles"):
        window = args.window or auto_window(shape.vertices)
        return rasterize_cycle(
            [p.require_coords() for p in shape.vertices], window)
    raise InputError(
        args.file, "shape.type",
        "jordan checks a single curve; use the cycles subcommand for systems")


def cmd_jordan(args) -> int:
    try:
        curve = _load_curve(args)
    except RasterizationError as exc:
        _emit(args, [f"curve cannot be drawn: {exc}"], {
            "passed": False, "reason": str(exc)})
        return 1
    partition = jordan_partition(curve)
    lines = [
        f"interior regions: {len(partition.interior_regions)}",
        f"exterior regions: {len(partition.exterior_regions)}",
        f"exactly two regions: {'yes' if partition.exactly_two_regions else 'no'}",
        f"common boundary: {'yes' if partition.common_boundary else 'no'}",
        f"nonvoid interior: {'yes' if partition.nonvoid_interior else 'no'}",
        f"separation: {'pass' if partition.passed else 'fail'}",
    ]
    payload = {
        "window": list(curve.window),
        "boundary_pixels": len(partition.boundary.pixels),
        "interior_pixels": len(partition.interior.pixels),
        "exterior_pixels": len(partition.exterior.pixels),
        "interior_regions": len(partition.interior_regions),
        "exterior_regions": len(partition.exterior_regions),
        "exactly_two_regions": partition.exactly_two_regions,
        "common_boundary": partition.common_boundary,
        "nonvoid_interior": partition.nonvoid_interior,
        "passed": partition.passed,
    }
    if args.emit_svg:
        from .render import render_regions
        render_regions(partition, args.emit_svg)
        lines.append(f"wrote {args.emit_svg}")
    _emit(args, lines, payload)
    return 0 if partition.passed else 1


def cmd_alexandrov(args) -> int:
    quad = jsonio.parse_quadruple(
        jsonio.load_document(args.file), args.file, kappa=args.kappa)
    report = alexandrov_quadruple_check(quad)
    lines = [
        f"kappa: {report.kappa}",
        "angles (kappa): " + ", ".join(f"{a:.6f}" for a in report.angles),
        f"angle sum (kappa): {report.angle_sum:.6f}",
        "angles (flat):  " + ", ".join(
            f"{a:.6f}" for a in report.euclidean_angles),
        f"angle sum (flat):  {report.euclidean_sum:.6f}",
        f"within 2 pi: {'yes' if report.within_bound else 'no'}",
    ]
    if report.perimeter_ok is not None:
        lines.append(
            f"perimeter condition: {'met' if report.perimeter_ok else 'not met'}")
    _emit(args, lines, {
        "kappa": report.kappa,
        "angles": list(report.angles),
        "angle_sum": report.angle_sum,
        "euclidean_angles": list(report.euclidean_angles),
        "euclidean_sum": report.euclidean_sum,
        "within_bound": report.within_bound,
        "perimeter_ok": report.perimeter_ok,
    })
    return 0 if report.within_bound else 1


def _tracks_csv(table: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([
        "track", "rank", "betti0", "betti1", "features",
        "intervals", "lifetime"])
    for row in table["tracks"]:
        intervals = ";".join(f"{s}:{e}" for s, e in row["intervals"])
        features = ("" if row["features"] is None
                    else " ".join(map(str, row["features"])))
        writer.writerow([
            row["track"], row["rank"], row["betti"][0], row["betti"][1],
            features, intervals, row["lifetime"]])
    return buf.getvalue()


def cmd_track(args) -> int:
    frames = jsonio.parse_frames(
        jsonio.load_document(args.file), args.file)
    try:
        tracks = run_tracker(
            frames, tol=args.tolerance, gap=args.gap,
            feature_tolerance=args.feature_tolerance)
    except ValueError as exc:
        raise InputError(args.file, "frames", str(exc))
    table = track_table(tracks)
    lines = [f"{len(frames)} frames, {len(tracks)} tracks"]
    for row in table["tracks"]:
        spans = ", ".join(f"[{s}, {e}]" for s, e in row["intervals"])
        lines.append(
            f"track {row['track']}: rank {row['rank']}, "
            f"betti {tuple(row['betti'])}, intervals {spans}, "
            f"lifetime {row['lifetime']}")
    if args.report:
        Path(args.report).write_text(jsonio.dump_json(table))
        lines.append(f"wrote {args.report}")
    if args.csv:
        Path(args.csv).write_text(_tracks_csv(table))
        lines.append(f"wrote {args.csv}")
    if args.barcode:
        from .render import render_barcode
        render_barcode(tracks, args.barcode)
        lines.append(f"wrote {args.barcode}")
    _emit(args, lines, table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prox",
        description="Finite proximity space toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="machine-readable JSON on stdout")
    common.add_argument("--stamp", action="store_true",
                        help="include a generation timestamp")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        p.add_argument("file", help="input file")
        return p

    p = add("check-axioms", cmd_check_axioms, "verify nearness axioms")
    p.add_argument("--descriptive", action="store_true")
    p.add_argument("--epsilon", type=_nonneg_float, default=0.0)
    p.add_argument("--tau", type=_nonneg_float, default=None)

    p = add("closure", cmd_closure, "closure of a point set")
    p.add_argument("--set", required=True, help="comma-separated point ids")
    p.add_argument("--descriptive", action="store_true")
    p.add_argument("--epsilon", type=_nonneg_float, default=0.0)
    p.add_argument("--tau", type=_nonneg_float, default=None)

    p = add("dintersect", cmd_dintersect, "descriptive intersection")
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p.add_argument("--epsilon", type=_nonneg_float, default=0.0)

    p = add("continuity", cmd_continuity, "proximal continuity of a map")
    p.add_argument("--mode", choices=("plain", "descriptive"),
                   default="plain")
    p.add_argument("--epsilon", type=_nonneg_float, default=0.0)

    p = add("glue", cmd_glue, "glue two maps on closed pieces")
    p.add_argument("--mode", choices=("plain", "descriptive"),
                   default="plain")
    p.add_argument("--epsilon", type=_nonneg_float, default=0.0)

    p = add("homotopy", cmd_homotopy, "verify a homotopy witness table")
    p.add_argument("--mode", choices=("plain", "descriptive"),
                   default="plain")
    p.add_argument("--epsilon", type=_nonneg_float, default=0.0)

    p = add("cycles", cmd_cycles, "validate cycles and cycle systems")
    p.add_argument("--window", type=_window_arg, default=None)
    p.add_argument("--emit-svg", default=None, metavar="OUT.svg")

    p = add("nerve", cmd_nerve, "nerve of a cover, with Betti numbers")
    p.add_argument("--descriptive", action="store_true")
    p.add_argument("--epsilon", type=_nonneg_float, default=0.0)

    add("betti", cmd_betti, "Betti numbers of a small complex")

    p = add("goodcover", cmd_goodcover, "good-cover contractibility checks")
    p.add_argument("--mode",
                   choices=("topological", "descriptive", "degenerate"),
                   default="topological")
    p.add_argument("--epsilon", type=_nonneg_float, default=0.0)

    p = add("jordan", cmd_jordan, "curve separation in a grid window")
    p.add_argument("--window", type=_window_arg, default=None)
    p.add_argument("--emit-svg", default=None, metavar="OUT.svg")

    p = add("alexandrov", cmd_alexandrov, "comparison-angle quadruple check")
    p.add_argument("--kappa", type=_nonneg_float, default=None)

    p = add("track", cmd_track, "persistence tracks over timed frames")
    p.add_argument("--tolerance", type=_nonneg_int, default=0)
    p.add_argument("--gap", type=_nonneg_int, default=0)
    p.add_argument("--feature-tolerance", type=_nonneg_float, default=0.0)
    p.add_argument("--report", default=None, metavar="OUT.json")
    p.add_argument("--csv", default=None, metavar="OUT.csv")
    p.add_argument("--barcode", default=None, metavar="OUT.svg")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ProxtopError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
