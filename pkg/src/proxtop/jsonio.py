"""Input parsing and serialization for the command-line front end.

Document shapes:

- space: ``{"points": [{"id", "coords"?, "features"?}, ...],
  "relation": {"type": "metric", "tau": T} |
  {"type": "explicit", "pairs": [[a, b], ...], "symmetric"?: bool}}``
- map: ``{"source": space, "target": space, "assignment": {id: id}}``
- glue: ``{"ambient": space, "target": space,
  "first": {"domain": [ids], "assignment": {...}}, "second": {...}}``
- homotopy: ``{"source": space, "target": space, "k": K,
  "table": {id: [ids of length K+1]}, "rel"?: [ids],
  "f"?: {id: id}, "g"?: {id: id}}``
- cycles: ``{"space": space, "cycle": [ids] | "path": [ids] |
  "cycles": [[ids], ...], "mode"?: "global" | "chain"}``
- shape: ``{"type": "cycle", "vertices": [[x, y], ...]}`` |
  ``{"type": "cycle-system", "cycles": [[[x, y], ...], ...], "mode"?}`` |
  ``{"type": "pixels", "pixels": [[x, y], ...], "window": [w, h]}``
- frames: ``{"frames": [{"id", "time", "shape": shape, "features"?}]}``
- cover: ``{"space": space, "elements": [{"ids": [...]}, ...]}`` |
  ``{"window": [w, h], "elements": [{"rect": [x0, y0, x1, y1]}, ...]}``
- quadruple: ``{"points": [[x, y], ...4], "kappa"?: K}``
- complex: ``{"vertices": [...], "edges": [[u, v], ...],
  "triangles"?: [[u, v, w], ...]}``

Grid input also accepts ASCII PBM (P1, ones are foreground) and PGM
(P2, nonzero is foreground).  Parse failures raise ``InputError`` naming
the file, field, and reason.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from .cycles import CycleSystem, HCycle, HPath
from .errors import InputError, ProxtopError
from .grid import PixelSet, Window
from .homotopy import FiniteMap, HomotopyWitness
from .nerve import AlexandrovQuadruple, Cover, NerveComplex
from .persistence import Frame
from .spaces import ExplicitRelation, FiniteProximitySpace, MetricGap, Point


def load_document(path: Union[str, Path]) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(str(path), "-", f"cannot read file: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(str(path), "-", f"malformed JSON: {exc}")


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def packaged_example(name: str) -> Path:
    """Path of a data file shipped with the package."""
    return Path(resources.files("proxtop") / "data" / name)


def _need(doc: Any, field: str, file: str, kind: Optional[type] = None) -> Any:
    if not isinstance(doc, dict):
        raise InputError(file, field, "expected a JSON object")
    if field not in doc:
        raise InputError(file, field, "missing required field")
    value = doc[field]
    if kind is not None and not isinstance(value, kind):
        raise InputError(
            file, field,
            f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _number(value: Any, file: str, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(file, field, f"expected a number, got {value!r}")
    return float(value)


def _numbers(value: Any, file: str, field: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise InputError(file, field, "expected a list of numbers")
    return tuple(_number(v, file, f"{field}[{i}]") for i, v in enumerate(value))


def _raw_id(value: Any, file: str, field: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InputError(file, field, "point ids must be strings or integers")
    return value


def parse_space(doc: Any, file: str, at: str = "") -> FiniteProximitySpace:
    entries = _need(doc, "points", file, list)
    points = []
    for i, entry in enumerate(entries):
        where = f"{at}points[{i}]"
        pid = _raw_id(_need(entry, "id", file), file, f"{where}.id")
        coords = entry.get("coords")
        if coords is not None:
            coords = _numbers(coords, file, f"{where}.coords")
        features = entry.get("features")
        if features is not None:
            features = _numbers(features, file, f"{where}.features")
        try:
            points.append(Point(pid, coords=coords, features=features))
        except (ValueError, TypeError) as exc:
            raise InputError(file, where, str(exc))
    relation = _need(doc, "relation", file, dict)
    rtype = _need(relation, "type", file, str)
    if rtype == "metric":
        tau = _number(relation.get("tau", 0.0), file, f"{at}relation.tau")
        try:
            rule: Union[MetricGap, ExplicitRelation] = MetricGap(tau)
        except ValueError as exc:
            raise InputError(file, f"{at}relation.tau", str(exc))
    elif rtype == "explicit":
        raw_pairs = relation.get("pairs", [])
        if not isinstance(raw_pairs, list):
            raise InputError(file, f"{at}relation.pairs", "expected a list")
        pairs = []
        for i, pair in enumerate(raw_pairs):
            where = f"{at}relation.pairs[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise InputError(file, where, "each pair is a two-item list")
            pairs.append((
                _raw_id(pair[0], file, where), _raw_id(pair[1], file, where)))
        if relation.get("symmetric", True):
            rule = ExplicitRelation.symmetric(pairs)
        else:
            rule = ExplicitRelation(frozenset(pairs))
    else:
        raise InputError(
            file, f"{at}relation.type", f"unknown relation type {rtype!r}")
    try:
        return FiniteProximitySpace(tuple(points), rule)
    except (ValueError, ProxtopError) as exc:
        raise InputError(file, at.rstrip(".") or "points", str(exc))


def resolve_id(space: FiniteProximitySpace, raw, file: str, field: str):
    """Match a JSON value to a point id, tolerating the string form of an
    integer id (JSON object keys are always strings)."""
    if raw in space.ids:
        return raw
    if isinstance(raw, str):
        try:
            alt = int(raw)
        except ValueError:
            alt = None
        if alt in space.ids:
            return alt
    raise InputError(file, field, f"unknown point id {raw!r}")


def resolve_ids(space, values, file: str, field: str) -> list:
    if not isinstance(values, list):
        raise InputError(file, field, "expected a list of point ids")
    return [resolve_id(space, v, file, f"{field}[{i}]")
            for i, v in enumerate(values)]


def _parse_assignment(space_from, space_to, raw, file, field) -> FiniteMap:
    if not isinstance(raw, dict):
        raise InputError(file, field, "expected an object mapping id to id")
    mapping = {}
    for key, value in raw.items():
        src = resolve_id(space_from, key, file, f"{field}.{key}")
        dst = resolve_id(space_to, value, file, f"{field}.{key}")
        mapping[src] = dst
    try:
        return FiniteMap.from_dict(space_from, space_to, mapping)
    except (ValueError, ProxtopError) as exc:
        raise InputError(file, field, str(exc))


def parse_map(doc: Any, file: str) -> FiniteMap:
    source = parse_space(_need(doc, "source", file, dict), file, "source.")
    target = parse_space(_need(doc, "target", file, dict), file, "target.")
    return _parse_assignment(
        source, target, _need(doc, "assignment", file, dict),
        file, "assignment")


def parse_glue(doc: Any, file: str):
    """Two partial maps over an ambient space, for gluing."""
    ambient = parse_space(_need(doc, "ambient", file, dict), file, "ambient.")
    target = parse_space(_need(doc, "target", file, dict), file, "target.")
    maps = []
    for name in ("first", "second"):
        piece = _need(doc, name, file, dict)
        domain = resolve_ids(
            ambient, _need(piece, "domain", file, list), file, f"{name}.domain")
        try:
            sub = ambient.subspace(domain)
        except (ValueError, ProxtopError) as exc:
            raise InputError(file, f"{name}.domain", str(exc))
        maps.append(_parse_assignment(
            sub, target, _need(piece, "assignment", file, dict),
            file, f"{name}.assignment"))
    return maps[0], maps[1], ambient


def parse_homotopy(doc: Any, file: str):
    """A homotopy witness plus its two boundary maps."""
    source = parse_space(_need(doc, "source", file, dict), file, "source.")
    target = parse_space(_need(doc, "target", file, dict), file, "target.")
    k = _need(doc, "k", file, int)
    table = _need(doc, "table", file, dict)
    entries = {}
    for key, row in table.items():
        pid = resolve_id(source, key, file, f"table.{key}")
        if not isinstance(row, list) or len(row) != k + 1:
            raise InputError(
                file, f"table.{key}", f"expected a list of {k + 1} ids")
        for i, value in enumerate(row):
            entries[(pid, i)] = resolve_id(
                target, value, file, f"table.{key}[{i}]")
    rel = frozenset(
        resolve_ids(source, doc.get("rel", []), file, "rel"))
    try:
        witness = HomotopyWitness.from_dict(source, target, k, entries, rel)
    except (ValueError, ProxtopError) as exc:
        raise InputError(file, "table", str(exc))
    f = (witness.start_map() if "f" not in doc else _parse_assignment(
        source, target, doc["f"], file, "f"))
    g = (witness.end_map() if "g" not in doc else _parse_assignment(
        source, target, doc["g"], file, "g"))
    return witness, f, g


def parse_cycles(doc: Any, file: str):
    """A cycle, path, or cycle system over an explicit space.

    Returns (kind, space, structure) with kind one of "cycle", "path",
    "system".
    """
    space = parse_space(_need(doc, "space", file, dict), file, "space.")

    def run(values, field):
        ids = resolve_ids(space, values, file, field)
        return tuple(space.point(i) for i in ids)

    present = [k for k in ("cycle", "path", "cycles") if k in doc]
    if len(present) != 1:
        raise InputError(
            file, "cycle", "provide exactly one of cycle, path, or cycles")
    kind = present[0]
    try:
        if kind == "cycle":
            return "cycle", space, HCycle(run(doc["cycle"], "cycle"))
        if kind == "path":
            return "path", space, HPath(run(doc["path"], "path"))
        members = doc["cycles"]
        if not isinstance(members, list):
            raise InputError(file, "cycles", "expected a list of cycles")
        cycles = tuple(
            HCycle(run(member, f"cycles[{i}]"))
            for i, member in enumerate(members))
        mode = doc.get("mode", "global")
        return "system", space, CycleSystem(cycles, mode=mode)
    except (ValueError, ProxtopError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(file, kind, str(exc))


def _coord_id(x: float, y: float) -> str:
    def fmt(v: float) -> str:
        return str(int(v)) if float(v).is_integer() else repr(float(v))
    return f"{fmt(x)},{fmt(y)}"


def _coord_points(values, file, field) -> tuple[Point, ...]:
    if not isinstance(values, list) or not values:
        raise InputError(file, field, "expected a nonempty list of [x, y]")
    points = []
    for i, pair in enumerate(values):
        coords = _numbers(pair, file, f"{field}[{i}]")
        if len(coords) != 2:
            raise InputError(file, f"{field}[{i}]", "expected [x, y]")
        points.append(Point(_coord_id(*coords), coords=coords))
    return tuple(points)


def parse_shape(doc: Any, file: str, field: str = "shape"):
    """A structural shape: a cycle, cycle system, or pixel set."""
    stype = _need(doc, "type", file, str)
    try:
        if stype == "cycle":
            return HCycle(_coord_points(
                _need(doc, "vertices", file, list), file, f"{field}.vertices"))
        if stype == "cycle-system":
            members = _need(doc, "cycles", file, list)
            cycles = tuple(
                HCycle(_coord_points(member, file, f"{field}.cycles[{i}]"))
                for i, member in enumerate(members))
            return CycleSystem(cycles, mode=doc.get("mode", "global"))
        if stype == "pixels":
            window = _numbers(
                _need(doc, "window", file, list), file, f"{field}.window")
            if len(window) != 2:
                raise InputError(file, f"{field}.window", "expected [w, h]")
            raw = _need(doc, "pixels", file, list)
            pixels = set()
            for i, pair in enumerate(raw):
                xy = _numbers(pair, file, f"{field}.pixels[{i}]")
                if len(xy) != 2 or not all(v.is_integer() for v in xy):
                    raise InputError(
                        file, f"{field}.pixels[{i}]",
                        "pixels are integer [x, y] pairs")
                pixels.add((int(xy[0]), int(xy[1])))
            return PixelSet(
                frozenset(pixels), (int(window[0]), int(window[1])))
    except (ValueError, ProxtopError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(file, field, str(exc))
    raise InputError(file, f"{field}.type", f"unknown shape type {stype!r}")


def parse_frames(doc: Any, file: str) -> list[Frame]:
    entries = _need(doc, "frames", file, list)
    frames = []
    for i, entry in enumerate(entries):
        where = f"frames[{i}]"
        fid = _need(entry, "id", file)
        time = _number(_need(entry, "time", file), file, f"{where}.time")
        shape = parse_shape(
            _need(entry, "shape", file, dict), file, f"{where}.shape")
        features = entry.get("features")
        if features is not None:
            features = _numbers(features, file, f"{where}.features")
        try:
            frames.append(Frame(str(fid), time, shape, features))
        except ValueError as exc:
            raise InputError(file, where, str(exc))
    return frames


def parse_cover(doc: Any, file: str):
    """Either an id cover over a space or a rectangle cover in a window.

    Returns ("ids", Cover) or ("rects", rect list, window).
    """
    elements = _need(doc, "elements", file, list)
    if not elements:
        raise InputError(file, "elements", "cover has no elements")
    kinds = set()
    for i, elem in enumerate(elements):
        if not isinstance(elem, dict):
            raise InputError(file, f"elements[{i}]", "expected an object")
        kinds.add("ids" if "ids" in elem else "rect" if "rect" in elem else "?")
    if kinds == {"ids"}:
        space = parse_space(_need(doc, "space", file, dict), file, "space.")
        sets = tuple(
            frozenset(resolve_ids(
                space, elem["ids"], file, f"elements[{i}].ids"))
            for i, elem in enumerate(elements))
        try:
            return "ids", Cover(space, sets)
        except (ValueError, ProxtopError) as exc:
            raise InputError(file, "elements", str(exc))
    if kinds == {"rect"}:
        window = _numbers(
            _need(doc, "window", file, list), file, "window")
        if len(window) != 2:
            raise InputError(file, "window", "expected [w, h]")
        rects = []
        for i, elem in enumerate(elements):
            rect = _numbers(elem["rect"], file, f"elements[{i}].rect")
            if len(rect) != 4 or not all(v.is_integer() for v in rect):
                raise InputError(
                    file, f"elements[{i}].rect",
                    "expected integer [x0, y0, x1, y1]")
            rects.append(tuple(int(v) for v in rect))
        return "rects", rects, (int(window[0]), int(window[1]))
    raise InputError(
        file, "elements", "every element needs ids, or every element a rect")


def parse_quadruple(
    doc: Any, file: str, kappa: Optional[float] = None
) -> AlexandrovQuadruple:
    raw = _need(doc, "points", file, list)
    if len(raw) != 4:
        raise InputError(file, "points", f"expected 4 points, got {len(raw)}")
    points = tuple(
        _numbers(p, file, f"points[{i}]") for i, p in enumerate(raw))
    if kappa is None:
        kappa = _number(doc.get("kappa", 0.0), file, "kappa")
    try:
        return AlexandrovQuadruple(points, kappa=kappa)
    except ValueError as exc:
        raise InputError(file, "points", str(exc))


def parse_complex(doc: Any, file: str) -> NerveComplex:
    vertices = _need(doc, "vertices", file, list)
    ids = [_raw_id(v, file, f"vertices[{i}]") for i, v in enumerate(vertices)]
    simplices = [(v,) for v in ids]
    for field, size in (("edges", 2), ("triangles", 3)):
        for i, item in enumerate(doc.get(field, [])):
            if not isinstance(item, list) or len(item) != size:
                raise InputError(
                    file, f"{field}[{i}]", f"expected a {size}-item list")
            simplices.append(tuple(
                _raw_id(v, file, f"{field}[{i}]") for v in item))
    try:
        return NerveComplex(tuple(ids), tuple(simplices))
    except (TypeError, ProxtopError) as exc:
        raise InputError(file, "vertices", str(exc))


def load_pixels(path: Union[str, Path]) -> PixelSet:
    """ASCII PBM (P1) or PGM (P2) as a pixel set; nonzero means drawn.

    Rows run top to bottom, so the pixel (x, y) has y as the row index.
    """
    file = str(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(file, "-", f"cannot read file: {exc}")
    tokens = []
    for line in text.splitlines():
        body = line.split("#", 1)[0]
        tokens.extend(body.split())
    if not tokens or tokens[0] not in ("P1", "P2"):
        raise InputError(file, "magic", "expected ASCII PBM (P1) or PGM (P2)")
    magic = tokens[0]
    header = 3 if magic == "P1" else 4
    try:
        width, height = int(tokens[1]), int(tokens[2])
        values = [int(t) for t in tokens[header:]]
    except (IndexError, ValueError):
        raise InputError(file, "header", "malformed dimensions or samples")
    if len(values) != width * height:
        raise InputError(
            file, "samples",
            f"expected {width * height} samples, got {len(values)}")
    pixels = frozenset(
        (i % width, i // width) for i, v in enumerate(values) if v != 0)
    return PixelSet(pixels, (width, height))


def save_pbm(ps: PixelSet, path: Union[str, Path]) -> None:
    w, h = ps.window
    lines = ["P1", f"{w} {h}"]
    for y in range(h):
        lines.append(" ".join(
            "1" if (x, y) in ps.pixels else "0" for x in range(w)))
    Path(path).write_text("\n".join(lines) + "\n")
