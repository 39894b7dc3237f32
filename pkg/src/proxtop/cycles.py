"""Paths, cycles, multi-path cycles and clasped cycle systems.

Structures hold their vertex Points directly (with coordinates), so the
drawn-set checks work standalone; validation against a space checks that
the vertices belong to it and that consecutive vertices are near.

A cycle is valid when it is simple, closed, its consecutive vertices are
near, and its rasterized curve encloses at least one pixel.  A cycle
system joins several cycles at shared vertices; the global reading wants
one vertex common to all members, the chain reading one shared vertex
per consecutive pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .descriptive import Description, Probe, descriptions_close, stored_features
from .errors import MissingCoordinatesError, RasterizationError
from .grid import (
    PixelSet,
    RegionPartition,
    Window,
    complement_regions,
    jordan_partition,
    neighbors,
    rasterize_cycle,
    rasterize_path,
)
from .spaces import FiniteProximitySpace, Point, PointId


@dataclass(frozen=True)
class HPath:
    """An ordered run of points; a path is traversed first to last."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise ValueError("a path needs at least one vertex")

    @property
    def endpoints(self) -> tuple[Point, Point]:
        return (self.vertices[0], self.vertices[-1])

    @property
    def is_closed(self) -> bool:
        return self.vertices[0].id == self.vertices[-1].id

    def reversed(self) -> "HPath":
        return HPath(tuple(reversed(self.vertices)))


@dataclass(frozen=True)
class PathClass:
    """Paths collected between a fixed pair of endpoints.

    Membership is extensional: the class is whatever paths were supplied,
    no equivalence computation is attempted.
    """

    endpoints: tuple[Point, Point]
    members: tuple[HPath, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("a path class needs at least one member path")

    def endpoint_ids(self) -> tuple[PointId, PointId]:
        return (self.endpoints[0].id, self.endpoints[1].id)

    @classmethod
    def singleton(cls, path: HPath) -> "PathClass":
        return cls(path.endpoints, (path,))


@dataclass(frozen=True)
class HCycle:
    """A cyclic vertex sequence; edge i runs from vertex i to vertex i+1
    (wrapping), each edge a direct two-vertex path by default."""

    vertices: tuple[Point, ...]
    edges: tuple[HPath, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.edges:
            n = len(self.vertices)
            object.__setattr__(self, "edges", tuple(
                HPath((self.vertices[i], self.vertices[(i + 1) % n]))
                for i in range(n)))

    def vertex_ids(self) -> tuple[PointId, ...]:
        return tuple(p.id for p in self.vertices)


@dataclass(frozen=True)
class MultiCycle:
    """A cycle whose edges are path classes (possibly several parallel
    paths per edge)."""

    vertices: tuple[Point, ...]
    edges: tuple[PathClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    def vertex_ids(self) -> tuple[PointId, ...]:
        return tuple(p.id for p in self.vertices)

    @classmethod
    def from_cycle(cls, cycle: HCycle) -> "MultiCycle":
        return cls(cycle.vertices,
                   tuple(PathClass.singleton(e) for e in cycle.edges))


@dataclass(frozen=True)
class CycleSystem:
    """Two or more cycles joined at shared vertices."""

    cycles: tuple[MultiCycle, ...]
    mode: str = "global"

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(
            MultiCycle.from_cycle(c) if isinstance(c, HCycle) else c
            for c in self.cycles))
        if self.mode not in ("global", "chain"):
            raise ValueError(f"unknown system mode {self.mode!r}")


CycleLike = Union[HPath, HCycle, MultiCycle]


@dataclass(frozen=True)
class CycleReport:
    ok: bool
    diagnostics: tuple[str, ...] = ()
    interior_size: Optional[int] = None
    partition: Optional[RegionPartition] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SystemReport:
    ok: bool
    diagnostics: tuple[str, ...] = ()
    clasp: Optional[PointId] = None
    junctions: tuple[PointId, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _membership_problems(space: FiniteProximitySpace, pts: Sequence[Point]) -> list[str]:
    out = []
    for p in pts:
        if p.id not in space.ids:
            out.append(f"vertex {p.id!r} is not in the space")
        elif space.point(p.id) != p:
            out.append(f"vertex {p.id!r} differs from the space's point")
        elif p.coords is None:
            out.append(f"vertex {p.id!r} has no coordinates")
    return out


def validate_hpath(space: FiniteProximitySpace, path: HPath) -> CycleReport:
    """A path is valid when its vertices belong to the space and each
    consecutive pair is near."""
    problems = _membership_problems(space, path.vertices)
    if not problems:
        for a, b in zip(path.vertices, path.vertices[1:]):
            if not (space.point_pair_near(a.id, b.id)
                    and space.point_pair_near(b.id, a.id)):
                problems.append(f"consecutive vertices {a.id!r}, {b.id!r} are far")
    return CycleReport(not problems, tuple(problems))


def auto_window(pts: Iterable[Point], margin: int = 1) -> Window:
    coords = [p.require_coords() for p in pts]
    if not coords:
        raise MissingCoordinatesError("no vertices to infer a window from")
    w = max(int(round(x)) for x, _ in coords) + 1 + margin
    h = max(int(round(y)) for _, y in coords) + 1 + margin
    return (w, h)


def validate_hcyc(
    space: FiniteProximitySpace,
    candidate: Union[HCycle, HPath],
    window: Optional[Window] = None,
) -> CycleReport:
    """Simple, closed, consecutive vertices near, and the drawn curve
    encloses at least one pixel.

    An open path is rejected outright (it has end vertices); a closed
    path is read as the cycle of its distinct vertices.
    """
    if isinstance(candidate, HPath):
        if not candidate.is_closed:
            return CycleReport(False, (
                f"path has end vertices {candidate.vertices[0].id!r} and "
                f"{candidate.vertices[-1].id!r}; not a cycle",))
        candidate = HCycle(candidate.vertices[:-1])
    verts = candidate.vertices
    problems = _membership_problems(space, verts)
    if problems:
        return CycleReport(False, tuple(problems))
    ids = [p.id for p in verts]
    if len(set(ids)) != len(ids):
        problems.append("cycle repeats a vertex")
    if len(verts) < 3:
        problems.append(f"cycle needs at least 3 vertices, got {len(verts)}")
    if problems:
        return CycleReport(False, tuple(problems))
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if not (space.point_pair_near(a.id, b.id)
                and space.point_pair_near(b.id, a.id)):
            problems.append(f"consecutive vertices {a.id!r}, {b.id!r} are far")
    if problems:
        return CycleReport(False, tuple(problems))
    window = window or auto_window(verts)
    try:
        drawn = rasterize_cycle([p.require_coords() for p in verts], window)
    except RasterizationError as exc:
        return CycleReport(False, (str(exc),))
    partition = jordan_partition(drawn)
    if not partition.nonvoid_interior:
        problems.append("void interior: the drawn cycle encloses no pixel")
    return CycleReport(
        not problems, tuple(problems),
        interior_size=len(partition.interior), partition=partition)


def validate_multi_cycle(
    space: FiniteProximitySpace,
    candidate: MultiCycle,
    window: Optional[Window] = None,
) -> CycleReport:
    """The vertex cycle must validate, and every edge class must be
    nonempty, endpoint-consistent, and made of valid paths."""
    problems: list[str] = []
    n = len(candidate.vertices)
    if len(candidate.edges) != n:
        problems.append(
            f"{n} vertices need {n} edge classes, got {len(candidate.edges)}")
    for i, cls in enumerate(candidate.edges[:n]):
        want = (candidate.vertices[i].id, candidate.vertices[(i + 1) % n].id)
        if cls.endpoint_ids() != want:
            problems.append(
                f"edge {i} endpoints {cls.endpoint_ids()!r} do not match "
                f"incident vertices {want!r}")
            continue
        for j, member in enumerate(cls.members):
            first, last = member.endpoints
            if (first.id, last.id) != want:
                problems.append(f"edge {i} member {j} does not run between its endpoints")
                continue
            member_report = validate_hpath(space, member)
            if not member_report.ok:
                problems.append(f"edge {i} member {j}: {member_report.diagnostics[0]}")
    base = validate_hcyc(space, HCycle(candidate.vertices), window)
    problems.extend(base.diagnostics)
    return CycleReport(
        base.ok and not problems, tuple(problems),
        interior_size=base.interior_size, partition=base.partition)


def validate_cycle_system(
    space: FiniteProximitySpace,
    candidate: CycleSystem,
    mode: Optional[str] = None,
    window: Optional[Window] = None,
) -> SystemReport:
    """Check the member cycles and their joining pattern.

    Global mode: the vertex sets of all members intersect in exactly one
    vertex, the clasp.  Chain mode: consecutive members share exactly one
    vertex and non-consecutive members none, necklace style.
    """
    mode = mode or candidate.mode
    if mode not in ("global", "chain"):
        raise ValueError(f"unknown system mode {mode!r}")
    problems: list[str] = []
    if len(candidate.cycles) < 2:
        problems.append(f"a system needs at least 2 cycles, got {len(candidate.cycles)}")
    for i, cyc in enumerate(candidate.cycles):
        rep = validate_multi_cycle(space, cyc, window)
        problems.extend(f"cycle {i}: {msg}" for msg in rep.diagnostics)
    if problems:
        return SystemReport(False, tuple(problems))
    vertex_sets = [frozenset(c.vertex_ids()) for c in candidate.cycles]
    if mode == "global":
        shared = frozenset.intersection(*vertex_sets)
        if len(shared) == 1:
            clasp = next(iter(shared))
            return SystemReport(True, (), clasp=clasp, junctions=(clasp,))
        if not shared:
            problems.append("member cycles share no common vertex")
        else:
            problems.append(
                f"member cycles share {len(shared)} vertices: "
                f"{sorted(map(str, shared))}")
        return SystemReport(False, tuple(problems))
    junctions: list[PointId] = []
    for i in range(len(vertex_sets) - 1):
        shared = vertex_sets[i] & vertex_sets[i + 1]
        if len(shared) != 1:
            problems.append(
                f"cycles {i} and {i + 1} share {len(shared)} vertices, want 1")
        else:
            junctions.append(next(iter(shared)))
    for i in range(len(vertex_sets)):
        for j in range(i + 2, len(vertex_sets)):
            shared = vertex_sets[i] & vertex_sets[j]
            if shared:
                problems.append(
                    f"non-consecutive cycles {i} and {j} share vertices "
                    f"{sorted(map(str, shared))}")
    return SystemReport(not problems, tuple(problems), junctions=tuple(junctions))


def path_description(
    probe: Optional[Probe], path: HPath
) -> frozenset[Description]:
    """The set of descriptions seen along the path."""
    probe = probe or stored_features
    return frozenset(tuple(float(v) for v in probe(p)) for p in path.vertices)


def paths_descriptively_close(
    probe: Optional[Probe], first: HPath, second: HPath, epsilon: float = 0.0
) -> bool:
    """Description sets equal up to the tolerance: each description from
    either path is within ``epsilon`` of one from the other."""
    da = path_description(probe, first)
    db = path_description(probe, second)
    return (all(any(descriptions_close(u, v, epsilon) for v in db) for u in da)
            and all(any(descriptions_close(u, v, epsilon) for v in da) for u in db))


@dataclass(frozen=True)
class SystemBoundaryReport:
    """Region structure of a drawn cycle structure."""

    drawn: PixelSet
    checked: PixelSet
    partition: RegionPartition
    expected_interiors: int
    region_counts_ok: bool
    common_boundary: bool
    junction_pixels: frozenset[tuple[int, int]]

    @property
    def passed(self) -> bool:
        return self.region_counts_ok and self.common_boundary


def _draw_structure(structure, window: Window) -> PixelSet:
    if isinstance(structure, HPath):
        return rasterize_path([p.require_coords() for p in structure.vertices],
                              window, closed=False)
    if isinstance(structure, HCycle):
        return rasterize_cycle([p.require_coords() for p in structure.vertices],
                               window)
    if isinstance(structure, MultiCycle):
        pixels: set = set()
        for cls in structure.edges:
            for member in cls.members:
                pixels |= rasterize_path(
                    [p.require_coords() for p in member.vertices],
                    window, closed=False).pixels
        return PixelSet(frozenset(pixels), window)
    raise TypeError(f"cannot draw a {type(structure).__name__}")


def _structure_points(structure) -> list[Point]:
    if isinstance(structure, (HPath, HCycle)):
        return list(structure.vertices)
    if isinstance(structure, MultiCycle):
        return [v for cls in structure.edges for m in cls.members
                for v in m.vertices] + list(structure.vertices)
    if isinstance(structure, CycleSystem):
        return [p for c in structure.cycles for p in _structure_points(c)]
    raise TypeError(f"no points in a {type(structure).__name__}")


def outer_boundary(drawn: PixelSet) -> PixelSet:
    """Drawn pixels 8-adjacent to the border-touching complement."""
    _, outer = complement_regions(drawn)
    outside = frozenset().union(*outer) if outer else frozenset()
    return PixelSet(
        frozenset(p for p in drawn.pixels
                  if any(nb in outside for nb in neighbors(p, drawn.window))),
        drawn.window)


def system_boundary_check(
    structure: Union[CycleSystem, MultiCycle, HCycle, HPath],
    window: Optional[Window] = None,
) -> SystemBoundaryReport:
    """Draw the structure and verify its region pattern.

    A single cycle should separate one interior from one exterior.  A
    multi-path cycle is judged by its outer boundary curve.  A system of
    n cycles should bound n interior regions and one exterior, with every
    drawn pixel touching the exterior side and some interior; pixels where
    three or more curve branches meet edge-to-edge (the clasp) are
    reported, not rejected.
    """
    window = window or auto_window(_structure_points(structure))
    if isinstance(structure, CycleSystem):
        pixels: set = set()
        for cyc in structure.cycles:
            pixels |= _draw_structure(cyc, window).pixels
        drawn = PixelSet(frozenset(pixels), window)
        checked = drawn
        expected = len(structure.cycles)
    elif isinstance(structure, MultiCycle):
        drawn = _draw_structure(structure, window)
        checked = outer_boundary(drawn)
        expected = 1
    else:
        drawn = _draw_structure(structure, window)
        checked = drawn
        expected = 1
    partition = jordan_partition(checked)
    counts_ok = (len(partition.interior_regions) == expected
                 and len(partition.exterior_regions) == 1)
    inside = partition.interior.pixels
    outside = partition.exterior.pixels
    common = bool(checked.pixels) and all(
        any(nb in inside for nb in neighbors(p, window))
        and any(nb in outside for nb in neighbors(p, window))
        for p in checked.pixels)
    junctions = frozenset(
        p for p in checked.pixels
        if sum(nb in checked.pixels
               for nb in neighbors(p, window, eight=False)) >= 3)
    return SystemBoundaryReport(
        drawn=drawn, checked=checked, partition=partition,
        expected_interiors=expected, region_counts_ok=counts_ok,
        common_boundary=common, junction_pixels=junctions)
