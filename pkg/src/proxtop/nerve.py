"""Covers, nerves, Betti numbers, and comparison-angle checks.

A cover is a finite family of point sets whose union is the whole space.
Its nerve records which subfamilies intersect, either literally or
descriptively.  The nerve is capped at dimension 2: component and cycle
counts carry every planar claim this toolkit makes, and the cap keeps the
cost bounded.  All homology ranks are computed over GF(2), which is
orientation-free and exact in integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

from .cycles import CycleSystem, HCycle, HPath, MultiCycle
from .descriptive import (
    Probe,
    descriptive_intersection_many,
    single_description,
)
from .errors import DegenerateTriangleError, ForeignPointError, InvalidShapeError
from .grid import PixelSet, Window, grid_homology, rect_pixel_set
from .homotopy import contractibility
from .spaces import FiniteProximitySpace, Point, PointId

NERVE_MODES = ("plain", "descriptive")
GOOD_COVER_MODES = ("topological", "descriptive", "degenerate")


@dataclass(frozen=True)
class Cover:
    """A finite family of point sets covering the whole space."""

    space: FiniteProximitySpace
    elements: tuple[frozenset[PointId], ...]

    def __post_init__(self):
        if not self.elements:
            raise ValueError("a cover needs at least one element")
        resolved = []
        for i, elem in enumerate(self.elements):
            ids = frozenset(elem)
            if not ids:
                raise ValueError(f"cover element {i} is empty")
            missing = ids - self.space.ids
            if missing:
                raise ForeignPointError(
                    f"cover element {i} uses unknown points "
                    f"{sorted(map(str, missing))}")
            resolved.append(ids)
        object.__setattr__(self, "elements", tuple(resolved))
        uncovered = self.space.ids - frozenset().union(*resolved)
        if uncovered:
            raise ValueError(
                f"cover misses points {sorted(map(str, uncovered))}")

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class NerveComplex:
    """Simplicial complex on cover-element indices, dimension at most 2.

    The container normalizes simplex order but does not enforce downward
    closure; ``betti`` validates that before computing ranks.
    """

    vertices: tuple[int, ...]
    simplices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        seen = set()
        normal = []
        for s in self.simplices:
            t = tuple(sorted(set(s)))
            if not t or len(t) > 3:
                raise InvalidShapeError(
                    f"simplex {s!r} is not a vertex, edge, or triangle")
            if t not in seen:
                seen.add(t)
                normal.append(t)
        object.__setattr__(
            self, "simplices", tuple(sorted(normal, key=lambda t: (len(t), t))))

    def of_dim(self, dim: int) -> tuple[tuple[int, ...], ...]:
        return tuple(s for s in self.simplices if len(s) == dim + 1)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.of_dim(1)

    @property
    def triangles(self) -> tuple[tuple[int, int, int], ...]:
        return self.of_dim(2)


def build_nerve(
    cover: Cover,
    mode: str = "plain",
    probe: Optional[Probe] = None,
    epsilon: float = 0.0,
) -> NerveComplex:
    """Nerve of the cover: a simplex for every subfamily of up to three
    elements with nonempty plain or descriptive intersection."""
    if mode not in NERVE_MODES:
        raise ValueError(f"unknown nerve mode {mode!r}")

    def nonvoid(idx: tuple[int, ...]) -> bool:
        subsets = [cover.elements[i] for i in idx]
        if mode == "plain":
            return bool(frozenset.intersection(*subsets))
        return bool(descriptive_intersection_many(
            cover.space, subsets, probe=probe, epsilon=epsilon))

    n = len(cover.elements)
    simplices: list[tuple[int, ...]] = [(i,) for i in range(n)]
    edges = [e for e in combinations(range(n), 2) if nonvoid(e)]
    simplices.extend(edges)
    edge_set = set(edges)
    # a nonvoid triple forces nonvoid pairs, so the subset test is just a
    # short circuit before the more expensive intersection
    simplices.extend(
        t for t in combinations(range(n), 3)
        if all(e in edge_set for e in combinations(t, 2)) and nonvoid(t))
    return NerveComplex(tuple(range(n)), tuple(simplices))


def _skeleton_components(vertices: Sequence, edges: Iterable[tuple]) -> int:
    adjacency: dict = {v: set() for v in vertices}
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    seen: set = set()
    count = 0
    for v in vertices:
        if v in seen:
            continue
        count += 1
        stack = [v]
        seen.add(v)
        while stack:
            cur = stack.pop()
            for nb in adjacency[cur]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
    return count


def _gf2_rank(rows: list[int]) -> int:
    rank = 0
    pivots: list[int] = []
    for row in rows:
        for p in pivots:
            row = min(row, row ^ p)
        if row:
            pivots.append(row)
            pivots.sort(reverse=True)
            rank += 1
    return rank


def betti(complex: NerveComplex) -> tuple[int, int]:
    """Component count and independent-cycle count of the complex.

    The cycle count is the rank of the edge cycle space minus the GF(2)
    rank of the triangle boundary map.
    """
    vset = set(complex.vertices)
    edges = complex.edges
    for u, v in edges:
        if u not in vset or v not in vset:
            raise InvalidShapeError(f"edge ({u}, {v}) has a missing vertex")
    edge_index = {e: i for i, e in enumerate(edges)}
    rows = []
    for tri in complex.triangles:
        mask = 0
        for e in combinations(tri, 2):
            if e not in edge_index:
                raise InvalidShapeError(
                    f"triangle {tri} has a missing edge {e}")
            mask |= 1 << edge_index[e]
        rows.append(mask)
    b0 = _skeleton_components(complex.vertices, edges)
    cycle_rank = len(edges) - len(complex.vertices) + b0
    return b0, cycle_rank - _gf2_rank(rows)


@dataclass(frozen=True)
class FreeGroupPresentation:
    """Rank and fundamental-cycle generators of a graph's free group."""

    rank: int
    generators: tuple[tuple[tuple, ...], ...]


def _norm_edge(u, v) -> tuple:
    return (u, v) if repr(u) <= repr(v) else (v, u)


def free_group_presentation(
    vertices: Iterable, edges: Iterable[tuple]
) -> FreeGroupPresentation:
    """Free-group data of a finite graph.

    The rank is edge count minus vertex count plus component count; the
    generators are the fundamental cycles of a breadth-first spanning
    forest grown in sorted vertex order, so the output is deterministic.
    The rank itself does not depend on the forest.
    """
    vs = sorted(set(vertices), key=repr)
    vset = set(vs)
    eset: set[tuple] = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"self loop at {u!r}")
        if u not in vset or v not in vset:
            raise ValueError(f"edge ({u!r}, {v!r}) has a missing vertex")
        eset.add(_norm_edge(u, v))
    adjacency: dict = {v: [] for v in vs}
    for u, v in sorted(eset, key=repr):
        adjacency[u].append(v)
        adjacency[v].append(u)
    parent: dict = {}
    tree_edges: set[tuple] = set()
    components = 0
    for root in vs:
        if root in parent:
            continue
        components += 1
        parent[root] = None
        queue = [root]
        while queue:
            cur = queue.pop(0)
            for nb in adjacency[cur]:
                if nb not in parent:
                    parent[nb] = cur
                    tree_edges.add(_norm_edge(cur, nb))
                    queue.append(nb)

    def root_path(v) -> list:
        path = [v]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path

    generators = []
    for u, v in sorted(eset - tree_edges, key=repr):
        pu, pv = root_path(u), root_path(v)
        while len(pu) > 1 and len(pv) > 1 and pu[-2] == pv[-2]:
            pu.pop()
            pv.pop()
        # a chord's endpoints share a component, hence a BFS root
        assert pu[-1] == pv[-1]
        walk = pu + pv[-2::-1]
        cycle = tuple(_norm_edge(a, b) for a, b in zip(walk, walk[1:]))
        generators.append(cycle + (_norm_edge(v, u),))

    rank = len(eset) - len(vs) + components
    assert rank == len(generators)
    return FreeGroupPresentation(rank, tuple(generators))


def cycles_one_skeleton(
    structure: Union[HPath, HCycle, MultiCycle, CycleSystem],
) -> tuple[tuple[PointId, ...], tuple[tuple[PointId, PointId], ...]]:
    """Vertex and edge lists of a cycle structure, for free-group ranks.

    Multi-path edge classes contribute a single abstract edge between
    their endpoints; subdividing by member paths would not change the
    rank.
    """
    if isinstance(structure, CycleSystem):
        vs: list[PointId] = []
        es: list[tuple[PointId, PointId]] = []
        for member in structure.cycles:
            mv, me = cycles_one_skeleton(member)
            vs.extend(mv)
            es.extend(me)
        return tuple(vs), tuple(es)
    if isinstance(structure, MultiCycle):
        return (tuple(p.id for p in structure.vertices),
                tuple((c.endpoints[0].id, c.endpoints[1].id)
                      for c in structure.edges))
    if isinstance(structure, HCycle):
        ids = [p.id for p in structure.vertices]
        return tuple(ids), tuple(
            (ids[i], ids[(i + 1) % len(ids)]) for i in range(len(ids)))
    ids = [p.id for p in structure.vertices]
    return tuple(ids), tuple(zip(ids, ids[1:]))


@dataclass(frozen=True)
class IntersectionReport:
    indices: tuple[int, ...]
    ids: frozenset[PointId]
    contractible: bool
    reason: str


@dataclass(frozen=True)
class GoodCoverReport:
    ok: bool
    mode: str
    intersections: tuple[IntersectionReport, ...]

    def __bool__(self) -> bool:
        return self.ok


def _integer_pixels(points: Iterable[Point]) -> frozenset[tuple[int, int]]:
    out = set()
    for p in points:
        x, y = p.require_coords()
        if abs(x - round(x)) > 1e-9 or abs(y - round(y)) > 1e-9:
            raise InvalidShapeError(
                f"point {p.id!r} is off the integer grid: {p.coords}")
        out.add((int(round(x)), int(round(y))))
    return frozenset(out)


def check_good_cover(
    cover: Cover,
    mode: str = "topological",
    probe: Optional[Probe] = None,
    epsilon: float = 0.0,
    window: Optional[Window] = None,
) -> GoodCoverReport:
    """Check that every intersection of two or more cover elements is
    contractible in the requested sense.

    Topological mode intersects literally and uses the grid surrogate
    (one piece, no holes) on the points' integer coordinates.  The
    descriptive modes intersect descriptively; degenerate asks for a
    single shared description, descriptive for a contraction certificate.
    Elements themselves are not checked: a cover of cycles is the model
    case, and a cycle is exactly the kind of set that is not
    contractible.
    """
    if mode not in GOOD_COVER_MODES:
        raise ValueError(f"unknown good-cover mode {mode!r}")
    n = len(cover.elements)
    if n > 16:
        raise ValueError(f"cover with {n} elements is too large to check")
    if mode == "topological" and window is None:
        pixels = _integer_pixels(cover.space.points)
        window = (max(x for x, _ in pixels) + 2, max(y for _, y in pixels) + 2)
    reports = []
    for size in range(2, n + 1):
        for idx in combinations(range(n), size):
            subsets = [cover.elements[i] for i in idx]
            if mode == "topological":
                inter = frozenset.intersection(*subsets)
                if not inter:
                    continue
                ps = PixelSet(
                    _integer_pixels(cover.space.resolve(inter)), window)
                hb = grid_homology(ps)
                good = hb == (1, 0)
                reason = f"grid betti {hb}"
            else:
                inter = descriptive_intersection_many(
                    cover.space, subsets, probe=probe, epsilon=epsilon)
                if not inter:
                    continue
                if mode == "degenerate":
                    good = single_description(
                        cover.space, inter, probe=probe, epsilon=epsilon)
                    reason = ("single description" if good
                              else "multiple descriptions")
                else:
                    rep = contractibility(
                        cover.space.subspace(inter), mode="descriptive",
                        epsilon=epsilon, probe=probe)
                    good, reason = rep.contractible, rep.reason
            reports.append(IntersectionReport(idx, inter, good, reason))
    ok = all(r.contractible for r in reports)
    return GoodCoverReport(ok, mode, tuple(reports))


@dataclass(frozen=True)
class NerveUnionReport:
    match: bool
    nerve_betti: tuple[int, int]
    union_betti: tuple[int, int]
    nerve: NerveComplex

    def __bool__(self) -> bool:
        return self.match


def nerve_vs_union_check(
    rects: Sequence[Sequence[int]], window: Window
) -> NerveUnionReport:
    """Compare the nerve of a rectangle cover with its drawn union.

    Each element is a filled axis-aligned rectangle (x0, y0, x1, y1) with
    inclusive corners, so every element is convex by construction.  The
    nerve uses literal pixel intersections; the union is judged by grid
    homology.
    """
    if not rects:
        raise ValueError("need at least one rectangle")
    sets = [rect_pixel_set(r, window) for r in rects]

    def nonvoid(idx: tuple[int, ...]) -> bool:
        return bool(frozenset.intersection(*(sets[i].pixels for i in idx)))

    n = len(sets)
    simplices: list[tuple[int, ...]] = [(i,) for i in range(n)]
    simplices.extend(e for e in combinations(range(n), 2) if nonvoid(e))
    simplices.extend(t for t in combinations(range(n), 3) if nonvoid(t))
    nerve = NerveComplex(tuple(range(n)), tuple(simplices))
    union = PixelSet(frozenset().union(*(s.pixels for s in sets)), window)
    nb = betti(nerve)
    ub = grid_homology(union)
    return NerveUnionReport(nb == ub, nb, ub, nerve)


def _point_coords(p) -> tuple[float, ...]:
    if isinstance(p, Point):
        return p.require_coords()
    return tuple(float(v) for v in p)


def comparison_angle(a, b, c, kappa: float = 0.0) -> float:
    """Model angle at the middle vertex of the triangle a, b, c.

    Zero curvature uses the Euclidean law of cosines; positive curvature
    the spherical law of cosines on sides rescaled by the square root of
    the curvature.  Negative curvature is not supported.  Point inputs
    guarantee the triangle inequality, so the cosine is clamped only
    against roundoff.
    """
    if kappa < 0:
        raise ValueError("negative curvature is not supported")
    pa, pb, pc = _point_coords(a), _point_coords(b), _point_coords(c)
    ab = math.dist(pa, pb)
    cb = math.dist(pc, pb)
    ac = math.dist(pa, pc)
    if ab == 0 or cb == 0:
        raise DegenerateTriangleError("a side at the apex has length zero")
    if kappa == 0:
        cos_angle = (ab * ab + cb * cb - ac * ac) / (2 * ab * cb)
    else:
        s = math.sqrt(kappa)
        for side in (ab, cb, ac):
            if s * side >= math.pi:
                raise DegenerateTriangleError(
                    f"side {side} exceeds the diameter of the curvature-"
                    f"{kappa} model")
        cos_angle = ((math.cos(s * ac) - math.cos(s * ab) * math.cos(s * cb))
                     / (math.sin(s * ab) * math.sin(s * cb)))
    return math.acos(max(-1.0, min(1.0, cos_angle)))


@dataclass(frozen=True)
class AlexandrovQuadruple:
    """A center point with three satellites, judged at curvature kappa."""

    points: tuple
    kappa: float = 0.0

    def __post_init__(self):
        if len(self.points) != 4:
            raise ValueError("a quadruple needs exactly 4 points")
        if self.kappa < 0:
            raise ValueError("negative curvature is not supported")
        coords = [_point_coords(p) for p in self.points]
        for i, j in combinations(range(4), 2):
            if coords[i] == coords[j]:
                raise ValueError(f"points {i} and {j} coincide")


@dataclass(frozen=True)
class QuadrupleReport:
    """Comparison angles around the center and their sums.

    The Euclidean angles are always reported next to the curvature-kappa
    ones so the two conventions can be compared without picking a side;
    only the kappa angle sum drives the verdict.  The perimeter condition
    (every center triangle smaller than pi over root kappa) is reported,
    not enforced: the classical definition demands it, but useful inputs
    violate it.
    """

    kappa: float
    angles: tuple[float, float, float]
    angle_sum: float
    euclidean_angles: tuple[float, float, float]
    euclidean_sum: float
    within_bound: bool
    perimeter_ok: Optional[bool]

    def __bool__(self) -> bool:
        return self.within_bound


def alexandrov_quadruple_check(q: AlexandrovQuadruple) -> QuadrupleReport:
    """Sum the three comparison angles at the center against 2 pi."""
    center, sats = q.points[0], q.points[1:]
    pairs = ((0, 1), (0, 2), (1, 2))
    angles = tuple(
        comparison_angle(sats[i], center, sats[j], q.kappa) for i, j in pairs)
    euclid = tuple(
        comparison_angle(sats[i], center, sats[j], 0.0) for i, j in pairs)
    total = sum(angles)
    perimeter_ok: Optional[bool] = None
    if q.kappa > 0:
        coords = [_point_coords(p) for p in q.points]
        worst = max(
            math.dist(coords[0], coords[i + 1])
            + math.dist(coords[0], coords[j + 1])
            + math.dist(coords[i + 1], coords[j + 1])
            for i, j in pairs)
        perimeter_ok = worst < math.pi / math.sqrt(q.kappa)
    return QuadrupleReport(
        kappa=q.kappa, angles=angles, angle_sum=total,
        euclidean_angles=euclid, euclidean_sum=sum(euclid),
        within_bound=total <= 2 * math.pi + 1e-9, perimeter_ok=perimeter_ok)
