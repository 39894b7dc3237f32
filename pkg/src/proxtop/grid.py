"""Digital topology on a bounded integer grid window.

Foreground pixel sets are read with 8-connectivity and their complement
with 4-connectivity, the usual pairing that keeps a thin closed curve
separating its inside from its outside.  The window is part of every
pixel set: complements and floods are taken inside it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import RasterizationError

Pixel = tuple[int, int]
Window = tuple[int, int]

NBR8 = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))
NBR4 = ((0, -1), (-1, 0), (1, 0), (0, 1))


@dataclass(frozen=True)
class PixelSet:
    """A set of pixels inside a window of size (width, height)."""

    pixels: frozenset[Pixel]
    window: Window

    def __post_init__(self):
        w, h = self.window
        if w <= 0 or h <= 0:
            raise ValueError(f"window must be positive, got {self.window}")
        object.__setattr__(self, "pixels", frozenset(self.pixels))
        for x, y in self.pixels:
            if not (0 <= x < w and 0 <= y < h):
                raise ValueError(f"pixel {(x, y)} outside window {w}x{h}")

    def __contains__(self, pixel: Pixel) -> bool:
        return pixel in self.pixels

    def __len__(self) -> int:
        return len(self.pixels)

    def complement(self) -> frozenset[Pixel]:
        w, h = self.window
        return frozenset(
            (x, y) for y in range(h) for x in range(w)
            if (x, y) not in self.pixels)

    def union(self, other: "PixelSet") -> "PixelSet":
        if other.window != self.window:
            raise ValueError("pixel sets live in different windows")
        return PixelSet(self.pixels | other.pixels, self.window)


def neighbors(pixel: Pixel, window: Window, eight: bool = True) -> list[Pixel]:
    x, y = pixel
    w, h = window
    out = []
    for dx, dy in (NBR8 if eight else NBR4):
        nx, ny = x + dx, y + dy
        if 0 <= nx < w and 0 <= ny < h:
            out.append((nx, ny))
    return out


def connected_components(
    pixels: Iterable[Pixel], window: Window, eight: bool = True
) -> list[frozenset[Pixel]]:
    """Connected components, listed in scan order of their first pixel."""
    todo = set(pixels)
    order = sorted(todo, key=lambda p: (p[1], p[0]))
    out = []
    for start in order:
        if start not in todo:
            continue
        comp = {start}
        todo.discard(start)
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nb in neighbors(cur, window, eight):
                if nb in todo:
                    todo.discard(nb)
                    comp.add(nb)
                    queue.append(nb)
        out.append(frozenset(comp))
    return out


def closure_boundary_interior(
    ps: PixelSet,
) -> tuple[PixelSet, PixelSet, PixelSet, PixelSet]:
    """Digital closure, boundary, interior and complement of a pixel set.

    On the exact grid the closure adds nothing; the boundary is the
    closure pixels 8-adjacent to the in-window complement, and the
    interior is what remains, so closure = boundary | interior with the
    two parts disjoint.
    """
    comp = ps.complement()
    cl = ps.pixels
    bdy = frozenset(
        p for p in cl if any(nb in comp for nb in neighbors(p, ps.window)))
    inner = cl - bdy
    return (PixelSet(cl, ps.window), PixelSet(bdy, ps.window),
            PixelSet(inner, ps.window), PixelSet(comp, ps.window))


def complement_regions(ps: PixelSet) -> tuple[list[frozenset[Pixel]], list[frozenset[Pixel]]]:
    """4-connected complement components split into (bounded, border-touching)."""
    w, h = ps.window
    bounded, outer = [], []
    for comp in connected_components(ps.complement(), ps.window, eight=False):
        if any(x == 0 or y == 0 or x == w - 1 or y == h - 1 for x, y in comp):
            outer.append(comp)
        else:
            bounded.append(comp)
    return bounded, outer


def grid_homology(ps: PixelSet) -> tuple[int, int]:
    """Betti numbers of the foreground: component count and hole count.

    Components are 8-connected; holes are the bounded 4-connected
    components of the complement.
    """
    b0 = len(connected_components(ps.pixels, ps.window, eight=True))
    bounded, _ = complement_regions(ps)
    return b0, len(bounded)


def is_grid_contractible(ps: PixelSet) -> bool:
    """One piece and no holes."""
    return grid_homology(ps) == (1, 0)


@dataclass(frozen=True)
class RegionPartition:
    """How a drawn curve partitions its window: the curve pixels form the
    boundary, the bounded complement regions the interior, the
    border-touching ones the exterior.  The three parts are disjoint and
    cover the window."""

    boundary: PixelSet
    interior: PixelSet
    exterior: PixelSet
    interior_regions: tuple[frozenset[Pixel], ...]
    exterior_regions: tuple[frozenset[Pixel], ...]
    exactly_two_regions: bool
    common_boundary: bool
    nonvoid_interior: bool

    @property
    def passed(self) -> bool:
        return self.exactly_two_regions and self.common_boundary and self.nonvoid_interior


def jordan_partition(curve: PixelSet) -> RegionPartition:
    """Partition the window complement of a drawn curve and test the
    separation properties: one inside and one outside region, with every
    curve pixel touching both."""
    bounded, outer = complement_regions(curve)
    inside = frozenset().union(*bounded) if bounded else frozenset()
    outside = frozenset().union(*outer) if outer else frozenset()
    common = bool(curve.pixels) and all(
        any(nb in inside for nb in neighbors(p, curve.window))
        and any(nb in outside for nb in neighbors(p, curve.window))
        for p in curve.pixels)
    return RegionPartition(
        boundary=curve,
        interior=PixelSet(inside, curve.window),
        exterior=PixelSet(outside, curve.window),
        interior_regions=tuple(bounded),
        exterior_regions=tuple(outer),
        exactly_two_regions=(len(bounded) == 1 and len(outer) == 1),
        common_boundary=common,
        nonvoid_interior=bool(bounded),
    )


def bresenham_line(p: Pixel, q: Pixel) -> list[Pixel]:
    """All pixels on the integer line from p to q, endpoints included."""
    x0, y0 = p
    x1, y1 = q
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    out = []
    while True:
        out.append((x0, y0))
        if (x0, y0) == (x1, y1):
            return out
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def segment_pixels(p: Pixel, q: Pixel) -> frozenset[Pixel]:
    """Pixels of the segment pq, independent of drawing direction:
    Bresenham tie-breaking depends on direction, so draw from the
    lexicographically smaller endpoint."""
    if q < p:
        p, q = q, p
    return frozenset(bresenham_line(p, q))


def _as_int_vertex(v, window: Window) -> Pixel:
    x, y = v
    ix, iy = round(float(x)), round(float(y))
    if abs(float(x) - ix) > 1e-6 or abs(float(y) - iy) > 1e-6:
        raise RasterizationError(f"vertex {v!r} is not on the integer grid")
    w, h = window
    if not (0 <= ix < w and 0 <= iy < h):
        raise RasterizationError(f"vertex {(ix, iy)} outside window {w}x{h}")
    return (ix, iy)


def _orient(a: Pixel, b: Pixel, c: Pixel) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _proper_crossing(a: Pixel, b: Pixel, c: Pixel, d: Pixel) -> bool:
    """Segments ab and cd cross at a point interior to both.

    Collinear overlaps and endpoint touches are not crossings here; they
    rasterize fine and are caught later as degenerate partitions.
    """
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def rasterize_path(vertices: Sequence, window: Window, closed: bool = False) -> PixelSet:
    """Rasterize a polyline through integer vertices.

    A closed path needs at least three distinct vertices (two points
    cannot bound a region) and must not cross itself transversally.
    """
    verts = [_as_int_vertex(v, window) for v in vertices]
    if closed:
        distinct = set(verts)
        if len(verts) != len(distinct):
            raise RasterizationError("closed path repeats a vertex")
        if len(verts) < 3:
            raise RasterizationError(
                f"a closed path needs at least 3 vertices, got {len(verts)}")
        segs = [(verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts))]
        ns = len(segs)
        for i in range(ns):
            for j in range(i + 1, ns):
                if j == i + 1 or (i == 0 and j == ns - 1):
                    continue
                if _proper_crossing(*segs[i], *segs[j]):
                    raise RasterizationError(
                        f"path crosses itself between segments {i} and {j}")
    else:
        if not verts:
            raise RasterizationError("empty path")
        segs = [(verts[i], verts[i + 1]) for i in range(len(verts) - 1)]
    pixels = set()
    if not segs:
        pixels.add(verts[0])
    for p, q in segs:
        pixels.update(segment_pixels(p, q))
    return PixelSet(frozenset(pixels), window)


def rasterize_cycle(vertices: Sequence, window: Window) -> PixelSet:
    return rasterize_path(vertices, window, closed=True)


def rect_pixel_set(rect: Sequence[int], window: Window) -> PixelSet:
    """Filled axis-aligned rectangle with inclusive corners (x0, y0, x1, y1)."""
    x0, y0, x1, y1 = (int(v) for v in rect)
    if x1 < x0 or y1 < y0:
        raise ValueError(f"rectangle corners out of order: {rect!r}")
    w, h = window
    if not (0 <= x0 and x1 < w and 0 <= y0 and y1 < h):
        raise ValueError(f"rectangle {rect!r} outside window {w}x{h}")
    pixels = frozenset(
        (x, y) for y in range(y0, y1 + 1) for x in range(x0, x1 + 1))
    return PixelSet(pixels, window)
