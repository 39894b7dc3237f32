"""Finite proximity spaces: points, nearness rules, gap distance, closure.

A space is a finite set of points together with a total nearness rule on
point pairs.  Set-level nearness is the pointwise lift: two subsets are
near when they overlap or contain a related cross pair.  Both rule
variants (an explicit point-pair relation, or a metric rule with a gap
tolerance ``tau``) fit that lift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

from .errors import ForeignPointError, MissingCoordinatesError

PointId = Union[str, int]
Coords = tuple[float, float]

#: Gap distances are nonnegative floats, with ``math.inf`` reserved for
#: comparisons against an empty set.
ExtendedDistance = float


@dataclass(frozen=True)
class Point:
    """A named point, optionally carrying planar coordinates and a feature vector."""

    id: PointId
    coords: Coords | None = None
    features: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.coords is not None:
            object.__setattr__(self, "coords", (float(self.coords[0]), float(self.coords[1])))
            if not all(math.isfinite(c) for c in self.coords):
                raise ValueError(f"point {self.id!r}: coordinates must be finite")
        if self.features is not None:
            object.__setattr__(self, "features", tuple(float(v) for v in self.features))
            if not all(math.isfinite(v) for v in self.features):
                raise ValueError(f"point {self.id!r}: features must be finite")

    def require_coords(self) -> Coords:
        if self.coords is None:
            raise MissingCoordinatesError(f"point {self.id!r} has no coordinates")
        return self.coords


@dataclass(frozen=True)
class ExplicitRelation:
    """Point-pair nearness given as an explicit set of directed pairs.

    A well-formed relation is symmetric (and reflexivity is implied by the
    overlap clause of set nearness), but asymmetric pair sets are
    representable on purpose so the axiom checker can exhibit violations.
    """

    pairs: frozenset[tuple[PointId, PointId]]

    @classmethod
    def symmetric(cls, pairs: Iterable[tuple[PointId, PointId]]) -> "ExplicitRelation":
        """Build the symmetric closure of ``pairs``."""
        closed = set()
        for a, b in pairs:
            closed.add((a, b))
            closed.add((b, a))
        return cls(frozenset(closed))

    def related(self, a: PointId, b: PointId) -> bool:
        return (a, b) in self.pairs

    def is_symmetric(self) -> bool:
        return all((b, a) in self.pairs for a, b in self.pairs)


@dataclass(frozen=True)
class MetricGap:
    """Metric nearness: sets are near when their gap distance is <= tau.

    tau = 0 reproduces exact-zero nearness on integer grids; a positive
    tau makes measured float data usable.  Requires coordinates on every
    point of the space.
    """

    tau: float = 0.0

    def __post_init__(self):
        if not (self.tau >= 0.0 and math.isfinite(self.tau)):
            raise ValueError(f"tau must be a finite nonnegative real, got {self.tau}")


ProximityRule = Union[ExplicitRelation, MetricGap]


@dataclass(frozen=True)
class FiniteProximitySpace:
    """A nonempty finite point set with a total nearness rule."""

    points: tuple[Point, ...]
    rule: ProximityRule

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError("a proximity space needs at least one point")
        seen = set()
        for p in self.points:
            if p.id in seen:
                raise ValueError(f"duplicate point id {p.id!r}")
            seen.add(p.id)
        if isinstance(self.rule, MetricGap):
            for p in self.points:
                p.require_coords()

    @cached_property
    def _by_id(self) -> dict[PointId, Point]:
        return {p.id: p for p in self.points}

    @cached_property
    def ids(self) -> frozenset[PointId]:
        return frozenset(p.id for p in self.points)

    def point(self, pid: PointId) -> Point:
        try:
            return self._by_id[pid]
        except KeyError:
            raise ForeignPointError(f"point id {pid!r} is not in the space") from None

    def resolve(self, ids: Iterable[PointId]) -> list[Point]:
        return [self.point(pid) for pid in ids]

    def subspace(self, ids: Iterable[PointId]) -> "FiniteProximitySpace":
        """The sub-space on ``ids`` with the induced rule."""
        keep = frozenset(ids)
        pts = tuple(p for p in self.points if p.id in keep)
        missing = keep - {p.id for p in pts}
        if missing:
            raise ForeignPointError(f"point ids {sorted(map(str, missing))} are not in the space")
        rule = self.rule
        if isinstance(rule, ExplicitRelation):
            rule = ExplicitRelation(frozenset(
                (a, b) for a, b in rule.pairs if a in keep and b in keep))
        return FiniteProximitySpace(pts, rule)

    def point_pair_near(self, a: PointId, b: PointId) -> bool:
        """Singleton nearness {a} near {b}; the generator of the lifted relation."""
        pa, pb = self.point(a), self.point(b)
        if a == b:
            return True
        if isinstance(self.rule, MetricGap):
            return _euclid(pa.require_coords(), pb.require_coords()) <= self.rule.tau
        return self.rule.related(a, b)


def _euclid(p: Coords, q: Coords) -> float:
    return math.dist(p, q)


def _coords_of(item) -> Coords:
    if isinstance(item, Point):
        return item.require_coords()
    x, y = item
    return (float(x), float(y))


def hausdorff_gap(a: Iterable, b: Iterable) -> ExtendedDistance:
    """Gap distance between two coordinate sets: the infimum of pairwise
    Euclidean distances, or ``inf`` when either set is empty.

    Accepts iterables of ``Point`` (which must carry coordinates) or of
    ``(x, y)`` pairs.  Symmetric in its arguments.
    """
    ca = [_coords_of(item) for item in a]
    cb = [_coords_of(item) for item in b]
    if not ca or not cb:
        return math.inf
    return min(_euclid(p, q) for p in ca for q in cb)


def near(space: FiniteProximitySpace, a: Iterable[PointId], b: Iterable[PointId]) -> bool:
    """Set-level nearness of two subsets (given by point ids) of ``space``.

    Explicit relation: true iff the sets overlap or contain a related
    cross pair.  Metric rule: true iff the gap distance is <= tau.
    Either way the empty set is far from everything.
    """
    sa = frozenset(a)
    sb = frozenset(b)
    pa = space.resolve(sa)
    pb = space.resolve(sb)
    if not sa or not sb:
        return False
    if isinstance(space.rule, MetricGap):
        return hausdorff_gap(pa, pb) <= space.rule.tau
    if sa & sb:
        return True
    rel = space.rule
    return any(rel.related(x.id, y.id) for x in pa for y in pb)


def closure(space: FiniteProximitySpace, a: Iterable[PointId]) -> frozenset[PointId]:
    """All points of the space near ``a``: {x : {x} near A}.

    This is the one-step nearness closure; it contains ``a`` and is empty
    when ``a`` is empty.  It is idempotent for exact rules (tau = 0,
    equivalence-like relations) but, like any Cech closure, need not be
    for a positive tau.
    """
    sa = frozenset(a)
    space.resolve(sa)
    if not sa:
        return frozenset()
    return frozenset(p.id for p in space.points if near(space, {p.id}, sa))


def is_closed(space: FiniteProximitySpace, a: Iterable[PointId]) -> bool:
    sa = frozenset(a)
    return closure(space, sa) == sa
