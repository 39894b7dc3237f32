"""Descriptive nearness: comparing sets by point descriptions.

A probe assigns each point a feature vector (its description).  Two sets
are descriptively near when their descriptive intersection is nonempty,
i.e. some point of either set has a description close (within the
feature tolerance ``epsilon``) to a description from each set.  That
holds exactly when some cross pair of points has descriptions within
``epsilon`` of each other, so descriptive nearness is again a pointwise
lift and shares the axiom engine.
"""

from __future__ import annotations

import math
import random
from typing import Callable, Iterable, Optional

from .axioms import AxiomReport, check_lifted_axioms
from .errors import MissingProbeError
from .spaces import FiniteProximitySpace, Point, PointId

Description = tuple[float, ...]
Probe = Callable[[Point], Description]


def stored_features(point: Point) -> Description:
    """The default probe: a point describes itself by its stored features."""
    if point.features is None:
        raise MissingProbeError(
            f"point {point.id!r} has no features; supply a probe or set features")
    return point.features


def feature_distance(u: Description, v: Description) -> float:
    """Euclidean distance between descriptions; descriptions of different
    arity are never close."""
    if len(u) != len(v):
        return math.inf
    return math.dist(u, v)


def describe(space: FiniteProximitySpace, probe: Optional[Probe] = None) -> dict[PointId, Description]:
    probe = probe or stored_features
    return {p.id: tuple(float(v) for v in probe(p)) for p in space.points}


def descriptions_close(u: Description, v: Description, epsilon: float = 0.0) -> bool:
    return feature_distance(u, v) <= epsilon


def descriptive_intersection(
    space: FiniteProximitySpace,
    a: Iterable[PointId],
    b: Iterable[PointId],
    probe: Optional[Probe] = None,
    epsilon: float = 0.0,
) -> frozenset[PointId]:
    """Points of A or B whose description is within ``epsilon`` of a
    description from A and one from B that are themselves close.

    At epsilon = 0 this is the set of points of the union whose exact
    description occurs in both sets.
    """
    _check_epsilon(epsilon)
    sa, sb = frozenset(a), frozenset(b)
    space.resolve(sa | sb)
    desc = describe(space, probe)
    close_pairs = [
        (x, y) for x in sa for y in sb
        if descriptions_close(desc[x], desc[y], epsilon)
    ]
    out = set()
    for x in sa | sb:
        for p, q in close_pairs:
            if (descriptions_close(desc[x], desc[p], epsilon)
                    and descriptions_close(desc[x], desc[q], epsilon)):
                out.add(x)
                break
    return frozenset(out)


def descriptive_intersection_many(
    space: FiniteProximitySpace,
    subsets: Iterable[Iterable[PointId]],
    probe: Optional[Probe] = None,
    epsilon: float = 0.0,
) -> frozenset[PointId]:
    """Descriptive intersection of a whole family.

    A point of the union belongs when some choice of one point per subset
    is, together with it, pairwise close within ``epsilon``.  For a single
    subset this is the subset itself; for two it agrees with
    ``descriptive_intersection``.
    """
    _check_epsilon(epsilon)
    parts = [frozenset(s) for s in subsets]
    if not parts:
        raise ValueError("need at least one subset")
    union = frozenset().union(*parts)
    space.resolve(union)
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2:
        return descriptive_intersection(space, parts[0], parts[1], probe, epsilon)
    desc = describe(space, probe)

    def extend(x: PointId, chosen: list[PointId], rest) -> bool:
        if not rest:
            return True
        for cand in rest[0]:
            dc = desc[cand]
            if descriptions_close(desc[x], dc, epsilon) and all(
                    descriptions_close(desc[c], dc, epsilon) for c in chosen):
                chosen.append(cand)
                if extend(x, chosen, rest[1:]):
                    return True
                chosen.pop()
        return False

    ordered = [sorted(p, key=str) for p in parts]
    return frozenset(x for x in union if extend(x, [], ordered))


def descriptive_near(
    space: FiniteProximitySpace,
    a: Iterable[PointId],
    b: Iterable[PointId],
    probe: Optional[Probe] = None,
    epsilon: float = 0.0,
) -> bool:
    """True iff the descriptive intersection of the sets is nonempty,
    equivalently iff some cross pair of points has close descriptions."""
    _check_epsilon(epsilon)
    sa, sb = frozenset(a), frozenset(b)
    space.resolve(sa | sb)
    if not sa or not sb:
        return False
    desc = describe(space, probe)
    return any(
        descriptions_close(desc[x], desc[y], epsilon)
        for x in sa for y in sb)


def descriptive_closure(
    space: FiniteProximitySpace,
    a: Iterable[PointId],
    probe: Optional[Probe] = None,
    epsilon: float = 0.0,
) -> frozenset[PointId]:
    """All points descriptively near the set: at epsilon = 0 the union of
    the description classes that meet it.  Idempotent when epsilon = 0."""
    _check_epsilon(epsilon)
    sa = frozenset(a)
    space.resolve(sa)
    if not sa:
        return frozenset()
    desc = describe(space, probe)
    return frozenset(
        p.id for p in space.points
        if any(descriptions_close(desc[p.id], desc[x], epsilon) for x in sa))


def description_classes(
    space: FiniteProximitySpace,
    probe: Optional[Probe] = None,
) -> list[frozenset[PointId]]:
    """Partition of the space by exact description equality, in first-seen
    order of the descriptions."""
    desc = describe(space, probe)
    classes: dict[Description, set[PointId]] = {}
    for p in space.points:
        classes.setdefault(desc[p.id], set()).add(p.id)
    return [frozenset(members) for members in classes.values()]


def single_description(
    space: FiniteProximitySpace,
    a: Iterable[PointId],
    probe: Optional[Probe] = None,
    epsilon: float = 0.0,
) -> bool:
    """True when the set's descriptions are pairwise within ``epsilon``
    (a single description class at epsilon = 0).  Empty sets qualify."""
    _check_epsilon(epsilon)
    sa = sorted(frozenset(a), key=str)
    space.resolve(sa)
    desc = describe(space, probe)
    return all(
        descriptions_close(desc[x], desc[y], epsilon)
        for i, x in enumerate(sa) for y in sa[i + 1:])


def check_descriptive_axioms(
    space: FiniteProximitySpace,
    probe: Optional[Probe] = None,
    epsilon: float = 0.0,
    budget: int = 20000,
    rng: random.Random | None = None,
) -> AxiomReport:
    """Check the four nearness axioms for descriptive nearness at the
    given feature tolerance, over every subset pair and triple."""
    _check_epsilon(epsilon)
    desc = describe(space, probe)
    ids = [p.id for p in space.points]
    n = len(ids)
    masks = [0] * n
    for i in range(n):
        for j in range(n):
            if i == j or descriptions_close(desc[ids[i]], desc[ids[j]], epsilon):
                masks[i] |= 1 << j
    return check_lifted_axioms(ids, masks, budget=budget, rng=rng)


def _check_epsilon(epsilon: float) -> None:
    if not (epsilon >= 0.0 and math.isfinite(epsilon)):
        raise ValueError(f"feature tolerance must be finite and >= 0, got {epsilon}")
