"""Maps between proximity spaces: continuity, gluing, homotopy checking.

Homotopies are verified, never searched.  A witness is a full table
H(x, i) over the discrete time grid 0..k; verification checks the
boundary rows against the two maps, constancy on the rel set, and
proximal continuity with respect to the coordinatewise product rule
(points near in the space, times at most one step apart).  Constructors
are provided for the witnesses the theory composes: constant, reversal,
concatenation, straight-line-on-grid, and the contraction certificate of
a set with a single description.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional

from .descriptive import (
    Probe,
    describe,
    descriptions_close,
    descriptive_closure,
    single_description,
)
from .errors import ForeignPointError, GluePreconditionError, SpaceMismatchError
from .grid import PixelSet, grid_homology, is_grid_contractible
from .spaces import FiniteProximitySpace, PointId, closure

PointNear = Callable[[PointId, PointId], bool]

MODES = ("plain", "descriptive")


def _point_near_fn(
    space: FiniteProximitySpace,
    mode: str,
    epsilon: float,
    probe: Optional[Probe],
) -> PointNear:
    if mode == "plain":
        return space.point_pair_near
    if mode == "descriptive":
        desc = describe(space, probe)
        return lambda a, b: descriptions_close(desc[a], desc[b], epsilon)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


@dataclass(frozen=True)
class FiniteMap:
    """A total map between two finite proximity spaces.

    The assignment is stored as a canonical sorted pair tuple so maps
    compare and hash structurally; call the map to apply it.
    """

    source: FiniteProximitySpace
    target: FiniteProximitySpace
    assignment: tuple[tuple[PointId, PointId], ...]

    def __post_init__(self):
        pairs = dict(self.assignment)
        object.__setattr__(
            self, "assignment",
            tuple(sorted(pairs.items(), key=lambda kv: str(kv[0]))))
        if set(pairs) != set(self.source.ids):
            missing = sorted(map(str, self.source.ids - set(pairs)))
            extra = sorted(map(str, set(pairs) - self.source.ids))
            raise ValueError(
                f"assignment must be total on the source: missing {missing}, foreign {extra}")
        bad = sorted(str(v) for v in pairs.values() if v not in self.target.ids)
        if bad:
            raise ValueError(f"assignment values not in target: {bad}")

    @cached_property
    def mapping(self) -> dict[PointId, PointId]:
        return dict(self.assignment)

    def __call__(self, pid: PointId) -> PointId:
        try:
            return self.mapping[pid]
        except KeyError:
            raise ForeignPointError(f"point {pid!r} not in the map's source") from None

    def image(self, ids: Optional[Iterable[PointId]] = None) -> frozenset[PointId]:
        ids = self.source.ids if ids is None else frozenset(ids)
        return frozenset(self(pid) for pid in ids)

    def restrict(self, ids: Iterable[PointId]) -> "FiniteMap":
        sub = self.source.subspace(ids)
        return FiniteMap(sub, self.target,
                         tuple((pid, self(pid)) for pid in sub.ids))

    @classmethod
    def from_dict(cls, source, target, mapping: Mapping[PointId, PointId]) -> "FiniteMap":
        return cls(source, target, tuple(mapping.items()))

    @classmethod
    def identity(cls, space: FiniteProximitySpace) -> "FiniteMap":
        return cls(space, space, tuple((p.id, p.id) for p in space.points))

    @classmethod
    def constant(cls, source, target, value: PointId) -> "FiniteMap":
        target.point(value)
        return cls(source, target, tuple((p.id, value) for p in source.points))


@dataclass(frozen=True)
class ContinuityReport:
    continuous: bool
    mode: str
    witness: Optional[tuple[tuple[PointId, PointId], tuple[PointId, PointId]]] = None

    def __bool__(self) -> bool:
        return self.continuous


def check_proximal_continuity(
    f: FiniteMap,
    mode: str = "plain",
    epsilon: float = 0.0,
    probe_source: Optional[Probe] = None,
    probe_target: Optional[Probe] = None,
) -> ContinuityReport:
    """Does the map send near sets to near sets?

    Set nearness is a pointwise lift, so it is enough to check every near
    singleton pair; a failing pair is returned as the witness together
    with its far image pair.
    """
    near_s = _point_near_fn(f.source, mode, epsilon, probe_source)
    near_t = _point_near_fn(f.target, mode, epsilon, probe_target)
    ids = [p.id for p in f.source.points]
    for a in ids:
        for b in ids:
            if a == b:
                continue
            if near_s(a, b) and not near_t(f(a), f(b)):
                return ContinuityReport(False, mode, ((a, b), (f(a), f(b))))
    return ContinuityReport(True, mode)


def compose(f: FiniteMap, g: FiniteMap) -> FiniteMap:
    """The map x -> g(f(x)); f's target must be g's source."""
    if f.target != g.source:
        raise SpaceMismatchError("compose: target of the first map is not the "
                                 "source of the second")
    return FiniteMap(f.source, g.target,
                     tuple((pid, g(f(pid))) for pid in f.source.ids))


def glue(
    f: FiniteMap,
    g: FiniteMap,
    ambient: FiniteProximitySpace,
    mode: str = "plain",
    epsilon: float = 0.0,
    probe: Optional[Probe] = None,
) -> FiniteMap:
    """Combine maps defined on two closed pieces covering the ambient
    space into one map, after checking the three preconditions: the
    pieces are closed (plain or descriptive closure, per mode), they
    cover the space, and the maps agree on the overlap.
    """
    if f.target != g.target:
        raise SpaceMismatchError("glue: the two maps have different targets")
    a_ids, b_ids = frozenset(f.source.ids), frozenset(g.source.ids)
    for pid in a_ids | b_ids:
        piece = f.source if pid in a_ids else g.source
        if pid not in ambient.ids or ambient.point(pid) != piece.point(pid):
            raise ForeignPointError(
                f"point {pid!r} of a piece does not match the ambient space")
    if a_ids | b_ids != ambient.ids:
        missing = sorted(map(str, ambient.ids - (a_ids | b_ids)))
        raise GluePreconditionError(
            "not-covering", f"points {missing} lie in neither piece")
    if mode == "plain":
        close = lambda ids: closure(ambient, ids)
    elif mode == "descriptive":
        close = lambda ids: descriptive_closure(ambient, ids, probe, epsilon)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    for name, ids in (("first", a_ids), ("second", b_ids)):
        cl = close(ids)
        if cl != ids:
            gained = sorted(map(str, cl - ids))
            raise GluePreconditionError(
                "not-closed", f"{name} piece gains points {gained} under closure")
    for pid in sorted(a_ids & b_ids, key=str):
        if f(pid) != g(pid):
            raise GluePreconditionError(
                "disagreement",
                f"maps send shared point {pid!r} to {f(pid)!r} and {g(pid)!r}")
    merged = {pid: f(pid) for pid in a_ids}
    merged.update((pid, g(pid)) for pid in b_ids)
    return FiniteMap.from_dict(ambient, f.target, merged)


@dataclass(frozen=True)
class HomotopyWitness:
    """A full homotopy table over the discrete time grid 0..k.

    Row 0 is the starting map, row k the ending map; ``rel`` lists the
    points whose track must stay constant.
    """

    source: FiniteProximitySpace
    target: FiniteProximitySpace
    k: int
    table: tuple[tuple[tuple[PointId, int], PointId], ...]
    rel: frozenset[PointId] = frozenset()

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"time grid needs k >= 1, got {self.k}")
        entries = dict(self.table)
        object.__setattr__(
            self, "table",
            tuple(sorted(entries.items(), key=lambda kv: (str(kv[0][0]), kv[0][1]))))
        object.__setattr__(self, "rel", frozenset(self.rel))
        want = {(pid, i) for pid in self.source.ids for i in range(self.k + 1)}
        if set(entries) != want:
            raise ValueError("homotopy table is not total on source x time grid")
        bad = sorted(str(v) for v in entries.values() if v not in self.target.ids)
        if bad:
            raise ValueError(f"homotopy table values not in target: {bad}")
        if not self.rel <= self.source.ids:
            raise ValueError("rel set contains points outside the source")

    @cached_property
    def _entries(self) -> dict[tuple[PointId, int], PointId]:
        return dict(self.table)

    def at(self, pid: PointId, i: int) -> PointId:
        return self._entries[(pid, i)]

    def row(self, i: int) -> FiniteMap:
        return FiniteMap(self.source, self.target,
                         tuple((pid, self.at(pid, i)) for pid in self.source.ids))

    def start_map(self) -> FiniteMap:
        return self.row(0)

    def end_map(self) -> FiniteMap:
        return self.row(self.k)

    @classmethod
    def from_dict(cls, source, target, k, entries, rel=frozenset()) -> "HomotopyWitness":
        return cls(source, target, k, tuple(entries.items()), rel)


@dataclass(frozen=True)
class HomotopyReport:
    ok: bool
    failures: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_homotopy(
    witness: HomotopyWitness,
    f: Optional[FiniteMap] = None,
    g: Optional[FiniteMap] = None,
    mode: str = "plain",
    epsilon: float = 0.0,
    probe_source: Optional[Probe] = None,
    probe_target: Optional[Probe] = None,
) -> HomotopyReport:
    """Check a homotopy witness between f and g (default: its own
    boundary rows).

    Valid means: boundary rows match the maps, tracks over ``rel`` points
    are constant, and the table is proximally continuous for the product
    rule: whenever x, y are near in the source and |i - j| <= 1, the
    images H(x,i), H(y,j) are near in the target.
    """
    for m, name in ((f, "f"), (g, "g")):
        if m is not None and (m.source != witness.source or m.target != witness.target):
            raise SpaceMismatchError(f"map {name} does not live on the witness spaces")
    near_s = _point_near_fn(witness.source, mode, epsilon, probe_source)
    near_t = _point_near_fn(witness.target, mode, epsilon, probe_target)
    failures = []
    ids = [p.id for p in witness.source.points]
    if f is not None:
        for pid in ids:
            if witness.at(pid, 0) != f(pid):
                failures.append(
                    f"start row sends {pid!r} to {witness.at(pid, 0)!r}, f to {f(pid)!r}")
                break
    if g is not None:
        for pid in ids:
            if witness.at(pid, witness.k) != g(pid):
                failures.append(
                    f"end row sends {pid!r} to {witness.at(pid, witness.k)!r}, "
                    f"g to {g(pid)!r}")
                break
    for pid in sorted(witness.rel, key=str):
        track = {witness.at(pid, i) for i in range(witness.k + 1)}
        if len(track) > 1:
            failures.append(f"track of rel point {pid!r} is not constant: {sorted(map(str, track))}")
            break
    violation = _product_continuity_violation(witness, near_s, near_t)
    if violation:
        failures.append(violation)
    return HomotopyReport(not failures, tuple(failures))


def _product_continuity_violation(
    witness: HomotopyWitness, near_s: PointNear, near_t: PointNear
) -> Optional[str]:
    ids = [p.id for p in witness.source.points]
    near_pairs = [(x, y) for x in ids for y in ids if x == y or near_s(x, y)]
    for x, y in near_pairs:
        for i in range(witness.k + 1):
            for j in (i - 1, i, i + 1):
                if not 0 <= j <= witness.k:
                    continue
                hx, hy = witness.at(x, i), witness.at(y, j)
                if hx != hy and not near_t(hx, hy):
                    return (f"images of near product points ({x!r},{i}) and "
                            f"({y!r},{j}) are far: {hx!r} vs {hy!r}")
    return None


def constant_homotopy(f: FiniteMap, k: int = 8,
                      rel: Iterable[PointId] = ()) -> HomotopyWitness:
    """The witness H(x, i) = f(x), showing f is homotopic to itself."""
    entries = {(pid, i): f(pid) for pid in f.source.ids for i in range(k + 1)}
    return HomotopyWitness.from_dict(f.source, f.target, k, entries, frozenset(rel))


def reverse_homotopy(witness: HomotopyWitness) -> HomotopyWitness:
    """Run the witness backwards in time: shows g ~ f from f ~ g."""
    entries = {
        (pid, witness.k - i): v for (pid, i), v in witness.table}
    return HomotopyWitness.from_dict(
        witness.source, witness.target, witness.k, entries, witness.rel)


def concatenate_homotopies(first: HomotopyWitness,
                           second: HomotopyWitness) -> HomotopyWitness:
    """Splice two witnesses in sequence: the first runs on the early half
    of the time grid, the second on the late half.  Their meeting rows
    must agree."""
    if first.source != second.source or first.target != second.target:
        raise SpaceMismatchError("concatenate: witnesses live on different spaces")
    for pid in sorted(first.source.ids, key=str):
        if first.at(pid, first.k) != second.at(pid, 0):
            raise ValueError(
                f"midpoint mismatch at point {pid!r}: first ends at "
                f"{first.at(pid, first.k)!r}, second starts at {second.at(pid, 0)!r}")
    entries = {}
    for pid in first.source.ids:
        for i in range(first.k + 1):
            entries[(pid, i)] = first.at(pid, i)
        for i in range(second.k + 1):
            entries[(pid, first.k + i)] = second.at(pid, i)
    return HomotopyWitness.from_dict(
        first.source, first.target, first.k + second.k, entries,
        first.rel & second.rel)


def post_compose_witness(h: FiniteMap, witness: HomotopyWitness) -> HomotopyWitness:
    """Apply a map after every table entry: turns a witness for f ~ g
    into one for (h after f) ~ (h after g)."""
    if h.source != witness.target:
        raise SpaceMismatchError("post-compose: map source is not the witness target")
    entries = {key: h(v) for key, v in witness.table}
    return HomotopyWitness.from_dict(
        witness.source, h.target, witness.k, entries, witness.rel)


def pre_compose_witness(witness: HomotopyWitness, e: FiniteMap) -> HomotopyWitness:
    """Reparametrize the source through a map: turns a witness for f ~ g
    into one for (f after e) ~ (g after e)."""
    if e.target != witness.source:
        raise SpaceMismatchError("pre-compose: map target is not the witness source")
    entries = {
        (pid, i): witness.at(e(pid), i)
        for pid in e.source.ids for i in range(witness.k + 1)}
    rel = frozenset(pid for pid in e.source.ids if e(pid) in witness.rel)
    return HomotopyWitness.from_dict(
        e.source, witness.target, witness.k, entries, rel)


def straight_line_homotopy(f: FiniteMap, g: FiniteMap, k: int = 8) -> HomotopyWitness:
    """Interpolate each point's image along the straight segment and snap
    to the nearest target point at each time step.  A constructor only:
    the result still has to pass verification."""
    if f.source != g.source or f.target != g.target:
        raise SpaceMismatchError("straight line: maps live on different spaces")
    target_pts = [(p.id, p.require_coords()) for p in f.target.points]
    entries = {}
    for pid in f.source.ids:
        p0 = f.target.point(f(pid)).require_coords()
        p1 = f.target.point(g(pid)).require_coords()
        for i in range(k + 1):
            t = i / k
            x = (1 - t) * p0[0] + t * p1[0]
            y = (1 - t) * p0[1] + t * p1[1]
            entries[(pid, i)] = min(
                target_pts,
                key=lambda item: (math.dist(item[1], (x, y)), str(item[0])))[0]
    return HomotopyWitness.from_dict(f.source, f.target, k, entries)


class ConstantKind(Enum):
    ORDINARY = "ordinary"
    DEGENERATE = "degenerate"
    NON_CONSTANT = "non-constant"


@dataclass(frozen=True)
class ConstantClassification:
    kind: ConstantKind
    image: frozenset[PointId]
    single_description: bool


def classify_constant(
    d: FiniteMap,
    probe: Optional[Probe] = None,
    epsilon: float = 0.0,
) -> ConstantClassification:
    """Ordinary constant: one image point.  Degenerate constant: several
    image points sharing one description (within ``epsilon``).  Anything
    else is not constant in either sense."""
    image = d.image()
    single = single_description(d.target, image, probe, epsilon)
    if len(image) == 1:
        kind = ConstantKind.ORDINARY
    elif single:
        kind = ConstantKind.DEGENERATE
    else:
        kind = ConstantKind.NON_CONSTANT
    return ConstantClassification(kind, image, single)


@dataclass(frozen=True)
class ContractibilityReport:
    contractible: bool
    mode: str
    certificate: Optional[HomotopyWitness]
    reason: str

    def __bool__(self) -> bool:
        return self.contractible


CONTRACTIBILITY_MODES = ("degenerate-descriptive", "descriptive", "grid-topological")


def contraction_certificate(
    space: FiniteProximitySpace,
    base: Optional[PointId] = None,
    k: int = 1,
) -> HomotopyWitness:
    """The witness contracting the identity to the constant map at
    ``base``: points stay put at time 0 and sit at the base afterwards.
    It verifies descriptively exactly when the space has one description."""
    base = space.points[0].id if base is None else base
    space.point(base)
    entries = {
        (pid, i): (pid if i == 0 else base)
        for pid in space.ids for i in range(k + 1)}
    return HomotopyWitness.from_dict(space, space, k, entries)


def contractibility(
    subject,
    mode: str = "descriptive",
    epsilon: float = 0.0,
    probe: Optional[Probe] = None,
    witness: Optional[HomotopyWitness] = None,
    base: Optional[PointId] = None,
) -> ContractibilityReport:
    """Contractibility check in one of three senses.

    grid-topological takes a pixel set and decides via its Betti numbers.
    degenerate-descriptive takes a space and holds exactly when all
    descriptions agree within ``epsilon``; the contraction witness is
    returned as the certificate.  descriptive accepts the degenerate
    certificate or a user-supplied witness; with neither it reports "no
    certificate found" rather than asserting non-contractibility.
    """
    if mode == "grid-topological":
        if not isinstance(subject, PixelSet):
            raise TypeError("grid-topological mode needs a pixel set")
        b0, b1 = grid_homology(subject)
        return ContractibilityReport(
            is_grid_contractible(subject), mode, None,
            f"grid homology ({b0}, {b1})")
    if not isinstance(subject, FiniteProximitySpace):
        raise TypeError(f"mode {mode!r} needs a proximity space")
    if mode not in ("degenerate-descriptive", "descriptive"):
        raise ValueError(
            f"unknown mode {mode!r}; expected one of {CONTRACTIBILITY_MODES}")
    degenerate = single_description(subject, subject.ids, probe, epsilon)
    if degenerate:
        cert = contraction_certificate(subject, base)
        report = verify_homotopy(
            cert, cert.start_map(), cert.end_map(), mode="descriptive",
            epsilon=epsilon, probe_source=probe, probe_target=probe)
        if not report.ok:
            raise AssertionError(
                f"contraction certificate failed verification: {report.failures}")
        return ContractibilityReport(
            True, mode, cert, "single description class; contraction verified")
    if mode == "degenerate-descriptive":
        return ContractibilityReport(
            False, mode, None, "descriptions differ; no degenerate certificate")
    if witness is not None:
        start, end = witness.start_map(), witness.end_map()
        identity = FiniteMap.identity(subject)
        if start != identity:
            return ContractibilityReport(
                False, mode, None, "supplied witness does not start at the identity")
        if not classify_constant(end, probe, epsilon).single_description:
            return ContractibilityReport(
                False, mode, None, "supplied witness does not end at a constant map")
        report = verify_homotopy(
            witness, start, end, mode="descriptive", epsilon=epsilon,
            probe_source=probe, probe_target=probe)
        if report.ok:
            return ContractibilityReport(True, mode, witness, "user witness verified")
        return ContractibilityReport(
            False, mode, None, f"user witness failed: {report.failures[0]}")
    return ContractibilityReport(False, mode, None, "no certificate found")
