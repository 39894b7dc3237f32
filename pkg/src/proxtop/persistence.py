"""Shape persistence across timed frames, judged by Betti descriptors.

Each frame holds one shape (a cycle structure or a pixel set).  Its
descriptor is the pair of Betti numbers plus the free-group rank of the
shape's 1-skeleton; an optional feature summary rides along.  Tracks
record when descriptors appear, disappear, and reappear over the frame
sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .cycles import CycleSystem, HCycle, HPath, MultiCycle
from .descriptive import Description, feature_distance
from .errors import InvalidShapeError
from .grid import PixelSet, grid_homology
from .nerve import cycles_one_skeleton, free_group_presentation

Shape = Union[CycleSystem, MultiCycle, HCycle, HPath, PixelSet]


@dataclass(frozen=True)
class Frame:
    """One timed observation of a shape."""

    id: str
    time: float
    shape: Shape
    features: Optional[Description] = None

    def __post_init__(self):
        object.__setattr__(self, "time", float(self.time))
        if self.time < 0:
            raise ValueError(f"frame {self.id!r} has negative time")
        if self.features is not None:
            object.__setattr__(
                self, "features",
                tuple(float(v) for v in self.features))


@dataclass(frozen=True)
class FrameDescriptor:
    """Betti numbers, free-group rank, and optional feature summary."""

    betti: tuple[int, int]
    rank: int
    features: Optional[Description] = None


def frame_descriptor(frame: Frame) -> FrameDescriptor:
    """Descriptor of the frame's shape.

    Pixel sets are judged by grid homology; cycle structures by their
    1-skeleton, where the rank is the free-group generator count and
    equals the independent-cycle number.
    """
    shape = frame.shape
    if isinstance(shape, PixelSet):
        if not shape.pixels:
            raise InvalidShapeError(f"frame {frame.id!r} has an empty shape")
        b0, b1 = grid_homology(shape)
        return FrameDescriptor((b0, b1), b1, frame.features)
    try:
        verts, edges = cycles_one_skeleton(shape)
    except (AttributeError, TypeError):
        raise InvalidShapeError(
            f"frame {frame.id!r} holds no known shape: {type(shape).__name__}")
    try:
        pres = free_group_presentation(verts, edges)
    except ValueError as exc:
        raise InvalidShapeError(f"frame {frame.id!r}: {exc}")
    vs = set(verts)
    es = {(u, v) if repr(u) <= repr(v) else (v, u) for u, v in edges}
    components = pres.rank - len(es) + len(vs)
    return FrameDescriptor((components, pres.rank), pres.rank, frame.features)


def descriptors_near(
    d1: FrameDescriptor,
    d2: FrameDescriptor,
    tol: int = 0,
    feature_tolerance: float = 0.0,
) -> bool:
    """Rank difference within ``tol``; feature summaries, when both are
    present, within ``feature_tolerance``.  Reflexive and symmetric."""
    if tol < 0 or feature_tolerance < 0:
        raise ValueError("tolerances must be nonnegative")
    if abs(d1.rank - d2.rank) > tol:
        return False
    if d1.features is not None and d2.features is not None:
        return feature_distance(d1.features, d2.features) <= feature_tolerance
    return True


@dataclass(frozen=True)
class PersistenceTrack:
    """Frame spans over which one descriptor stayed matched."""

    descriptor: FrameDescriptor
    intervals: tuple[tuple[float, float], ...]

    @property
    def birth(self) -> float:
        return self.intervals[0][0]

    @property
    def lifetime(self) -> float:
        return sum(end - start for start, end in self.intervals)


def track(
    frames: Sequence[Frame],
    tol: int = 0,
    gap: int = 0,
    feature_tolerance: float = 0.0,
) -> list[PersistenceTrack]:
    """Greedy forward matching of frame descriptors into tracks.

    Each frame's descriptor joins the oldest open track whose birth
    descriptor is near it; otherwise it opens a new track.  A track stays
    open while it has missed at most ``gap`` consecutive frames, and a
    match after a miss starts a new interval.  The result only depends on
    descriptor values and frame order, so it is deterministic and
    unchanged by shifting all times equally.
    """
    if gap < 0:
        raise ValueError("gap must be nonnegative")
    for prev, cur in zip(frames, frames[1:]):
        if cur.time <= prev.time:
            raise ValueError(
                f"frames out of order: {cur.id!r} at {cur.time} follows "
                f"{prev.id!r} at {prev.time}")
    records: list[dict] = []
    for i, frame in enumerate(frames):
        d = frame_descriptor(frame)
        match = None
        for rec in records:
            if i - rec["last"] - 1 > gap:
                continue
            if descriptors_near(rec["descriptor"], d, tol, feature_tolerance):
                match = rec
                break
        if match is None:
            records.append({
                "descriptor": d,
                "intervals": [[frame.time, frame.time]],
                "last": i,
            })
            continue
        if match["last"] == i - 1:
            match["intervals"][-1][1] = frame.time
        else:
            match["intervals"].append([frame.time, frame.time])
        match["last"] = i
    return [
        PersistenceTrack(
            rec["descriptor"],
            tuple((s, e) for s, e in rec["intervals"]))
        for rec in records]


def report(tracks: Sequence[PersistenceTrack]) -> dict:
    """Table of tracks in birth order, ready for JSON or CSV emission."""
    rows = []
    for tid, t in enumerate(tracks):
        rows.append({
            "track": tid,
            "betti": list(t.descriptor.betti),
            "rank": t.descriptor.rank,
            "features": (None if t.descriptor.features is None
                         else list(t.descriptor.features)),
            "intervals": [[s, e] for s, e in t.intervals],
            "lifetime": t.lifetime,
        })
    return {"tracks": rows}
