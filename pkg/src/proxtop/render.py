"""SVG rendering of region overlays and persistence barcodes.

Output is byte-deterministic: fixed backend, fixed hash salt, no
embedded creation date.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "proxtop"

from matplotlib import pyplot as plt
from matplotlib.patches import Rectangle

from .grid import RegionPartition
from .persistence import PersistenceTrack

REGION_STYLE = (
    ("exterior", "#dce6f2"),
    ("interior", "#f2c84b"),
    ("boundary", "#30303a"),
)


def _save(fig, path: Union[str, Path]) -> None:
    fig.savefig(str(path), format="svg", metadata={"Date": None})
    plt.close(fig)


def render_regions(
    partition: RegionPartition, path: Union[str, Path]
) -> None:
    """One colored square per pixel, in three labeled region layers."""
    w, h = partition.boundary.window
    fig, ax = plt.subplots(figsize=(6, 6 * h / w))
    for name, color in REGION_STYLE:
        pixels = getattr(partition, name).pixels
        for x, y in sorted(pixels):
            ax.add_patch(Rectangle((x, y), 1, 1, facecolor=color,
                                   edgecolor="none"))
        if pixels:
            ax.plot([], [], marker="s", linestyle="none",
                    color=color, label=name)
    ax.set_xlim(0, w)
    ax.set_ylim(0, h)
    ax.set_aspect("equal")
    ax.set_xticks(range(0, w + 1, max(1, w // 8)))
    ax.set_yticks(range(0, h + 1, max(1, h // 8)))
    ax.legend(loc="upper right", fontsize="small")
    _save(fig, path)


def render_barcode(
    tracks: Sequence[PersistenceTrack], path: Union[str, Path]
) -> None:
    """One horizontal bar row per track, in birth order, top first."""
    fig, ax = plt.subplots(figsize=(7, 1 + 0.5 * max(1, len(tracks))))
    labels = []
    for row, track in enumerate(tracks):
        y = len(tracks) - 1 - row
        labels.append(f"track {row} (rank {track.descriptor.rank})")
        for start, end in track.intervals:
            if end > start:
                ax.hlines(y, start, end, colors="#3b6ea5", linewidth=6)
            else:
                ax.plot([start], [y], marker="|", markersize=12,
                        color="#3b6ea5")
    ax.set_yticks([len(tracks) - 1 - r for r in range(len(tracks))])
    ax.set_yticklabels(labels)
    ax.set_ylim(-0.5, max(0.5, len(tracks) - 0.5))
    ax.set_xlabel("time (s)")
    ax.margins(x=0.05)
    _save(fig, path)
