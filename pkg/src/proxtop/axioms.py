"""Nearness-axiom checking over every subset pair and union triple.

The checks run on the point-level neighbour bitmasks of a pointwise-lifted
relation.  Set nearness of a lift is ``union(mask[a] for a in A) & B != 0``
once each mask contains its own point, which turns the quantifiers over
subsets into bit algebra:

* symmetry over all subset pairs holds iff the masks are symmetric
  (a violating asymmetric point pair is itself a violating singleton pair);
* the overlap axiom over all overlapping pairs holds iff every mask
  contains its own point (nearness is monotone in both arguments);
* the union axiom quantifies over triples (A, B, C), but for a fixed A
  every far set is contained in the complement of NEAR(A), so checking
  the maximal far pair (F, F) with F = ~NEAR(A) covers all of them.

Each axiom is thus decided exactly, in O(n^2 + 2^n) per space, for any
lifted relation.  Above ``exhaustive_limit`` points the union and empty-set
scans fall back to uniform random subsets under ``budget``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .spaces import FiniteProximitySpace, PointId

Witness = Optional[tuple]


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    passed: bool
    witness: Witness = None
    method: str = "exhaustive"

    def describe(self) -> str:
        status = "pass" if self.passed else "FAIL"
        line = f"{self.axiom}: {status} ({self.method})"
        if self.witness is not None:
            line += f" witness={self.witness!r}"
        return line


@dataclass(frozen=True)
class AxiomReport:
    """Verdicts for the four nearness axioms plus the point-symmetry
    condition, which is reported separately rather than required."""

    results: tuple[AxiomResult, ...]
    point_symmetry: AxiomResult

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    def summary(self) -> str:
        lines = [r.describe() for r in self.results]
        lines.append(self.point_symmetry.describe())
        return "\n".join(lines)


def point_masks(space: FiniteProximitySpace) -> tuple[list[PointId], list[int]]:
    """Neighbour bitmask per point: bit j of masks[i] is set iff
    {ids[i]} is near {ids[j]}.  Bit i is always set (overlap)."""
    ids = [p.id for p in space.points]
    n = len(ids)
    masks = [0] * n
    for i in range(n):
        for j in range(n):
            if space.point_pair_near(ids[i], ids[j]):
                masks[i] |= 1 << j
    return ids, masks


def _near_mask(masks: Sequence[int], a: int) -> int:
    out = 0
    i = 0
    while a:
        if a & 1:
            out |= masks[i]
        a >>= 1
        i += 1
    return out


def _decode(ids: Sequence[PointId], bits: int) -> tuple[PointId, ...]:
    return tuple(ids[i] for i in range(len(ids)) if bits >> i & 1)


def check_lifted_axioms(
    ids: Sequence[PointId],
    masks: Sequence[int],
    axiom_names: Sequence[str] = ("empty-set", "symmetry", "overlap", "union"),
    budget: int = 20000,
    exhaustive_limit: int = 12,
    rng: random.Random | None = None,
) -> AxiomReport:
    """Check the four axioms of a lifted relation given by neighbour masks."""
    n = len(ids)
    rng = rng or random.Random(0)
    exhaustive = n <= exhaustive_limit
    full = (1 << n) - 1
    subsets: Iterable[int]
    if exhaustive:
        subsets = range(1 << n)
        method = "exhaustive"
    else:
        subsets = [rng.getrandbits(n) for _ in range(budget)]
        method = f"sampled({budget})"

    empty_name, sym_name, overlap_name, union_name = axiom_names

    def set_near(a: int, b: int) -> bool:
        return bool(_near_mask(masks, a) & b)

    # Empty set: A near {} must fail for every A.
    empty_witness = None
    for a in subsets:
        if set_near(a, 0):
            empty_witness = (_decode(ids, a), ())
            break
    empty_res = AxiomResult(empty_name, empty_witness is None, empty_witness, method)

    # Symmetry over all subset pairs reduces to mask symmetry.
    sym_witness = None
    for i in range(n):
        for j in range(n):
            if (masks[i] >> j & 1) and not (masks[j] >> i & 1):
                sym_witness = ((ids[i],), (ids[j],))
                break
        if sym_witness:
            break
    sym_res = AxiomResult(sym_name, sym_witness is None, sym_witness, "pointwise-reduction")

    # Overlap over all overlapping pairs reduces to mask reflexivity.
    overlap_witness = None
    for i in range(n):
        if not (masks[i] >> i & 1):
            overlap_witness = ((ids[i],), (ids[i],))
            break
    overlap_res = AxiomResult(
        overlap_name, overlap_witness is None, overlap_witness, "pointwise-reduction")

    # Union: for each A test the maximal far pair (F, F) with F = ~NEAR(A),
    # whose union dominates B | C for every far B and C.
    union_witness = None
    for a in subsets:
        far = full & ~_near_mask(masks, a)
        if far and set_near(a, far):
            union_witness = (_decode(ids, a), _decode(ids, far), _decode(ids, far))
            break
    union_res = AxiomResult(union_name, union_witness is None, union_witness, method)

    star = AxiomResult(
        "point-symmetry", sym_witness is None, sym_witness, "pointwise")
    return AxiomReport((empty_res, sym_res, overlap_res, union_res), star)


def check_cech_axioms(
    space: FiniteProximitySpace,
    budget: int = 20000,
    rng: random.Random | None = None,
) -> AxiomReport:
    """Verify the empty-set, symmetry, overlap and union axioms of the
    space's nearness relation, over every subset pair and triple.

    The point-symmetry condition (x near {y} implies y near {x}) is
    checked as well but reported separately; the four axioms alone
    already decide ``all_passed``.
    """
    ids, masks = point_masks(space)
    return check_lifted_axioms(ids, masks, budget=budget, rng=rng)
