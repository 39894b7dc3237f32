"""Cycle structure validation and drawn-boundary region checks."""

from __future__ import annotations

import random

import pytest

from proxtop import (
    CycleSystem,
    FiniteProximitySpace,
    HCycle,
    HPath,
    MetricGap,
    MultiCycle,
    PathClass,
    Point,
    path_description,
    paths_descriptively_close,
    system_boundary_check,
    validate_cycle_system,
    validate_hcyc,
    validate_hpath,
    validate_multi_cycle,
)


def coord_space(coords, tau=4.0, features=None):
    points = tuple(
        Point(f"{x},{y}", coords=(x, y),
              features=None if features is None else features.get((x, y)))
        for x, y in coords)
    return FiniteProximitySpace(points, MetricGap(tau))


def pts(space, *coords):
    return tuple(space.point(f"{x},{y}") for x, y in coords)


SQUARE = [(1, 1), (5, 1), (5, 5), (1, 5)]
SQUARE2 = [(5, 5), (9, 5), (9, 9), (5, 9)]
SQUARE3 = [(9, 9), (13, 9), (13, 13), (9, 13)]


@pytest.fixture
def sq_space():
    return coord_space(SQUARE + SQUARE2[1:] + SQUARE3[1:] + [(4, 3), (3, 3)])


class TestHPath:
    def test_needs_a_vertex(self):
        with pytest.raises(ValueError):
            HPath(())

    def test_endpoints_and_closure(self, sq_space):
        p = HPath(pts(sq_space, (1, 1), (5, 1), (5, 5)))
        assert p.endpoints[0].id == "1,1"
        assert not p.is_closed
        assert p.reversed().endpoints[0].id == "5,5"

    def test_validate_near_steps(self, sq_space):
        good = HPath(pts(sq_space, (1, 1), (5, 1)))
        assert validate_hpath(sq_space, good).ok
        far = HPath(pts(sq_space, (1, 1), (9, 5)))
        report = validate_hpath(sq_space, far)
        assert not report.ok
        assert "far" in report.diagnostics[0]

    def test_foreign_vertex(self, sq_space):
        stranger = Point("zz", coords=(2.0, 2.0))
        report = validate_hpath(sq_space, HPath((stranger,)))
        assert not report.ok
        assert "not in the space" in report.diagnostics[0]


class TestValidateHcyc:
    def test_square_is_valid(self, sq_space):
        report = validate_hcyc(sq_space, HCycle(pts(sq_space, *SQUARE)))
        assert report.ok
        assert report.interior_size == 9
        assert report.partition.passed

    def test_open_path_rejected(self, sq_space):
        p = HPath(pts(sq_space, (1, 1), (5, 1), (5, 5)))
        report = validate_hcyc(sq_space, p)
        assert not report.ok
        assert "end vertices" in report.diagnostics[0]

    def test_closed_path_accepted(self, sq_space):
        p = HPath(pts(sq_space, (1, 1), (5, 1), (5, 5), (1, 5), (1, 1)))
        assert p.is_closed
        assert validate_hcyc(sq_space, p).ok

    def test_repeated_vertex_rejected(self, sq_space):
        cyc = HCycle(pts(sq_space, (1, 1), (5, 1), (1, 1), (1, 5)))
        report = validate_hcyc(sq_space, cyc)
        assert not report.ok
        assert "repeats" in report.diagnostics[0]

    def test_two_vertices_rejected(self, sq_space):
        cyc = HCycle(pts(sq_space, (1, 1), (5, 1)))
        report = validate_hcyc(sq_space, cyc)
        assert not report.ok
        assert "at least 3" in report.diagnostics[0]

    def test_collinear_cycle_has_void_interior(self):
        sp = coord_space([(1, 1), (3, 3), (5, 5)], tau=6.0)
        report = validate_hcyc(sp, HCycle(pts(sp, (1, 1), (3, 3), (5, 5))))
        assert not report.ok
        assert "void interior" in report.diagnostics[0]

    def test_far_consecutive_vertices_rejected(self):
        sp = coord_space(SQUARE, tau=3.0)
        report = validate_hcyc(sp, HCycle(pts(sp, *SQUARE)))
        assert not report.ok
        assert "far" in report.diagnostics[0]


class TestValidateMultiCycle:
    def test_parallel_paths_accepted(self, sq_space):
        a, b, c, d = pts(sq_space, *SQUARE)
        detour = HPath(pts(sq_space, (1, 1), (4, 3), (5, 1)))
        edges = (
            PathClass((a, b), (HPath((a, b)), detour)),
            PathClass((b, c), (HPath((b, c)),)),
            PathClass((c, d), (HPath((c, d)),)),
            PathClass((d, a), (HPath((d, a)),)),
        )
        report = validate_multi_cycle(sq_space, MultiCycle((a, b, c, d), edges))
        assert report.ok, report.diagnostics

    def test_empty_class_rejected_at_construction(self, sq_space):
        a, b = pts(sq_space, (1, 1), (5, 1))
        with pytest.raises(ValueError, match="member"):
            PathClass((a, b), ())

    def test_mismatched_endpoints_rejected(self, sq_space):
        a, b, c, d = pts(sq_space, *SQUARE)
        edges = (
            PathClass((a, c), (HPath((a, c)),)),
            PathClass((b, c), (HPath((b, c)),)),
            PathClass((c, d), (HPath((c, d)),)),
            PathClass((d, a), (HPath((d, a)),)),
        )
        report = validate_multi_cycle(sq_space, MultiCycle((a, b, c, d), edges))
        assert not report.ok
        assert any("do not match" in d for d in report.diagnostics)

    def test_member_with_wrong_run_rejected(self, sq_space):
        a, b, c, d = pts(sq_space, *SQUARE)
        edges = (
            PathClass((a, b), (HPath((a, d, b)),)),
            PathClass((b, c), (HPath((b, c)),)),
            PathClass((c, d), (HPath((c, d)),)),
            PathClass((d, a), (HPath((d, a)),)),
        )
        report = validate_multi_cycle(sq_space, MultiCycle((a, b, c, d), edges))
        assert report.ok or report.diagnostics
        # the member runs a-d-b which does start at a and end at b, but
        # the leg d-b has length sqrt(32) > tau, so the path itself fails
        assert any("far" in diag for diag in report.diagnostics)

    def test_singleton_classes_match_plain_cycle(self):
        rng = random.Random(6)
        for coords, tau in ((SQUARE, 4.0), (SQUARE, 3.0),
                            ([(1, 1), (3, 3), (5, 5)], 3.0)):
            sp = coord_space(coords, tau=tau)
            cyc = HCycle(pts(sp, *coords))
            plain = validate_hcyc(sp, cyc)
            multi = validate_multi_cycle(sp, MultiCycle.from_cycle(cyc))
            assert plain.ok == multi.ok


class TestValidateCycleSystem:
    def test_two_squares_sharing_a_corner(self, sq_space):
        system = CycleSystem((
            HCycle(pts(sq_space, *SQUARE)),
            HCycle(pts(sq_space, *SQUARE2)),
        ))
        report = validate_cycle_system(sq_space, system)
        assert report.ok
        assert report.clasp == "5,5"
        assert report.junctions == ("5,5",)

    def test_shared_edge_rejected(self):
        sp = coord_space([(1, 1), (5, 1), (5, 5), (1, 5), (9, 1), (9, 5)])
        system = CycleSystem((
            HCycle(pts(sp, (1, 1), (5, 1), (5, 5), (1, 5))),
            HCycle(pts(sp, (5, 1), (9, 1), (9, 5), (5, 5))),
        ))
        report = validate_cycle_system(sp, system)
        assert not report.ok
        assert any("share 2" in d for d in report.diagnostics)

    def test_disjoint_rejected(self):
        sp = coord_space(SQUARE + SQUARE3)
        system = CycleSystem((
            HCycle(pts(sp, *SQUARE)),
            HCycle(pts(sp, *SQUARE3)),
        ))
        report = validate_cycle_system(sp, system)
        assert not report.ok
        assert any("no common vertex" in d for d in report.diagnostics)

    def test_single_cycle_rejected(self, sq_space):
        report = validate_cycle_system(
            sq_space, CycleSystem((HCycle(pts(sq_space, *SQUARE)),)))
        assert not report.ok
        assert "at least 2" in report.diagnostics[0]

    def test_bad_mode_rejected(self, sq_space):
        with pytest.raises(ValueError, match="mode"):
            CycleSystem((HCycle(pts(sq_space, *SQUARE)),
                         HCycle(pts(sq_space, *SQUARE2))), mode="ring")

    def test_chain_mode_necklace(self, sq_space):
        system = CycleSystem((
            HCycle(pts(sq_space, *SQUARE)),
            HCycle(pts(sq_space, *SQUARE2)),
            HCycle(pts(sq_space, *SQUARE3)),
        ), mode="chain")
        report = validate_cycle_system(sq_space, system)
        assert report.ok
        assert report.junctions == ("5,5", "9,9")
        strict = validate_cycle_system(sq_space, system, mode="global")
        assert not strict.ok

    def test_chain_mode_rejects_nonconsecutive_overlap(self):
        # third cycle loops back around to touch the first at (1,5)
        third = [(9, 9), (4, 9), (1, 9), (1, 5)]
        sp = coord_space(SQUARE + SQUARE2[1:] + third[1:3], tau=10.0)
        system = CycleSystem((
            HCycle(pts(sp, *SQUARE)),
            HCycle(pts(sp, *SQUARE2)),
            HCycle(pts(sp, *third)),
        ), mode="chain")
        report = validate_cycle_system(sp, system)
        assert not report.ok
        assert any("non-consecutive" in d for d in report.diagnostics)


class TestPathDescriptions:
    def make_space(self):
        feats = {(1, 1): (0.0,), (5, 1): (0.0,), (5, 5): (1.0,), (1, 5): (0.0,)}
        return coord_space(list(feats), tau=6.0, features=feats)

    def test_description_collects_vertex_features(self):
        sp = self.make_space()
        h = HPath(pts(sp, (1, 1), (5, 1), (5, 5)))
        assert path_description(None, h) == frozenset({(0.0,), (1.0,)})

    def test_identical_paths_close(self):
        sp = self.make_space()
        h = HPath(pts(sp, (1, 1), (5, 1)))
        assert paths_descriptively_close(None, h, h)

    def test_distinct_paths_over_constant_region_close(self):
        sp = self.make_space()
        h = HPath(pts(sp, (1, 1), (5, 1)))
        k = HPath(pts(sp, (1, 1), (1, 5)))
        assert paths_descriptively_close(None, h, k)

    def test_disjoint_feature_ranges_far(self):
        sp = self.make_space()
        h = HPath(pts(sp, (1, 1), (5, 1)))
        k = HPath(pts(sp, (5, 5),))
        assert not paths_descriptively_close(None, h, k)
        assert paths_descriptively_close(None, h, k, epsilon=1.0)


class TestSystemBoundaryCheck:
    def test_single_cycle_matches_jordan(self, sq_space):
        report = system_boundary_check(HCycle(pts(sq_space, *SQUARE)))
        assert report.passed
        assert report.expected_interiors == 1
        assert report.junction_pixels == frozenset()

    def test_two_cycle_clasp_system(self, sq_space):
        system = CycleSystem((
            HCycle(pts(sq_space, *SQUARE)),
            HCycle(pts(sq_space, *SQUARE2)),
        ))
        report = system_boundary_check(system)
        assert len(report.partition.interior_regions) == 2
        assert len(report.partition.exterior_regions) == 1
        assert report.region_counts_ok
        assert report.common_boundary
        assert report.passed
        assert report.junction_pixels == frozenset({(5, 5)})

    def test_multicycle_checked_on_outer_boundary(self, sq_space):
        a, b, c, d = pts(sq_space, *SQUARE)
        detour = HPath(pts(sq_space, (1, 1), (3, 3), (5, 1)))
        edges = (
            PathClass((a, b), (HPath((a, b)), detour)),
            PathClass((b, c), (HPath((b, c)),)),
            PathClass((c, d), (HPath((c, d)),)),
            PathClass((d, a), (HPath((d, a)),)),
        )
        mc = MultiCycle((a, b, c, d), edges)
        report = system_boundary_check(mc)
        assert report.checked.pixels < report.drawn.pixels
        assert report.passed, report.partition

    def test_open_path_fails_region_counts(self, sq_space):
        p = HPath(pts(sq_space, (1, 1), (5, 1)))
        report = system_boundary_check(p)
        assert not report.passed
        assert not report.region_counts_ok
