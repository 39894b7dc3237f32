"""Covers, nerves, Betti numbers, free groups, and comparison angles."""

from __future__ import annotations

import math
import random
from itertools import combinations

import numpy as np
import pytest

from proxtop import (
    AlexandrovQuadruple,
    Cover,
    CycleSystem,
    DegenerateTriangleError,
    ExplicitRelation,
    FiniteProximitySpace,
    ForeignPointError,
    HCycle,
    HPath,
    InvalidShapeError,
    MetricGap,
    MissingProbeError,
    NerveComplex,
    Point,
    alexandrov_quadruple_check,
    betti,
    build_nerve,
    check_good_cover,
    comparison_angle,
    cycles_one_skeleton,
    descriptive_intersection_many,
    free_group_presentation,
    nerve_vs_union_check,
)

from _gen import random_explicit_space


def id_space(n, features=None):
    pts = tuple(
        Point(i, coords=(float(i), 0.0),
              features=None if features is None else features[i])
        for i in range(n))
    return FiniteProximitySpace(pts, ExplicitRelation.symmetric([]))


def grid_space(coords, tau=1.5):
    pts = tuple(Point(f"{x},{y}", coords=(x, y)) for x, y in coords)
    return FiniteProximitySpace(pts, MetricGap(tau))


class TestCover:
    def test_empty_cover_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            Cover(id_space(2), ())

    def test_empty_element_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            Cover(id_space(2), (frozenset({0, 1}), frozenset()))

    def test_foreign_ids_rejected(self):
        with pytest.raises(ForeignPointError):
            Cover(id_space(2), (frozenset({0, 1, 7}),))

    def test_union_must_cover(self):
        with pytest.raises(ValueError, match="misses"):
            Cover(id_space(3), (frozenset({0, 1}),))


class TestBuildNerve:
    def test_shared_vertex_gives_one_edge(self):
        cov = Cover(id_space(3), (frozenset({0, 1}), frozenset({1, 2})))
        nerve = build_nerve(cov)
        assert nerve.simplices == ((0,), (1,), (0, 1))

    def test_pairwise_but_no_triple_gives_hollow_triangle(self):
        cov = Cover(id_space(3), (
            frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 0})))
        nerve = build_nerve(cov)
        assert nerve.edges == ((0, 1), (0, 2), (1, 2))
        assert nerve.triangles == ()
        assert betti(nerve) == (1, 1)

    def test_common_point_fills_the_triangle(self):
        cov = Cover(id_space(3), (
            frozenset({0, 1}), frozenset({0, 2}), frozenset({0, 1, 2})))
        nerve = build_nerve(cov)
        assert nerve.triangles == ((0, 1, 2),)
        assert betti(nerve) == (1, 0)

    def test_descriptive_edge_between_disjoint_elements(self):
        feats = {0: (1.0,), 1: (1.0,), 2: (3.0,)}
        cov = Cover(id_space(3, feats), (
            frozenset({0}), frozenset({1}), frozenset({2})))
        assert build_nerve(cov, mode="plain").edges == ()
        nerve = build_nerve(cov, mode="descriptive")
        assert nerve.edges == ((0, 1),)

    def test_descriptive_triangle_needs_pairwise_close_choice(self):
        feats = {0: (0.0,), 1: (0.4,), 2: (0.8,)}
        cov = Cover(id_space(3, feats), (
            frozenset({0}), frozenset({1}), frozenset({2})))
        half = build_nerve(cov, mode="descriptive", epsilon=0.5)
        assert half.edges == ((0, 1), (1, 2))
        assert half.triangles == ()
        full = build_nerve(cov, mode="descriptive", epsilon=0.8)
        assert full.triangles == ((0, 1, 2),)
        sp = cov.space
        assert descriptive_intersection_many(
            sp, cov.elements, epsilon=0.8) == frozenset({0, 1, 2})
        assert descriptive_intersection_many(
            sp, cov.elements, epsilon=0.5) == frozenset()

    def test_unknown_mode_rejected(self):
        cov = Cover(id_space(2), (frozenset({0, 1}),))
        with pytest.raises(ValueError, match="mode"):
            build_nerve(cov, mode="fast")

    def test_plain_simplices_subset_of_descriptive(self):
        rng = random.Random(11)
        for _ in range(20):
            space = random_explicit_space(
                rng, n=rng.randint(3, 7), with_features=True)
            ids = sorted(space.ids, key=str)
            elements = []
            for _ in range(rng.randint(2, 4)):
                k = rng.randint(1, len(ids))
                elements.append(frozenset(rng.sample(ids, k)))
            covered = frozenset().union(*elements)
            leftovers = frozenset(ids) - covered
            if leftovers:
                elements[0] = elements[0] | leftovers
            cov = Cover(space, tuple(elements))
            plain = set(build_nerve(cov, "plain").simplices)
            descr = set(build_nerve(cov, "descriptive", epsilon=0.0).simplices)
            assert plain <= descr


def brute_cycle_rank(edges):
    """Count even-degree edge subsets; the cycle space has 2^rank of them."""
    m = len(edges)
    count = 0
    for mask in range(1 << m):
        deg: dict = {}
        for i in range(m):
            if mask >> i & 1:
                u, v = edges[i]
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
        if all(d % 2 == 0 for d in deg.values()):
            count += 1
    rank = count.bit_length() - 1
    assert 1 << rank == count
    return rank


def brute_components(vertices, edges):
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in vertices})


def numpy_gf2_rank(rows, width):
    if not rows or width == 0:
        return 0
    m = np.zeros((len(rows), width), dtype=np.uint8)
    for i, row in enumerate(rows):
        for j in row:
            m[i, j] = 1
    rank = 0
    for col in range(width):
        pivots = np.nonzero(m[rank:, col])[0]
        if len(pivots) == 0:
            continue
        pivot = pivots[0] + rank
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(len(rows)):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
        if rank == len(rows):
            break
    return rank


class TestBetti:
    def test_triangle_boundary(self):
        cx = NerveComplex((0, 1, 2), ((0,), (1,), (2,), (0, 1), (1, 2), (0, 2)))
        assert betti(cx) == (1, 1)

    def test_filled_triangle(self):
        cx = NerveComplex(
            (0, 1, 2),
            ((0,), (1,), (2,), (0, 1), (1, 2), (0, 2), (0, 1, 2)))
        assert betti(cx) == (1, 0)

    def test_forest_counts_components(self):
        cx = NerveComplex((0, 1, 2, 3, 4), ((0, 1), (1, 2), (3, 4)))
        assert betti(cx) == (2, 0)

    def test_isolated_vertices_count(self):
        cx = NerveComplex((0, 1, 2), ((0,), (1,), (2,)))
        assert betti(cx) == (3, 0)

    def test_four_cycle_with_chord(self):
        cx = NerveComplex(
            (0, 1, 2, 3), ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2)))
        assert betti(cx) == (1, 2)

    def test_tetrahedron_shell_has_no_independent_cycle(self):
        verts = (0, 1, 2, 3)
        edges = tuple(combinations(verts, 2))
        tris = tuple(combinations(verts, 3))
        cx = NerveComplex(verts, edges + tris)
        assert betti(cx) == (1, 0)

    def test_missing_vertex_rejected(self):
        cx = NerveComplex((0, 1), ((0, 1), (1, 2)))
        with pytest.raises(InvalidShapeError, match="vertex"):
            betti(cx)

    def test_missing_edge_rejected(self):
        cx = NerveComplex((0, 1, 2), ((0, 1), (1, 2), (0, 1, 2)))
        with pytest.raises(InvalidShapeError, match="edge"):
            betti(cx)

    def test_against_even_subgraph_oracle(self):
        rng = random.Random(23)
        for _ in range(40):
            n = rng.randint(2, 6)
            pool = list(combinations(range(n), 2))
            edges = tuple(rng.sample(pool, rng.randint(0, min(8, len(pool)))))
            cx = NerveComplex(tuple(range(n)), tuple((i,) for i in range(n)) + edges)
            b0, b1 = betti(cx)
            assert b0 == brute_components(range(n), edges)
            assert b1 == brute_cycle_rank(edges)

    def test_triangle_rank_against_numpy(self):
        rng = random.Random(29)
        for _ in range(30):
            n = rng.randint(3, 6)
            pool = list(combinations(range(n), 2))
            edges = rng.sample(pool, rng.randint(3, len(pool)))
            eset = set(edges)
            candidates = [t for t in combinations(range(n), 3)
                          if all(e in eset for e in combinations(t, 2))]
            tris = rng.sample(candidates, rng.randint(0, len(candidates)))
            cx = NerveComplex(
                tuple(range(n)),
                tuple((i,) for i in range(n)) + tuple(edges) + tuple(tris))
            b0, b1 = betti(cx)
            index = {e: i for i, e in enumerate(cx.edges)}
            rows = [
                [index[e] for e in combinations(t, 2)] for t in cx.triangles]
            rank = numpy_gf2_rank(rows, len(cx.edges))
            cycle_rank = len(cx.edges) - n + brute_components(range(n), edges)
            assert b1 == cycle_rank - rank


class TestFreeGroup:
    def test_four_cycle_rank_one(self):
        pres = free_group_presentation(
            "abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
        assert pres.rank == 1
        assert len(pres.generators) == 1
        assert set(pres.generators[0]) == {
            ("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")}

    def test_figure_eight_rank_two(self):
        edges = [("a", "b"), ("b", "c"), ("c", "a"),
                 ("a", "d"), ("d", "e"), ("e", "a")]
        pres = free_group_presentation("abcde", edges)
        assert pres.rank == 2

    def test_tree_rank_zero(self):
        pres = free_group_presentation(
            "abcd", [("a", "b"), ("b", "c"), ("b", "d")])
        assert pres.rank == 0
        assert pres.generators == ()

    def test_rank_ignores_edge_order(self):
        rng = random.Random(31)
        edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (4, 5)]
        base = free_group_presentation(range(6), edges).rank
        for _ in range(10):
            shuffled = edges[:]
            rng.shuffle(shuffled)
            shuffled = [tuple(reversed(e)) if rng.random() < 0.5 else e
                        for e in shuffled]
            assert free_group_presentation(range(6), shuffled).rank == base

    def test_generators_are_closed_walks(self):
        edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (0, 3)]
        pres = free_group_presentation(range(5), edges)
        assert pres.rank == 3
        for gen in pres.generators:
            deg: dict = {}
            for u, v in gen:
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            assert all(d % 2 == 0 for d in deg.values())

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError, match="loop"):
            free_group_presentation("ab", [("a", "a")])

    def test_missing_vertex_rejected(self):
        with pytest.raises(ValueError, match="missing"):
            free_group_presentation("ab", [("a", "z")])


SQUARE = [(1, 1), (5, 1), (5, 5), (1, 5)]
SQUARE2 = [(5, 5), (9, 5), (9, 9), (5, 9)]


class TestCycleSkeleton:
    def test_cycle_graph(self):
        sp = grid_space(SQUARE, tau=4.0)
        cyc = HCycle(tuple(sp.point(f"{x},{y}") for x, y in SQUARE))
        verts, edges = cycles_one_skeleton(cyc)
        assert len(verts) == 4 and len(edges) == 4
        assert free_group_presentation(verts, edges).rank == 1

    def test_system_of_two_cycles_is_figure_eight(self):
        sp = grid_space(SQUARE + SQUARE2[1:], tau=4.0)
        system = CycleSystem((
            HCycle(tuple(sp.point(f"{x},{y}") for x, y in SQUARE)),
            HCycle(tuple(sp.point(f"{x},{y}") for x, y in SQUARE2)),
        ))
        verts, edges = cycles_one_skeleton(system)
        assert free_group_presentation(verts, edges).rank == 2

    def test_open_path_has_rank_zero(self):
        sp = grid_space(SQUARE, tau=4.0)
        path = HPath(tuple(sp.point(f"{x},{y}") for x, y in SQUARE[:3]))
        verts, edges = cycles_one_skeleton(path)
        assert free_group_presentation(verts, edges).rank == 0


class TestGoodCover:
    def test_block_overlap_is_contractible(self):
        coords = [(x, y) for x in range(4) for y in range(2)]
        sp = grid_space(coords)
        left = frozenset(f"{x},{y}" for x, y in coords if x <= 2)
        right = frozenset(f"{x},{y}" for x, y in coords if x >= 1)
        report = check_good_cover(Cover(sp, (left, right)), "topological")
        assert report.ok
        assert report.intersections[0].reason == "grid betti (1, 0)"

    def test_disconnected_intersection_fails(self):
        a = [(0, 0), (1, 0), (2, 0), (2, 2)]
        b = [(0, 0), (0, 2), (1, 2), (2, 2)]
        sp = grid_space(sorted(set(a + b)))
        cov = Cover(sp, (
            frozenset(f"{x},{y}" for x, y in a),
            frozenset(f"{x},{y}" for x, y in b)))
        report = check_good_cover(cov, "topological")
        assert not report.ok
        assert "(2, 0)" in report.intersections[0].reason

    def test_cycle_pair_family_with_singleton_intersection(self):
        sp = grid_space(SQUARE + SQUARE2[1:], tau=4.0)
        cov = Cover(sp, (
            frozenset(f"{x},{y}" for x, y in SQUARE),
            frozenset(f"{x},{y}" for x, y in SQUARE2)))
        report = check_good_cover(cov, "topological")
        assert report.ok
        only = report.intersections[0]
        assert only.indices == (0, 1)
        assert only.ids == frozenset({"5,5"})

    def test_degenerate_mode(self):
        feats = {0: (1.0,), 1: (1.0,), 2: (1.0,), 3: (4.0,)}
        sp = id_space(4, feats)
        good = Cover(sp, (frozenset({0, 1, 3}), frozenset({1, 2, 3})))
        # the descriptive intersection at eps 0 is {0,1,2,3}? no: choices
        # must pair across elements; 3 matches only itself
        report = check_good_cover(good, "degenerate")
        assert not report.ok
        same = Cover(sp, (frozenset({0, 1}), frozenset({1, 2}), frozenset({3})))
        assert check_good_cover(same, "degenerate").ok

    def test_degenerate_pass_implies_descriptive_pass(self):
        rng = random.Random(37)
        seen_pass = 0
        for _ in range(40):
            space = random_explicit_space(
                rng, n=rng.randint(3, 6), with_features=True,
                feature_values=rng.choice([1, 2]))
            ids = sorted(space.ids, key=str)
            elements = [frozenset(rng.sample(ids, rng.randint(1, len(ids))))
                        for _ in range(rng.randint(2, 3))]
            leftovers = frozenset(ids) - frozenset().union(*elements)
            if leftovers:
                elements[0] = elements[0] | leftovers
            cov = Cover(space, tuple(elements))
            degenerate = check_good_cover(cov, "degenerate")
            if degenerate.ok:
                seen_pass += 1
                assert check_good_cover(cov, "descriptive").ok
        assert seen_pass > 0

    def test_missing_features_raise(self):
        sp = id_space(2)
        cov = Cover(sp, (frozenset({0, 1}), frozenset({1})))
        with pytest.raises(MissingProbeError):
            check_good_cover(cov, "degenerate")

    def test_unknown_mode_rejected(self):
        cov = Cover(id_space(2), (frozenset({0, 1}),))
        with pytest.raises(ValueError, match="mode"):
            check_good_cover(cov, "fast")

    def test_oversized_cover_rejected(self):
        sp = id_space(17)
        cov = Cover(sp, tuple(frozenset({i}) for i in range(17)))
        with pytest.raises(ValueError, match="too large"):
            check_good_cover(cov, "topological")


class TestNerveVsUnion:
    def test_two_overlapping_rectangles(self):
        report = nerve_vs_union_check(
            [(0, 0, 4, 4), (3, 3, 7, 7)], (10, 10))
        assert report.match
        assert report.nerve_betti == (1, 0)
        assert report.union_betti == (1, 0)

    def test_disjoint_rectangles(self):
        report = nerve_vs_union_check(
            [(0, 0, 2, 2), (6, 0, 8, 2), (0, 6, 2, 8)], (12, 12))
        assert report.match
        assert report.nerve_betti == (3, 0)

    def test_frame_of_four_rectangles_has_a_hole(self):
        # pairwise-intersecting axis-aligned rectangles always share a
        # common point, so a hollow nerve needs four rectangles in a ring
        report = nerve_vs_union_check(
            [(1, 1, 2, 9), (1, 1, 9, 2), (8, 1, 9, 9), (1, 8, 9, 9)],
            (12, 12))
        assert report.match
        assert report.nerve_betti == (1, 1)
        assert report.union_betti == (1, 1)
        assert report.nerve.triangles == ()

    def test_three_rectangles_with_common_point(self):
        report = nerve_vs_union_check(
            [(0, 0, 5, 5), (3, 3, 8, 8), (0, 3, 5, 8)], (12, 12))
        assert report.match
        assert report.nerve.triangles == ((0, 1, 2),)
        assert report.nerve_betti == (1, 0)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            nerve_vs_union_check([], (4, 4))

    def test_random_separated_rectangle_covers_agree(self):
        rng = random.Random(41)
        for _ in range(25):
            rects = random_rect_cover(rng, count=rng.randint(1, 5))
            report = nerve_vs_union_check(rects, (64, 64))
            assert report.match, (rects, report)


def random_rect_cover(rng, count, size=64):
    """Rectangles that either overlap or keep a gap of at least 2 on some
    axis, so diagonal pixel adjacency cannot fake a connection."""
    rects: list = []
    attempts = 0
    while len(rects) < count and attempts < 500:
        attempts += 1
        x0 = rng.randint(0, size - 12)
        y0 = rng.randint(0, size - 12)
        cand = (x0, y0, x0 + rng.randint(3, 11), y0 + rng.randint(3, 11))
        ok = True
        for r in rects:
            overlap = not (cand[2] < r[0] or r[2] < cand[0]
                           or cand[3] < r[1] or r[3] < cand[1])
            gap_x = cand[0] - r[2] >= 2 or r[0] - cand[2] >= 2
            gap_y = cand[1] - r[3] >= 2 or r[1] - cand[3] >= 2
            if not (overlap or gap_x or gap_y):
                ok = False
                break
        if ok:
            rects.append(cand)
    return rects


UNIT_CIRCLE = [(math.cos(2 * math.pi * k / 3), math.sin(2 * math.pi * k / 3))
               for k in range(3)]


class TestComparisonAngle:
    def test_flat_equilateral(self):
        a, b, c = (0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2)
        for apex in ((a, b, c), (b, a, c), (a, c, b)):
            p, q, r = apex
            assert comparison_angle(p, q, r) == pytest.approx(math.pi / 3)

    def test_flat_right_triangle(self):
        angle = comparison_angle((3.0, 0.0), (0.0, 0.0), (0.0, 4.0))
        assert angle == pytest.approx(math.pi / 2)

    def test_accepts_points_with_coords(self):
        a = Point("a", coords=(3.0, 0.0))
        b = Point("b", coords=(0.0, 0.0))
        assert comparison_angle(a, b, (0.0, 4.0)) == pytest.approx(math.pi / 2)

    def test_collinear_angle_is_pi(self):
        assert comparison_angle(
            (0.0, 0.0), (1.0, 0.0), (3.0, 0.0)) == pytest.approx(math.pi)

    def test_apex_side_of_length_zero_rejected(self):
        with pytest.raises(DegenerateTriangleError):
            comparison_angle((0.0, 0.0), (0.0, 0.0), (1.0, 0.0))

    def test_negative_curvature_rejected(self):
        with pytest.raises(ValueError, match="curvature"):
            comparison_angle((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), kappa=-1.0)

    def test_spherical_side_too_long_rejected(self):
        with pytest.raises(DegenerateTriangleError, match="diameter"):
            comparison_angle((0.0, 0.0), (4.0, 0.0), (0.0, 1.0), kappa=1.0)

    def test_small_spherical_angle_near_flat(self):
        flat = comparison_angle((0.3, 0.0), (0.0, 0.0), (0.0, 0.4))
        curved = comparison_angle(
            (0.3, 0.0), (0.0, 0.0), (0.0, 0.4), kappa=0.01)
        assert curved == pytest.approx(flat, abs=1e-3)
        assert curved > flat


class TestAlexandrovQuadruple:
    def test_wrong_arity_rejected(self):
        with pytest.raises(ValueError, match="4 points"):
            AlexandrovQuadruple(((0, 0), (1, 0), (0, 1)))

    def test_coincident_points_rejected(self):
        with pytest.raises(ValueError, match="coincide"):
            AlexandrovQuadruple(((0, 0), (1, 0), (1, 0), (0, 1)))

    def test_negative_curvature_rejected(self):
        with pytest.raises(ValueError, match="curvature"):
            AlexandrovQuadruple(
                ((0, 0), (1, 0), (0, 1), (1, 1)), kappa=-2.0)

    def test_flat_circle_configuration_sums_to_two_pi(self):
        q = AlexandrovQuadruple(((0.0, 0.0), *UNIT_CIRCLE), kappa=0.0)
        report = alexandrov_quadruple_check(q)
        assert report.angle_sum == pytest.approx(2 * math.pi, abs=1e-9)
        assert report.within_bound
        assert report.perimeter_ok is None
        assert report.angles == pytest.approx((2 * math.pi / 3,) * 3)

    def test_curved_circle_configuration_reported_side_by_side(self):
        # the spherical reading of this configuration does not sum to
        # 2 pi; both conventions are reported and neither is privileged
        q = AlexandrovQuadruple(((0.0, 0.0), *UNIT_CIRCLE), kappa=1.0)
        report = alexandrov_quadruple_check(q)
        chord = math.sqrt(3)
        expected = math.acos(
            (math.cos(chord) - math.cos(1.0) ** 2) / math.sin(1.0) ** 2)
        assert expected == pytest.approx(2.2640382924, abs=1e-9)
        assert report.angles == pytest.approx((expected,) * 3)
        assert report.angle_sum == pytest.approx(3 * expected)
        assert report.euclidean_sum == pytest.approx(2 * math.pi, abs=1e-9)
        assert not report.within_bound
        assert report.perimeter_ok is False

    def test_halfplane_satellites_pass_with_perimeter(self):
        q = AlexandrovQuadruple(
            ((0.0, 0.0), (0.3, 0.0), (0.0, 0.3), (0.3, 0.3)), kappa=1.0)
        report = alexandrov_quadruple_check(q)
        assert report.within_bound
        assert report.perimeter_ok is True
        assert bool(report)
