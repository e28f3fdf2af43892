import math

import numpy as np
import pytest

from minkdensity import geometry as G
from minkdensity.geometry import (
    Arc,
    Circle,
    Disk,
    Line,
    PointGrain,
    RealizedSet,
    Segment,
    boundary_arcs,
    clip_grain,
    clip_measure,
    dilate_window,
    distance,
    distance_to_set,
    enlargement_volume,
    in_enlargement,
    measure_in_ball,
    point,
    quadrature_error_bound,
    restrict_to_window,
    union_disks_area,
    unit_ball_volume,
    window,
)

TWO_PI = 2.0 * math.pi


def test_unit_ball_volumes():
    assert unit_ball_volume(0) == 1.0
    assert unit_ball_volume(1) == 2.0
    assert unit_ball_volume(2) == math.pi
    assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0, abs=1e-14)
    with pytest.raises(ValueError):
        unit_ball_volume(-1)


class TestDistance:
    def test_closed_form_examples(self):
        assert distance(point(0, 0), Segment(point(1, 0), point(2, 0))) == pytest.approx(1.0, abs=1e-12)
        assert distance(point(0, 1), Line(0.0, math.pi / 2)) == pytest.approx(1.0, abs=1e-12)
        assert distance(point(0, 0), Circle(point(3, 0), 1.0)) == pytest.approx(2.0, abs=1e-12)
        assert distance(point(2, 0), Disk(point(0, 0), 1.0)) == pytest.approx(1.0, abs=1e-12)
        assert distance(point(0.5, 0), Disk(point(0, 0), 1.0)) == 0.0
        assert distance(point(0, 2), PointGrain(point(0, 0))) == pytest.approx(2.0, abs=1e-12)

    def test_arc_interior_and_endpoint(self):
        arc = Arc(point(0, 0), 1.0, 0.0, math.pi / 2)
        # radially outside the arc's angular range: nearest endpoint wins
        assert distance(point(0, -1), arc) == pytest.approx(math.sqrt(2.0), abs=1e-12)
        assert distance(point(2, 0), arc) == pytest.approx(1.0, abs=1e-12)
        assert distance(point(math.cos(0.3), math.sin(0.3)), arc) == pytest.approx(0.0, abs=1e-12)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            distance(G.Point((0.5,)), Segment(point(0, 0), point(1, 0)))

    @pytest.mark.parametrize("seed", range(4))
    def test_brute_force_oracle(self, seed):
        # dense parametric sampling of each grain kind upper-bounds the
        # exact distance and approaches it as the sampling refines
        rng = np.random.default_rng(seed)
        q = point(*rng.uniform(-2, 2, 2))
        a = point(*rng.uniform(-1, 1, 2))
        b = point(*rng.uniform(-1, 1, 2))
        ts = np.linspace(0.0, 1.0, 200001)
        px = a.x + ts * (b.x - a.x)
        py = a.y + ts * (b.y - a.y)
        brute = np.min(np.sqrt((px - q.x) ** 2 + (py - q.y) ** 2))
        exact = distance(q, Segment(a, b))
        assert exact <= brute + 1e-12
        assert brute - exact < 1e-7

        center = point(*rng.uniform(-1, 1, 2))
        radius = rng.uniform(0.2, 2.0)
        lo = rng.uniform(0, TWO_PI)
        ext = rng.uniform(0.3, TWO_PI)
        arc = Arc(center, radius, lo, lo + ext)
        angs = lo + np.linspace(0.0, ext, 200001)
        px = center.x + radius * np.cos(angs)
        py = center.y + radius * np.sin(angs)
        brute = np.min(np.sqrt((px - q.x) ** 2 + (py - q.y) ** 2))
        exact = distance(q, arc)
        assert exact <= brute + 1e-12
        assert brute - exact < 1e-7

        offset = rng.uniform(-1, 1)
        angle = rng.uniform(1e-6, math.pi)
        line = Line(offset, angle)
        ux, uy = math.cos(angle), math.sin(angle)
        ts = np.linspace(-50, 50, 2000001)
        px = offset * ux - ts * uy
        py = offset * uy + ts * ux
        brute = np.min(np.sqrt((px - q.x) ** 2 + (py - q.y) ** 2))
        exact = distance(q, line)
        assert abs(brute - exact) < 1e-6

    @pytest.mark.parametrize("seed", range(3))
    def test_zero_on_the_grain(self, seed):
        rng = np.random.default_rng(100 + seed)
        a = point(*rng.uniform(-1, 1, 2))
        b = point(*rng.uniform(-1, 1, 2))
        t = rng.random()
        on = point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
        assert distance(on, Segment(a, b)) < 1e-12
        center = point(*rng.uniform(-1, 1, 2))
        radius = rng.uniform(0.2, 2.0)
        phi = rng.uniform(0, TWO_PI)
        on = point(center.x + radius * math.cos(phi), center.y + radius * math.sin(phi))
        assert distance(on, Circle(center, radius)) < 1e-12


class TestSetDistance:
    def test_empty_set_marker(self):
        s = RealizedSet((), 1, window([0, 0], [1, 1]))
        assert distance_to_set(point(0, 0), s) is None
        assert not in_enlargement(point(0, 0), s, 0.5)

    def test_min_over_grains(self):
        s = RealizedSet(
            (Segment(point(1, 0), point(2, 0)), Circle(point(0, 5), 1.0)),
            1,
            window([-10, -10], [10, 10]),
        )
        assert distance_to_set(point(0, 0), s) == pytest.approx(1.0, abs=1e-12)

    def test_closed_enlargement_boundary(self):
        s = RealizedSet((PointGrain(point(0, 0)),), 0, window([-1, -1], [1, 1]))
        assert in_enlargement(point(0.5, 0), s, 0.5)  # distance exactly r
        assert in_enlargement(point(0, 0), s, 0.1)
        assert not in_enlargement(point(0.5000001, 0), s, 0.5)


class TestClipMeasure:
    def test_examples(self):
        w = window([0, 0], [1, 1])
        assert clip_measure(Line(0.0, math.pi / 2), w) == pytest.approx(1.0, abs=1e-12)
        assert clip_measure(Segment(point(-1, 0), point(2, 0)), w) == pytest.approx(1.0, abs=1e-12)
        big = window([-2, -2], [2, 2])
        assert clip_measure(Circle(point(0, 0), 1.0), big) == pytest.approx(TWO_PI, abs=1e-12)

    def test_point_indicator(self):
        w = window([0, 0], [1, 1])
        assert clip_measure(PointGrain(point(0.5, 0.5)), w) == 1.0
        assert clip_measure(PointGrain(point(2, 2)), w) == 0.0
        assert clip_measure(PointGrain(point(1.0, 1.0)), w) == 1.0  # closed box

    def test_circle_partially_inside(self):
        # unit circle, window covering the right half-plane: half the circle
        w = window([0, -2], [2, 2])
        assert clip_measure(Circle(point(0, 0), 1.0), w) == pytest.approx(math.pi, abs=1e-12)

    def test_arc_clipping(self):
        arc = Arc(point(0, 0), 1.0, 0.0, math.pi)  # upper half circle
        w = window([0, -2], [2, 2])  # right half-plane
        assert clip_measure(arc, w) == pytest.approx(math.pi / 2, abs=1e-12)

    def test_monotone_in_window(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = point(*rng.uniform(-1, 1, 2))
            b = point(*rng.uniform(-1, 1, 2))
            small = window([-0.5, -0.5], [0.5, 0.5])
            big = window([-1.5, -1.5], [1.5, 1.5])
            g = Segment(a, b)
            assert clip_measure(g, small) <= clip_measure(g, big) + 1e-12

    def test_disk_rejected(self):
        with pytest.raises(ValueError):
            clip_measure(Disk(point(0, 0), 1.0), window([-2, -2], [2, 2]))


class TestMeasureInBall:
    def test_examples(self):
        assert measure_in_ball(Line(0.0, math.pi / 2), point(0, 0), 1.0) == pytest.approx(2.0, abs=1e-12)
        assert measure_in_ball(Segment(point(5, 5), point(6, 6)), point(0, 0), 1.0) == 0.0
        got = measure_in_ball(Circle(point(0, 0), 1.0), point(1, 0), 1.0)
        assert got == pytest.approx(2.0 * math.pi / 3.0, abs=1e-12)

    def test_segment_fully_inside(self):
        g = Segment(point(-0.1, 0), point(0.1, 0))
        assert measure_in_ball(g, point(0, 0), 1.0) == pytest.approx(0.2, abs=1e-12)

    def test_arc_window_intersection(self):
        # quarter arc in the first quadrant, ball around its midpoint
        arc = Arc(point(0, 0), 1.0, 0.0, math.pi / 2)
        full = measure_in_ball(Circle(point(0, 0), 1.0), point(math.cos(0.4), math.sin(0.4)), 0.3)
        part = measure_in_ball(arc, point(math.cos(0.4), math.sin(0.4)), 0.3)
        assert part == pytest.approx(full, abs=1e-12)  # covered window inside the arc

    def test_additive_over_arc_split(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            center = point(*rng.uniform(-1, 1, 2))
            radius = rng.uniform(0.3, 1.5)
            lo = rng.uniform(0, TWO_PI)
            ext = rng.uniform(0.5, TWO_PI - 0.1)
            cut = lo + rng.uniform(0.1, ext - 0.05)
            q = point(*rng.uniform(-2, 2, 2))
            r = rng.uniform(0.1, 2.0)
            whole = measure_in_ball(Arc(center, radius, lo, lo + ext), q, r)
            left = measure_in_ball(Arc(center, radius, lo, cut), q, r)
            right = measure_in_ball(Arc(center, radius, cut, lo + ext), q, r)
            assert whole == pytest.approx(left + right, abs=1e-9)

    def test_monotone_in_radius(self):
        rng = np.random.default_rng(13)
        g = Segment(point(-0.3, 0.2), point(0.8, -0.4))
        q = point(0.1, 0.1)
        vals = [measure_in_ball(g, q, r) for r in (0.1, 0.2, 0.4, 0.8)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


class TestBoundaryArcs:
    def test_single_disk(self):
        arcs = boundary_arcs([Disk(point(0, 0), 1.0)])
        assert len(arcs) == 1
        assert sum(a.length for a in arcs) == pytest.approx(TWO_PI, abs=1e-12)

    def test_two_unit_disks(self):
        arcs = boundary_arcs([Disk(point(0, 0), 1.0), Disk(point(1, 0), 1.0)])
        assert len(arcs) == 2
        for a in arcs:
            assert a.length == pytest.approx(4.0 * math.pi / 3.0, abs=1e-9)
        assert sum(a.length for a in arcs) == pytest.approx(8.0 * math.pi / 3.0, abs=1e-9)

    def test_swallowed_disk(self):
        arcs = boundary_arcs([Disk(point(0, 0), 1.0), Disk(point(0, 0), 3.0)])
        assert len(arcs) == 1
        assert sum(a.length for a in arcs) == pytest.approx(6.0 * math.pi, abs=1e-12)

    def test_relabeling_invariance(self):
        rng = np.random.default_rng(7)
        disks = [Disk(point(*rng.uniform(-1, 1, 2)), rng.uniform(0.2, 0.8)) for _ in range(6)]
        total = sum(a.length for a in boundary_arcs(disks))
        rng.shuffle(disks)
        total_shuffled = sum(a.length for a in boundary_arcs(disks))
        assert total == pytest.approx(total_shuffled, abs=1e-9)

    def test_contained_disk_changes_nothing(self):
        disks = [Disk(point(0, 0), 1.0), Disk(point(2, 0), 1.0)]
        base = sum(a.length for a in boundary_arcs(disks))
        extra = disks + [Disk(point(0, 0.2), 0.3)]  # inside the first disk
        assert sum(a.length for a in boundary_arcs(extra)) == pytest.approx(base, abs=1e-12)

    def test_disk_inside_union_spanning_two(self):
        # contained in the union but in neither single disk
        disks = [Disk(point(0, 0), 1.0), Disk(point(1.2, 0), 1.0)]
        base = sum(a.length for a in boundary_arcs(disks))
        extra = disks + [Disk(point(0.6, 0), 0.5)]
        assert sum(a.length for a in boundary_arcs(extra)) <= base + 1e-9

    def test_duplicate_disks_collapse(self):
        arcs = boundary_arcs([Disk(point(0, 0), 1.0), Disk(point(0, 0), 1.0)])
        assert sum(a.length for a in arcs) == pytest.approx(TWO_PI, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_union_area_against_quadrature(self, seed):
        # Green's theorem over the boundary arcs vs indicator quadrature
        rng = np.random.default_rng(200 + seed)
        disks = [Disk(point(*rng.uniform(-0.8, 0.8, 2)), rng.uniform(0.15, 0.6)) for _ in range(5)]
        area = union_disks_area(disks)
        s = RealizedSet(tuple(disks), 2, window([-2, -2], [2, 2]))
        # membership indicator: distance zero to a disk grain
        grid = enlargement_volume(s, window([-2, -2], [2, 2]), 1e-12, 1200)
        assert area == pytest.approx(grid, abs=0.02)


class TestEnlargementVolume:
    def test_stadium(self):
        s = RealizedSet((Segment(point(0, 0), point(1, 0)),), 1, window([-1, -1], [2, 1]))
        a = window([-1, -1], [2, 1])
        got = enlargement_volume(s, a, 0.1, 600)
        ref = 2 * 1 * 0.1 + math.pi * 0.1**2
        assert abs(got - ref) < quadrature_error_bound(s, a, 0.1, 600)

    def test_annulus_exact_at_every_radius(self):
        s = RealizedSet((Circle(point(0, 0), 1.0),), 1, window([-2, -2], [2, 2]))
        a = window([-2, -2], [2, 2])
        for r in (0.5, 0.25, 0.1, 0.05):
            got = enlargement_volume(s, a, r, 800)
            ref = 4.0 * math.pi * r  # ((1+r)^2 - (1-r)^2) * pi
            assert abs(got - ref) < quadrature_error_bound(s, a, r, 800)
            # exactness anchor: the normalized ratio equals the circumference
            assert got / (2 * r) == pytest.approx(TWO_PI, abs=quadrature_error_bound(s, a, r, 800) / (2 * r))

    def test_empty_set(self):
        s = RealizedSet((), 1, window([0, 0], [1, 1]))
        assert enlargement_volume(s, window([0, 0], [1, 1]), 0.1, 64) == 0.0

    def test_monotone_in_radius_and_grains(self):
        a = window([-1, -1], [2, 2])
        seg = Segment(point(0, 0), point(1, 0))
        circ = Circle(point(0.5, 0.5), 0.4)
        one = RealizedSet((seg,), 1, a)
        two = RealizedSet((seg, circ), 1, a)
        vols_r = [enlargement_volume(one, a, r, 400) for r in (0.05, 0.1, 0.2, 0.4)]
        assert all(x <= y + 1e-12 for x, y in zip(vols_r, vols_r[1:]))
        assert enlargement_volume(one, a, 0.1, 400) <= enlargement_volume(two, a, 0.1, 400) + 1e-12

    def test_resolution_refinement_within_bound(self):
        s = RealizedSet((Segment(point(0, 0), point(1, 0.3)),), 1, window([-1, -1], [2, 2]))
        a = window([-1, -1], [2, 2])
        coarse = enlargement_volume(s, a, 0.15, 300)
        fine = enlargement_volume(s, a, 0.15, 600)
        assert abs(coarse - fine) <= quadrature_error_bound(s, a, 0.15, 300) + quadrature_error_bound(s, a, 0.15, 600)

    def test_one_dimensional_window(self):
        s = RealizedSet((PointGrain(G.Point((0.5,))),), 0, window([0.0], [1.0]))
        a = window([0.0], [1.0])
        got = enlargement_volume(s, a, 0.1, 1000)
        assert got == pytest.approx(0.2, abs=2e-3)

    def test_resolution_validated(self):
        s = RealizedSet((PointGrain(point(0, 0)),), 0, window([-1, -1], [1, 1]))
        with pytest.raises(ValueError):
            enlargement_volume(s, window([-1, -1], [1, 1]), 0.1, 4)


class TestWindows:
    def test_dilate(self):
        w = dilate_window(window([0, 0], [1, 1]), 1.0)
        assert w.lo.coords == (-1.0, -1.0) and w.hi.coords == (2.0, 2.0)
        w1 = window([0.0], [1.0])
        assert dilate_window(w1, 0.5).lo.coords == (-0.5,)
        assert dilate_window(w1, 0.0) is w1

    def test_invalid_window(self):
        with pytest.raises(ValueError):
            window([1, 0], [0, 1])

    def test_strict_containment(self):
        outer = window([-1, -1], [2, 2])
        inner = window([0, 0], [1, 1])
        assert outer.strictly_contains_window(inner)
        assert not inner.strictly_contains_window(outer)
        assert not inner.strictly_contains_window(inner)


class TestClipGrain:
    def test_line_becomes_chord(self):
        (g,) = clip_grain(Line(0.0, math.pi / 2), window([0, -1], [2, 1]))
        assert isinstance(g, Segment)
        assert g.length == pytest.approx(2.0, abs=1e-12)

    def test_circle_becomes_arcs(self):
        out = clip_grain(Circle(point(0, 0), 1.0), window([0, -2], [2, 2]))
        assert all(isinstance(g, Arc) for g in out)
        assert sum(g.length for g in out) == pytest.approx(math.pi, abs=1e-12)

    def test_restrict_preserves_measure(self):
        rng = np.random.default_rng(3)
        w = window([-0.7, -0.7], [0.7, 0.7])
        grains = []
        for _ in range(10):
            a = point(*rng.uniform(-1.2, 1.2, 2))
            b = point(*rng.uniform(-1.2, 1.2, 2))
            grains.append(Segment(a, b))
        s = RealizedSet(tuple(grains), 1, w)
        clipped = restrict_to_window(s)
        direct = sum(clip_measure(g, w) for g in s.grains)
        after = sum(clip_measure(g, w) for g in clipped.grains)
        assert direct == pytest.approx(after, abs=1e-9)
