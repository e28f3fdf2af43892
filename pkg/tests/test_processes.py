import math

import numpy as np
import pytest

from minkdensity import geometry as G
from minkdensity import processes as P
from minkdensity.geometry import clip_measure, dilate_window, measure_in_ball, point, window

TWO_PI = 2.0 * math.pi
W = window([0.0, 0.0], [1.0, 1.0])


def test_rng_stream_reproducibility():
    a = P.RngStream(123, 45).generator().random(8)
    b = P.RngStream(123, 45).generator().random(8)
    c = P.RngStream(123, 46).generator().random(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sample_determinism_bit_identical():
    models = [
        P.PoissonLineModel(1.5),
        P.PoissonSegmentModel(2.0, P.UniformLength(0.2, 0.8)),
        P.GrainUnionModel(P.OnePlusPoisson(3.0), P.SegmentLaw(P.UniformBox(W), P.FixedLength(0.5))),
        P.RandomPointModel(P.AffineX(W, 0.5)),
        P.BirthGrowthModel(P.ConstantRate(1.0), 1.0, 0.5, "boundary"),
    ]
    for model in models:
        s1 = P.sample(model, W, P.RngStream(7, 3))
        s2 = P.sample(model, W, P.RngStream(7, 3))
        assert s1 == s2, type(model).__name__


class TestCountLaws:
    def test_supports_exclude_zero(self):
        gen = np.random.default_rng(0)
        for law in (P.Deterministic(3), P.GeometricOnPositives(0.3), P.OnePlusPoisson(2.0)):
            draws = [law.sample(gen) for _ in range(2000)]
            assert min(draws) >= 1
            assert np.mean(draws) == pytest.approx(law.mean, rel=0.1)

    def test_validation(self):
        with pytest.raises(ValueError):
            P.Deterministic(0)
        with pytest.raises(ValueError):
            P.GeometricOnPositives(1.5)
        with pytest.raises(ValueError):
            P.OnePlusPoisson(-1.0)


class TestDensities:
    def test_affine_nonnegativity_guard(self):
        with pytest.raises(ValueError):
            P.AffineX(W, 2.5)  # |slope| * half-width = 1.25 > 1

    def test_affine_marginal_moments(self):
        spec = P.AffineX(W, 0.8)
        gen = np.random.default_rng(4)
        xs = np.array([spec.sample(gen).coords[0] for _ in range(40000)])
        # E[x1] = 1/2 + slope/12 for the centered linear density on [0,1]
        assert xs.mean() == pytest.approx(0.5 + 0.8 / 12.0, abs=0.005)
        assert xs.min() >= 0.0 and xs.max() <= 1.0

    def test_affine_pdf_integrates_to_one(self):
        spec = P.AffineX(W, 0.8)
        xs = np.linspace(0.005, 0.995, 100)
        vals = [spec.pdf(point(x, 0.5)) for x in xs]
        assert np.mean(vals) == pytest.approx(1.0, abs=1e-3)

    def test_gaussian_truncated_stays_in_box(self):
        spec = P.GaussianTruncated(point(0.5, 0.5), 2.0, W)
        gen = np.random.default_rng(5)
        for _ in range(200):
            assert W.contains(spec.sample(gen))


class TestPoissonLine:
    def test_hit_count_mean(self):
        # lines within r of the origin are Poisson with mean 2 r L
        model = P.PoissonLineModel(1.0)
        r, m_reps = 0.3, 10000
        hits = []
        origin = point(0.0, 0.0)
        for i in range(m_reps):
            s = P.sample(model, W, P.RngStream(21, i))
            hits.append(sum(1 for g in s.grains if G.distance(origin, g) <= r))
        mean = np.mean(hits)
        stderr = np.std(hits, ddof=1) / math.sqrt(m_reps)
        assert abs(mean - 2 * r * 1.0) <= 4 * stderr

    def test_line_parameters_in_range(self):
        s = P.sample(P.PoissonLineModel(3.0), W, P.RngStream(2, 0))
        for g in s.grains:
            assert 0.0 < g.angle <= math.pi

    def test_realization_complete_in_dilated_window(self):
        s = P.sample(P.PoissonLineModel(2.0), W, P.RngStream(9, 4))
        assert s.valid_window == dilate_window(W, 1.0)


class TestPoissonSegments:
    def test_campbell_intensity(self):
        # stationary: E[length in A] / area(A) = center_intensity * mean length
        model = P.PoissonSegmentModel(2.0, P.FixedLength(0.5))
        m_reps = 4000
        a = window([0.2, 0.2], [0.8, 0.8])
        totals = []
        for i in range(m_reps):
            s = P.sample(model, W, P.RngStream(33, i))
            totals.append(sum(clip_measure(g, a) for g in s.grains) / a.volume)
        mean = np.mean(totals)
        stderr = np.std(totals, ddof=1) / math.sqrt(m_reps)
        assert abs(mean - 1.0) <= 4 * stderr

    def test_uniform_length_campbell(self):
        model = P.PoissonSegmentModel(1.0, P.UniformLength(0.2, 0.6))
        m_reps = 4000
        a = window([0.3, 0.3], [0.7, 0.7])
        totals = []
        for i in range(m_reps):
            s = P.sample(model, W, P.RngStream(35, i))
            totals.append(sum(clip_measure(g, a) for g in s.grains) / a.volume)
        stderr = np.std(totals, ddof=1) / math.sqrt(m_reps)
        assert abs(np.mean(totals) - 0.4) <= 4 * stderr


class TestSegmentExtension:
    def test_unchanged_when_long_enough(self):
        g = G.Segment(point(0, 0), point(3, 0))
        assert P.extend_segment_to_min_length(g, 2.0) is g

    def test_homothetic_extension(self):
        g = G.Segment(point(0, 0), point(1, 0))
        out = P.extend_segment_to_min_length(g, 2.0)
        assert out.a.coords == (-0.5, 0.0)
        assert out.b.coords == (1.5, 0.0)

    def test_fixed_point_at_exact_length(self):
        g = G.Segment(point(0, 0), point(0, 2))
        assert P.extend_segment_to_min_length(g, 2.0) is g

    @pytest.mark.parametrize("seed", range(5))
    def test_midpoint_and_direction_preserved(self, seed):
        rng = np.random.default_rng(400 + seed)
        a = point(*rng.uniform(-1, 1, 2))
        b = point(*rng.uniform(-1, 1, 2))
        g = G.Segment(a, b)
        out = P.extend_segment_to_min_length(g, g.length * rng.uniform(1.1, 4.0))
        assert out.midpoint.x == pytest.approx(g.midpoint.x, abs=1e-12)
        assert out.midpoint.y == pytest.approx(g.midpoint.y, abs=1e-12)
        cross = (out.b.x - out.a.x) * (b.y - a.y) - (out.b.y - out.a.y) * (b.x - a.x)
        assert abs(cross) < 1e-12


class TestBirthGrowth:
    def test_zero_rate_empty(self):
        model = P.BirthGrowthModel(P.ConstantRate(0.0), 1.0, 0.5, "boundary")
        s = P.sample(model, W, P.RngStream(1, 0))
        assert s.is_empty

    def test_forced_single_nucleus_full_circle(self):
        grains = P.grow_nuclei([0.0], [point(0.0, 0.0)], 1.0, 0.5, "boundary")
        assert len(grains) == 1
        arc = grains[0]
        assert isinstance(arc, G.Arc)
        assert arc.radius == pytest.approx(0.5)
        assert arc.length == pytest.approx(math.pi, abs=1e-12)  # full circle of radius 1/2

    def test_nuclei_mean_count(self):
        model = P.BirthGrowthModel(P.ConstantRate(1.0), 1.0, 0.5, "solid")
        region = dilate_window(W, 1.0 + 0.5)
        expected = 0.5 * region.volume  # rate * horizon * area
        counts = []
        for i in range(2000):
            s = P.sample(model, W, P.RngStream(77, i))
            counts.append(len(s.grains))
        stderr = np.std(counts, ddof=1) / math.sqrt(len(counts))
        assert abs(np.mean(counts) - expected) <= 4 * stderr + 0.05

    def test_boundary_target_dimension(self):
        model = P.BirthGrowthModel(P.ConstantRate(1.0), 1.0, 0.5, "boundary")
        s = P.sample(model, W, P.RngStream(8, 1))
        assert s.n == 1
        assert all(isinstance(g, G.Arc) for g in s.grains)
        solid = P.BirthGrowthModel(P.ConstantRate(1.0), 1.0, 0.5, "solid")
        s2 = P.sample(solid, W, P.RngStream(8, 1))
        assert s2.n == 2
        assert all(isinstance(g, G.Disk) for g in s2.grains)


class TestConcentrationBound:
    def test_single_unit_segment(self):
        s = G.RealizedSet(
            (G.Segment(point(0.2, 0.5), point(0.2 + 1.0, 0.5)),), 1, dilate_window(W, 1.0)
        )
        assert P.concentration_bound(s) == pytest.approx(1.0, abs=1e-12)

    def test_single_point(self):
        s = G.RealizedSet((G.PointGrain(point(0.5, 0.5)),), 0, dilate_window(W, 1.0))
        assert P.concentration_bound(s) == pytest.approx(1.0)

    def test_two_unit_segments(self):
        grains = (
            G.Segment(point(0.0, 0.2), point(1.0, 0.2)),
            G.Segment(point(0.0, 0.8), point(1.0, 0.8)),
        )
        s = G.RealizedSet(grains, 1, dilate_window(W, 1.0))
        assert P.concentration_bound(s) == pytest.approx(0.5, abs=1e-12)

    def test_empty_marker(self):
        s = G.RealizedSet((), 1, dilate_window(W, 1.0))
        assert P.concentration_bound(s) is None

    @pytest.mark.parametrize("model_seed", range(8))
    def test_self_certification(self, model_seed):
        # the returned gamma certifies the normalized-measure inequality on
        # a grid of points on the clipped set, for radii across (0, 1)
        model = P.PoissonSegmentModel(1.0, P.UniformLength(0.2, 1.2))
        s = P.sample(model, W, P.RngStream(55, model_seed))
        gamma = P.concentration_bound(s)
        if gamma is None:
            return
        clipped = G.restrict_to_window(s)
        total = sum(clip_measure(g, s.valid_window) for g in clipped.grains)
        for g in clipped.grains:
            probes = _probe_points(g)
            for q in probes:
                for r in (0.01, 0.1, 0.5, 0.99):
                    eta = sum(measure_in_ball(h, q, r) for h in clipped.grains) / total
                    assert eta >= gamma * r - 1e-9

    def test_birth_growth_boundary_self_certification(self):
        model = P.BirthGrowthModel(P.ConstantRate(1.0), 1.0, 0.5, "boundary")
        s = P.sample(model, W, P.RngStream(66, 2))
        gamma = P.concentration_bound(s)
        assert gamma is not None and gamma > 0
        clipped = G.restrict_to_window(s)
        total = sum(clip_measure(g, s.valid_window) for g in clipped.grains)
        for g in clipped.grains[:6]:
            for q in _probe_points(g):
                for r in (0.01, 0.1, 0.5, 0.99):
                    eta = sum(measure_in_ball(h, q, r) for h in clipped.grains) / total
                    assert eta >= gamma * r - 1e-9


def _probe_points(g):
    """A few points on the grain, endpoints included (the worst cases)."""
    if isinstance(g, G.Segment):
        return [
            g.a,
            g.b,
            point(0.5 * (g.a.x + g.b.x), 0.5 * (g.a.y + g.b.y)),
        ]
    if isinstance(g, G.Arc):
        angles = [g.start, g.start + g.extent, g.start + 0.5 * g.extent]
        return [
            point(g.center.x + g.radius * math.cos(t), g.center.y + g.radius * math.sin(t))
            for t in angles
        ]
    if isinstance(g, G.PointGrain):
        return [g.location]
    return []
