"""Monte Carlo estimators of enlargement-based density approximations.

Two approximations of the mean density of a random closed set of dimension
n in dimension d are estimated from M independent realizations:

  * enlargement density: P(x in set enlarged by r) / (b_{d-n} r^{d-n}),
    the coverage-probability (capacity functional) route;
  * ball-average density: E[H^n(set within B_r(x))] / (b_d r^d),
    the measure-in-ball route.

Both converge to the mean density as r shrinks for sufficiently regular
processes; sweeps over descending radii make the convergence observable,
and a direct expected-measure oracle provides the reference where no
closed form exists.

Replicates are independent work units keyed by realization index
(stream_id = lane * 2^48 + index); all reductions are fixed-order, so any
worker count yields identical output for a fixed seed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ._backend import kernels
from .geometry import (
    Point,
    RealizedSet,
    Window,
    clip_measure,
    dilate_window,
    enlargement_volume,
    restrict_to_window,
    unit_ball_volume,
)
from .processes import (
    BirthGrowthModel,
    ConstantRate,
    GrainUnionModel,
    ModelSpec,
    PoissonLineModel,
    PoissonSegmentModel,
    RandomPointModel,
    RngStream,
    concentration_bound,
    sample,
)

# substream lanes; the primary lane keeps stream_id == realization index
LANE_STRIDE = 1 << 48
LANE_PRIMARY = 0
LANE_ORACLE = 2


@dataclass(frozen=True)
class PointEstimate:
    """A Monte Carlo estimate with its standard error and replicate count."""

    value: float
    stderr: float
    replicates: int

    def __post_init__(self):
        if self.stderr < 0:
            raise ValueError("standard error cannot be negative")


@dataclass(frozen=True)
class EstimatorConfig:
    """Shared estimator settings.

    ``region`` is the evaluation set A; ``clip_window`` must strictly
    contain it, and realizations are sampled complete within the
    1-dilation of ``clip_window``.  Radii are descending and confined to
    (0, 1], the regime in which sampled realizations stay complete.
    """

    radii: tuple[float, ...]
    replicates: int
    grid_per_axis: int
    seed: int
    region: Window
    clip_window: Window

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if not self.radii:
            raise ValueError("radii: need at least one radius")
        for r in self.radii:
            if not 0.0 < r <= 1.0:
                raise ValueError(f"radii: every radius must lie in (0, 1], got {r}")
        if list(self.radii) != sorted(self.radii, reverse=True):
            raise ValueError("radii: must be strictly descending")
        if len(set(self.radii)) != len(self.radii):
            raise ValueError("radii: duplicates not allowed")
        if self.replicates < 1:
            raise ValueError(f"replicates: must be >= 1, got {self.replicates}")
        if self.grid_per_axis < 1:
            raise ValueError(f"grid_per_axis: must be >= 1, got {self.grid_per_axis}")
        if self.seed < 0:
            raise ValueError(f"seed: must be >= 0, got {self.seed}")
        if self.region.d != self.clip_window.d:
            raise ValueError("region and clip_window dimensions differ")
        if not self.clip_window.strictly_contains_window(self.region):
            raise ValueError("region: must lie strictly inside clip_window")


@dataclass(frozen=True)
class DensityField:
    """Grid of local density estimates over a region, at one radius."""

    region: Window
    shape: tuple[int, ...]
    radius: float
    values: np.ndarray
    stderrs: np.ndarray
    replicates: int

    def __post_init__(self):
        if self.values.shape != self.shape or self.stderrs.shape != self.shape:
            raise ValueError("field arrays must match the declared grid shape")

    def cell_volume(self) -> float:
        return self.region.volume / math.prod(self.shape)


@dataclass(frozen=True)
class SweepRow:
    r: float
    estimate: PointEstimate
    reference: float | None
    abs_error: float | None


@dataclass(frozen=True)
class SweepReport:
    """Rows of (radius, estimate, reference, error), descending in radius."""

    rows: tuple[SweepRow, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        radii = [row.r for row in self.rows]
        if radii != sorted(radii, reverse=True):
            raise ValueError("sweep rows must be sorted by descending radius")


@dataclass(frozen=True)
class FactorizationRatios:
    """Same-realization estimates of the union-coverage ratio, the expected
    enlarged-grain count ratio, the mean-count-times-single-grain ratio,
    and the multiple-coverage (overlap) ratio."""

    union_ratio: PointEstimate
    count_ratio: PointEstimate
    factored_ratio: PointEstimate
    overlap_ratio: PointEstimate


@dataclass(frozen=True)
class CoveringCheck:
    lhs: float
    rhs: float
    gamma: float
    ok: bool


# --------------------------------------------------------------------------
# Batch sampling
# --------------------------------------------------------------------------


@dataclass
class RealizationBatch:
    """M realizations packed for the kernels, plus the originals."""

    sets: list[RealizedSet]
    kinds: np.ndarray
    params: np.ndarray
    offsets: np.ndarray
    n: int
    d: int

    @property
    def replicates(self) -> int:
        return len(self.sets)


def sample_batch(
    model: ModelSpec,
    w: Window,
    seed: int,
    replicates: int,
    lane: int = LANE_PRIMARY,
    workers: int = 1,
) -> RealizationBatch:
    """Draw ``replicates`` independent realizations, one substream each.

    Realization i uses stream_id = lane * 2^48 + i, so results are
    identical for any worker count and chunking.
    """
    sets: list[RealizedSet | None] = [None] * replicates

    def fill(lo: int, hi: int):
        for i in range(lo, hi):
            sets[i] = sample(model, w, RngStream(seed, lane * LANE_STRIDE + i))

    if workers <= 1 or replicates < 64:
        fill(0, replicates)
    else:
        chunk = (replicates + workers - 1) // workers
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(fill, lo, min(lo + chunk, replicates))
                for lo in range(0, replicates, chunk)
            ]
            for f in futures:
                f.result()

    counts = np.fromiter((len(s.grains) for s in sets), dtype=np.int64, count=replicates)
    offsets = np.zeros(replicates + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    total = int(offsets[-1])
    kinds = np.empty(total, dtype=np.int64)
    params = np.empty((total, 5), dtype=np.float64)
    pos = 0
    for s in sets:
        k, p = s.packed
        kinds[pos : pos + len(k)] = k
        params[pos : pos + len(k)] = p
        pos += len(k)
    n, d = model.n, model.d
    return RealizationBatch(sets, kinds, params, offsets, n, d)


def _embed_query(x: Point) -> tuple[float, float]:
    return x.x, x.y


def _unit_query_window(x: Point) -> Window:
    """Sampling window for pointwise queries: the unit box centered at the
    query point, whose 1-dilation covers B_r(x) for every r <= 1."""
    return Window(
        Point(tuple(c - 0.5 for c in x.coords)),
        Point(tuple(c + 0.5 for c in x.coords)),
    )


def _binomial_estimate(hits: int, m: int, scale: float) -> PointEstimate:
    p = hits / m
    se = math.sqrt(p * (1.0 - p) / m)
    return PointEstimate(p * scale, se * scale, m)


def _mean_estimate(values: np.ndarray, scale: float) -> PointEstimate:
    m = len(values)
    mean = float(np.mean(values))
    se = float(np.std(values, ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    return PointEstimate(mean * scale, se * scale, m)


# --------------------------------------------------------------------------
# Pointwise estimators
# --------------------------------------------------------------------------


def hit_prob(model: ModelSpec, x: Point, r: float, replicates: int, seed: int) -> PointEstimate:
    """Binomial estimate of the coverage probability P(x in set enlarged
    by r), the capacity functional of the ball B_r(x)."""
    if r <= 0:
        raise ValueError(f"radius must be > 0, got {r}")
    if replicates < 1:
        raise ValueError("need at least one replicate")
    batch = sample_batch(model, _unit_query_window(x), seed, replicates)
    return _hit_prob_from_batch(batch, x, r, scale=1.0)


def _hit_prob_from_batch(batch: RealizationBatch, x: Point, r: float, scale: float) -> PointEstimate:
    qx, qy = _embed_query(x)
    dists = kernels.min_dist_batch(batch.kinds, batch.params, batch.offsets, qx, qy)
    hits = int(np.count_nonzero(dists <= r))
    return _binomial_estimate(hits, batch.replicates, scale)


def enlargement_density(
    model: ModelSpec, x: Point, r: float, replicates: int, seed: int
) -> PointEstimate:
    """Coverage probability scaled by the enlargement normalizer
    b_{d-n} r^{d-n}; a weak approximation of the mean density at x."""
    if not 0.0 < r <= 1.0:
        raise ValueError(f"enlargement radius must lie in (0, 1], got {r}")
    n, d = model.n, model.d
    denom = unit_ball_volume(d - n) * r ** (d - n)
    batch = sample_batch(model, _unit_query_window(x), seed, replicates)
    return _hit_prob_from_batch(batch, x, r, scale=1.0 / denom)


def ball_average_density(
    model: ModelSpec, x: Point, r: float, replicates: int, seed: int
) -> PointEstimate:
    """Mean H^n mass of the set inside B_r(x), scaled by the ball volume
    b_d r^d; unbiased for stationary sets at every radius."""
    if r <= 0:
        raise ValueError(f"radius must be > 0, got {r}")
    n, d = model.n, model.d
    if n >= d:
        raise ValueError("ball averages need n < d; solid sets use coverage probabilities")
    batch = sample_batch(model, _unit_query_window(x), seed, replicates)
    return _ball_average_from_batch(batch, x, r)


def _ball_average_from_batch(batch: RealizationBatch, x: Point, r: float) -> PointEstimate:
    qx, qy = _embed_query(x)
    masses = kernels.ball_measure_batch(batch.kinds, batch.params, batch.offsets, qx, qy, r)
    denom = unit_ball_volume(batch.d) * r**batch.d
    return _mean_estimate(masses, 1.0 / denom)


# --------------------------------------------------------------------------
# Field and integrated estimators
# --------------------------------------------------------------------------


def _grid_midpoints(region: Window, grid_per_axis: int) -> tuple[np.ndarray, np.ndarray, tuple[int, ...]]:
    lo = region.lo.coords
    hi = region.hi.coords
    if region.d == 1:
        h = (hi[0] - lo[0]) / grid_per_axis
        xs = lo[0] + (np.arange(grid_per_axis) + 0.5) * h
        return xs, np.zeros_like(xs), (grid_per_axis,)
    h0 = (hi[0] - lo[0]) / grid_per_axis
    h1 = (hi[1] - lo[1]) / grid_per_axis
    x_axis = lo[0] + (np.arange(grid_per_axis) + 0.5) * h0
    y_axis = lo[1] + (np.arange(grid_per_axis) + 0.5) * h1
    xs = np.repeat(x_axis, grid_per_axis)
    ys = np.tile(y_axis, grid_per_axis)
    return xs, ys, (grid_per_axis, grid_per_axis)


def density_field(
    model: ModelSpec, config: EstimatorConfig, r: float, workers: int = 1
) -> DensityField:
    """Enlargement density at every grid-cell midpoint of the region,
    sharing the same realizations across cells (common random numbers)."""
    if not 0.0 < r <= 1.0:
        raise ValueError(f"enlargement radius must lie in (0, 1], got {r}")
    batch = sample_batch(model, config.clip_window, config.seed, config.replicates, workers=workers)
    cell_counts, _ = _field_counts(batch, config, r)
    return _field_from_counts(batch, config, r, cell_counts)


def _field_counts(batch: RealizationBatch, config: EstimatorConfig, r: float):
    xs, ys, _ = _grid_midpoints(config.region, config.grid_per_axis)
    return kernels.field_hits(batch.kinds, batch.params, batch.offsets, xs, ys, r)


def _field_from_counts(batch, config, r, cell_counts) -> DensityField:
    _, _, shape = _grid_midpoints(config.region, config.grid_per_axis)
    m = batch.replicates
    denom = unit_ball_volume(batch.d - batch.n) * r ** (batch.d - batch.n)
    p = cell_counts / m
    values = (p / denom).reshape(shape)
    stderrs = (np.sqrt(p * (1.0 - p) / m) / denom).reshape(shape)
    return DensityField(config.region, shape, r, values, stderrs, m)


def integrated_estimate(
    model: ModelSpec, config: EstimatorConfig, r: float, workers: int = 1
) -> PointEstimate:
    """Midpoint quadrature of the enlargement-density field over the
    region: the region's mass under the weak approximating measure."""
    if not 0.0 < r <= 1.0:
        raise ValueError(f"enlargement radius must lie in (0, 1], got {r}")
    batch = sample_batch(model, config.clip_window, config.seed, config.replicates, workers=workers)
    return _integrated_from_batch(batch, config, r)


def _integrated_from_batch(batch: RealizationBatch, config: EstimatorConfig, r: float) -> PointEstimate:
    _, per_real = _field_counts(batch, config, r)
    n_cells = config.grid_per_axis ** config.region.d
    cell_vol = config.region.volume / n_cells
    denom = unit_ball_volume(batch.d - batch.n) * r ** (batch.d - batch.n)
    per_real_integral = per_real * cell_vol
    return _mean_estimate(per_real_integral, 1.0 / denom)


def expected_measure_oracle(
    model: ModelSpec,
    region: Window,
    replicates: int,
    seed: int,
    workers: int = 1,
    solid_resolution: int = 128,
) -> PointEstimate:
    """Direct Monte Carlo mean of H^n(set within region): the brute-force
    ground truth the enlargement family converges to.

    Curve and point sets (n < d) sum exact per-grain clipped measures
    (pairwise overlaps are null); solid sets integrate the membership
    indicator on a grid, which carries the documented quadrature error.
    """
    n, d = model.n, model.d
    batch = sample_batch(model, region, seed, replicates, lane=LANE_ORACLE, workers=workers)
    if n < d:
        masses = np.fromiter(
            (sum(clip_measure(g, region) for g in s.grains) for s in batch.sets),
            dtype=np.float64,
            count=replicates,
        )
        return _mean_estimate(masses, 1.0)
    xs, ys, _ = _grid_midpoints(region, solid_resolution)
    _, per_real = kernels.field_hits(batch.kinds, batch.params, batch.offsets, xs, ys, 0.0)
    cell_vol = region.volume / len(xs)
    return _mean_estimate(per_real * cell_vol, 1.0)


# --------------------------------------------------------------------------
# References (closed forms where the model has one)
# --------------------------------------------------------------------------


def stationary_density(model: ModelSpec) -> float | None:
    """Constant mean density for stationary models; None otherwise."""
    if isinstance(model, PoissonLineModel):
        return model.intensity
    if isinstance(model, PoissonSegmentModel):
        return model.center_intensity * model.length_law.mean
    if isinstance(model, BirthGrowthModel) and isinstance(model.nucleation, ConstantRate):
        a = model.nucleation.rate
        g = model.growth_speed
        t = model.horizon
        covered = a * math.pi * g * g * t**3 / 3.0
        if model.target == "boundary":
            return math.exp(-covered) * a * math.pi * g * t * t
        return 1.0 - math.exp(-covered)
    return None


def hit_prob_closed_form(model: ModelSpec, r: float) -> float | None:
    """Exact coverage probability for models with one (any interior x)."""
    if isinstance(model, PoissonLineModel):
        return 1.0 - math.exp(-2.0 * r * model.intensity)
    if isinstance(model, PoissonSegmentModel):
        lam = model.center_intensity
        stadium = 2.0 * model.length_law.mean * r + math.pi * r * r
        return 1.0 - math.exp(-lam * stadium)
    return None


def pointwise_reference(model: ModelSpec, x: Point) -> float | None:
    """Mean density at x, when a closed form exists."""
    if isinstance(model, RandomPointModel):
        return model.pdf.pdf(x)
    return stationary_density(model)


def _density_mass(pdf, region: Window) -> float | None:
    """P(X in region) for the point-density specs."""
    from .processes import AffineX, GaussianTruncated, UniformBox

    box = pdf.window
    lo = [max(a, b) for a, b in zip(box.lo.coords, region.lo.coords)]
    hi = [min(a, b) for a, b in zip(box.hi.coords, region.hi.coords)]
    if any(a >= b for a, b in zip(lo, hi)):
        return 0.0
    if isinstance(pdf, UniformBox):
        return math.prod(b - a for a, b in zip(lo, hi)) / box.volume
    if isinstance(pdf, AffineX):
        m = 0.5 * (box.lo.coords[0] + box.hi.coords[0])
        a1, b1 = lo[0], hi[0]
        mass1 = (b1 - a1) + 0.5 * pdf.slope * ((b1 - m) ** 2 - (a1 - m) ** 2)
        rest = math.prod(b - a for a, b in zip(lo[1:], hi[1:]))
        return mass1 * rest / box.volume
    if isinstance(pdf, GaussianTruncated):
        mass = 1.0
        for mean, a, b, wlo, whi in zip(
            pdf.mean.coords, lo, hi, box.lo.coords, box.hi.coords
        ):
            s = pdf.sigma * math.sqrt(2.0)
            num = math.erf((b - mean) / s) - math.erf((a - mean) / s)
            den = math.erf((whi - mean) / s) - math.erf((wlo - mean) / s)
            mass *= num / den
        return mass
    return None


def expected_measure_reference(model: ModelSpec, region: Window) -> float | None:
    """Exact expected H^n mass of the set inside the region, when known."""
    if isinstance(model, RandomPointModel):
        return _density_mass(model.pdf, region)
    dens = stationary_density(model)
    if dens is not None:
        return dens * region.volume
    return None


# --------------------------------------------------------------------------
# Radius sweeps
# --------------------------------------------------------------------------

EstimatorKind = Literal["enlargement", "ball_average", "integrated"]


def radius_sweep(
    model: ModelSpec,
    config: EstimatorConfig,
    estimator_kind: EstimatorKind,
    workers: int = 1,
) -> SweepReport:
    """One row per configured radius, sharing realizations across radii.

    The reference column holds the r-independent limit: a closed form when
    the model has one, otherwise the direct expected-measure oracle (its
    stderr is recorded in the metadata).  Pointwise kinds evaluate at the
    region's center.
    """
    if estimator_kind not in ("enlargement", "ball_average", "integrated"):
        raise ValueError(f"unknown estimator kind {estimator_kind!r}")
    n, d = model.n, model.d
    meta = {
        "estimator": estimator_kind,
        "model": type(model).__name__,
        "seed": config.seed,
        "replicates": config.replicates,
    }
    rows = []
    if estimator_kind == "integrated":
        batch = sample_batch(model, config.clip_window, config.seed, config.replicates, workers=workers)
        reference = expected_measure_reference(model, config.region)
        if reference is None:
            oracle = expected_measure_oracle(
                model, config.region, config.replicates, config.seed, workers=workers
            )
            reference = oracle.value
            meta["reference_source"] = "oracle"
            meta["reference_stderr"] = oracle.stderr
        else:
            meta["reference_source"] = "closed_form"
        for r in config.radii:
            est = _integrated_from_batch(batch, config, r)
            rows.append(SweepRow(r, est, reference, abs(est.value - reference)))
        return SweepReport(tuple(rows), meta)

    x = config.region.center
    meta["query_point"] = x.coords
    batch = sample_batch(model, _unit_query_window(x), config.seed, config.replicates, workers=workers)
    reference = pointwise_reference(model, x)
    if reference is not None:
        meta["reference_source"] = "closed_form"
    else:
        # fall back to the region-averaged density from the direct oracle
        # (exact at the center for densities affine over the region)
        oracle = expected_measure_oracle(
            model, config.region, config.replicates, config.seed, workers=workers
        )
        reference = oracle.value / config.region.volume
        meta["reference_source"] = "oracle_region_average"
        meta["reference_stderr"] = oracle.stderr / config.region.volume
    for r in config.radii:
        if estimator_kind == "enlargement":
            denom = unit_ball_volume(d - n) * r ** (d - n)
            est = _hit_prob_from_batch(batch, x, r, scale=1.0 / denom)
        else:
            if n >= d:
                raise ValueError("ball averages need n < d")
            est = _ball_average_from_batch(batch, x, r)
        rows.append(SweepRow(r, est, reference, abs(est.value - reference)))
    return SweepReport(tuple(rows), meta)


# --------------------------------------------------------------------------
# Union factorization and the covering bound
# --------------------------------------------------------------------------


def factorization_ratios(
    model: GrainUnionModel, x: Point, r: float, replicates: int, seed: int
) -> FactorizationRatios:
    """Check that the union coverage ratio, the expected enlarged-grain
    count ratio, and mean count times the single-grain ratio agree, and
    track how fast multiple coverage decays.

    All four share the same realizations.  The single-grain ratio uses the
    first grain of each realization: grains are i.i.d. from the grain law
    and drawn after the count, so the first grain is an exact sample of
    the law independent of the count; when the count is identically one,
    the union, count and factored estimates use literally the same
    indicator.
    """
    if not isinstance(model, GrainUnionModel):
        raise TypeError("factorization ratios require a grain-union model")
    if not 0.0 < r <= 1.0:
        raise ValueError(f"radius must lie in (0, 1], got {r}")
    n, d = model.n, model.d
    denom = unit_ball_volume(d - n) * r ** (d - n)
    qx, qy = _embed_query(x)

    batch = sample_batch(model, _unit_query_window(x), seed, replicates)
    counts = kernels.count_within_batch(batch.kinds, batch.params, batch.offsets, qx, qy, r)
    union_hits = int(np.count_nonzero(counts >= 1))
    overlap_hits = int(np.count_nonzero(counts >= 2))

    union_ratio = _binomial_estimate(union_hits, replicates, 1.0 / denom)
    count_ratio = _mean_estimate(counts.astype(np.float64), 1.0 / denom)
    # decay diagnostic is normalized by r^{d-n} alone
    overlap_ratio = _binomial_estimate(overlap_hits, replicates, 1.0 / r ** (d - n))

    first_rows = batch.offsets[:-1]
    single_offsets = np.arange(replicates + 1, dtype=np.int64)
    single_dists = kernels.min_dist_batch(
        batch.kinds[first_rows], batch.params[first_rows], single_offsets, qx, qy
    )
    single_hits = int(np.count_nonzero(single_dists <= r))
    factored = _binomial_estimate(single_hits, replicates, model.count.mean / denom)

    return FactorizationRatios(union_ratio, count_ratio, factored, overlap_ratio)


def covering_bound_check(s: RealizedSet, r: float, resolution: int) -> CoveringCheck | None:
    """Compare the normalized enlargement volume of the clipped realization
    against the covering-argument ceiling (1/gamma) 2^n 4^d b_d / b_{d-n}.

    Returns None when the realization is empty inside its window (nothing
    to bound).  A False ``ok`` indicates a geometry bug: the ceiling is a
    theorem for any compact set with a certified concentration constant.
    """
    if not 0.0 < r < 2.0:
        raise ValueError(f"covering bound holds for r in (0, 2), got {r}")
    gamma = concentration_bound(s)
    if gamma is None:
        return None
    clipped = restrict_to_window(s)
    n, d = s.n, s.d
    quad_window = dilate_window(s.valid_window, r)
    denom = unit_ball_volume(d - n) * r ** (d - n)
    lhs = enlargement_volume(clipped, quad_window, r, resolution) / denom
    rhs = (1.0 / gamma) * 2.0**n * 4.0**d * unit_ball_volume(d) / unit_ball_volume(d - n)
    return CoveringCheck(lhs, rhs, gamma, lhs <= rhs)
