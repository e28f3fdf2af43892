"""Seeded, reproducible samplers for five random-closed-set families.

Each sampler draws one realization complete within the 1-dilation of the
requested window: every grain of the (possibly infinite) process that
meets that region is present.  Samplers may keep a superset of those
grains; downstream measurements always clip.

Reproducibility contract: a realization is a pure function of
``(model, window, RngStream)``.  Draw order per realization is fixed and
documented on each sampler, so batches can be generated concurrently with
one substream per realization index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .geometry import (
    TWO_PI,
    Arc,
    Circle,
    Disk,
    Grain,
    Line,
    Point,
    PointGrain,
    RealizedSet,
    Segment,
    Window,
    boundary_arcs,
    clip_measure,
    dilate_window,
    point,
    restrict_to_window,
)

_MAX_REJECTION_TRIES = 100_000


@dataclass(frozen=True)
class RngStream:
    """Substream key: equal (master_seed, stream_id) pairs replay the same
    draws; distinct stream_ids are statistically independent."""

    master_seed: int
    stream_id: int

    def generator(self) -> np.random.Generator:
        key = (self.stream_id & 0xFFFFFFFF, (self.stream_id >> 32) & 0xFFFFFFFF)
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=key)
        return np.random.default_rng(seq)


# --------------------------------------------------------------------------
# Distribution specs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Deterministic:
    value: int

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("count must be >= 1")

    @property
    def mean(self) -> float:
        return float(self.value)

    def sample(self, rng) -> int:
        return self.value


@dataclass(frozen=True)
class GeometricOnPositives:
    """Geometric law on {1, 2, ...} with success probability p."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError("geometric parameter must lie in (0, 1)")

    @property
    def mean(self) -> float:
        return 1.0 / self.p

    def sample(self, rng) -> int:
        return int(rng.geometric(self.p))


@dataclass(frozen=True)
class OnePlusPoisson:
    """1 + Poisson(rate): positive support, mean 1 + rate."""

    rate: float

    def __post_init__(self):
        if self.rate < 0.0:
            raise ValueError("poisson rate must be >= 0")

    @property
    def mean(self) -> float:
        return 1.0 + self.rate

    def sample(self, rng) -> int:
        return 1 + int(rng.poisson(self.rate))


CountLaw = Union[Deterministic, GeometricOnPositives, OnePlusPoisson]


@dataclass(frozen=True)
class FixedLength:
    value: float

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("length must be > 0")

    @property
    def mean(self) -> float:
        return self.value

    @property
    def max(self) -> float:
        return self.value

    def sample(self, rng) -> float:
        # fixed laws consume no draws
        return self.value


@dataclass(frozen=True)
class UniformLength:
    lo: float
    hi: float

    def __post_init__(self):
        if not 0 < self.lo <= self.hi:
            raise ValueError("need 0 < lo <= hi for uniform lengths")

    @property
    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def max(self) -> float:
        return self.hi

    def sample(self, rng) -> float:
        return self.lo + (self.hi - self.lo) * rng.random()


LengthLaw = Union[FixedLength, UniformLength]


@dataclass(frozen=True)
class UniformBox:
    window: Window

    def sample(self, rng) -> Point:
        u = rng.random(self.window.d)
        return Point(
            tuple(lo + du * (hi - lo) for lo, hi, du in zip(self.window.lo.coords, self.window.hi.coords, u))
        )

    def pdf(self, x: Point) -> float:
        return 1.0 / self.window.volume if self.window.contains(x) else 0.0


@dataclass(frozen=True)
class AffineX:
    """Density proportional to 1 + slope * (x1 - box center) on the box.

    The centered form keeps the normalization constant equal to the box
    volume and stays nonnegative exactly when |slope| * half_width <= 1.
    """

    window: Window
    slope: float

    def __post_init__(self):
        half = 0.5 * self.window.sizes[0]
        if abs(self.slope) * half > 1.0:
            raise ValueError(
                f"affine density slope {self.slope} is negative somewhere on the box: "
                f"need |slope| * {half} <= 1"
            )

    def sample(self, rng) -> Point:
        # first axis by inverse CDF of the linear marginal, others uniform
        lo = self.window.lo.coords[0]
        hi = self.window.hi.coords[0]
        x1 = _linear_inverse_cdf(lo, hi, self.slope, rng.random())
        rest = [
            a + rng.random() * (b - a)
            for a, b in zip(self.window.lo.coords[1:], self.window.hi.coords[1:])
        ]
        return Point((x1, *rest))

    def pdf(self, x: Point) -> float:
        if not self.window.contains(x):
            return 0.0
        m = 0.5 * (self.window.lo.coords[0] + self.window.hi.coords[0])
        return (1.0 + self.slope * (x.coords[0] - m)) / self.window.volume


def _linear_inverse_cdf(lo: float, hi: float, slope: float, u: float) -> float:
    """Quantile of density proportional to 1 + slope*(x - mid) on [lo, hi]."""
    if slope == 0.0:
        return lo + u * (hi - lo)
    mid = 0.5 * (lo + hi)
    t_lo = lo - mid
    beta = 0.5 * slope * t_lo * t_lo + t_lo + u * (hi - lo)
    disc = max(1.0 + 2.0 * slope * beta, 0.0)
    t = (-1.0 + math.sqrt(disc)) / slope
    return min(max(mid + t, lo), hi)


@dataclass(frozen=True)
class GaussianTruncated:
    """Isotropic Gaussian restricted to the box, sampled by rejection."""

    mean: Point
    sigma: float
    window: Window

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if self.mean.d != self.window.d:
            raise ValueError("mean and window dimensions differ")

    def sample(self, rng) -> Point:
        for _ in range(_MAX_REJECTION_TRIES):
            cand = Point(
                tuple(m + self.sigma * z for m, z in zip(self.mean.coords, rng.standard_normal(self.window.d)))
            )
            if self.window.contains(cand):
                return cand
        raise RuntimeError("truncated gaussian rejection did not terminate; window too far in the tail")

    def pdf(self, x: Point) -> float:
        if not self.window.contains(x):
            return 0.0
        d = self.window.d
        dens = 1.0
        norm = 1.0
        for m, c, lo, hi in zip(self.mean.coords, x.coords, self.window.lo.coords, self.window.hi.coords):
            z = (c - m) / self.sigma
            dens *= math.exp(-0.5 * z * z) / (self.sigma * math.sqrt(TWO_PI))
            norm *= 0.5 * (math.erf((hi - m) / (self.sigma * math.sqrt(2.0))) - math.erf((lo - m) / (self.sigma * math.sqrt(2.0))))
        return dens / norm


DensitySpec = Union[UniformBox, AffineX, GaussianTruncated]


@dataclass(frozen=True)
class SegmentLaw:
    """I.i.d. segments: random center, random length, isotropic orientation
    uniform on (0, pi]."""

    center_density: DensitySpec
    length_law: LengthLaw


@dataclass(frozen=True)
class CircleLaw:
    center_density: DensitySpec
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("circle radius must be > 0")


GrainLaw = Union[SegmentLaw, CircleLaw]


@dataclass(frozen=True)
class ConstantRate:
    rate: float

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError("nucleation rate must be >= 0")


@dataclass(frozen=True)
class AffineRate:
    """Space-inhomogeneous nucleation a * (1 + slope*(x1 - region center))."""

    rate: float
    slope: float

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError("nucleation rate must be >= 0")


NucleationLaw = Union[ConstantRate, AffineRate]


# --------------------------------------------------------------------------
# Models
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RandomPointModel:
    """A single random point with the given probability density (n = 0)."""

    pdf: DensitySpec

    n = 0

    @property
    def d(self) -> int:
        return self.pdf.window.d


@dataclass(frozen=True)
class GrainUnionModel:
    """Union of a random positive number of i.i.d. grains (n = 1)."""

    count: CountLaw
    grain: GrainLaw

    n = 1
    d = 2


@dataclass(frozen=True)
class PoissonLineModel:
    """Stationary isotropic Poisson line process in the plane.

    ``intensity`` is the mean line length per unit area; the number of
    lines hitting a ball of radius rho is Poisson with mean
    2 * rho * intensity.
    """

    intensity: float

    n = 1
    d = 2

    def __post_init__(self):
        if not self.intensity > 0:
            raise ValueError("line intensity must be > 0")


@dataclass(frozen=True)
class PoissonSegmentModel:
    """Stationary Poisson segment process: centers Poisson with constant
    intensity per unit area, isotropic orientations."""

    center_intensity: float
    length_law: LengthLaw

    n = 1
    d = 2

    def __post_init__(self):
        if not self.center_intensity > 0:
            raise ValueError("center intensity must be > 0")


@dataclass(frozen=True)
class BirthGrowthModel:
    """Space-time Poisson nuclei grown at constant speed up to a horizon.

    ``target`` selects the realized set: "boundary" yields the arcs of the
    grown union's boundary (n = 1), "solid" the disks themselves (n = 2).
    """

    nucleation: NucleationLaw
    growth_speed: float
    horizon: float
    target: str = "boundary"

    d = 2

    def __post_init__(self):
        if not self.growth_speed > 0:
            raise ValueError("growth speed must be > 0")
        if not self.horizon > 0:
            raise ValueError("time horizon must be > 0")
        if self.target not in ("boundary", "solid"):
            raise ValueError(f"target must be 'boundary' or 'solid', got {self.target!r}")

    @property
    def n(self) -> int:
        return 1 if self.target == "boundary" else 2


ModelSpec = Union[
    RandomPointModel, GrainUnionModel, PoissonLineModel, PoissonSegmentModel, BirthGrowthModel
]


def model_dims(model: ModelSpec) -> tuple[int, int]:
    """(Hausdorff dimension of the set, ambient dimension)."""
    return model.n, model.d


# --------------------------------------------------------------------------
# Sampling
# --------------------------------------------------------------------------


def _orientation(rng) -> float:
    # uniform on (0, pi]
    return (1.0 - rng.random()) * math.pi


def _segment_from(center: Point, length: float, angle: float) -> Segment:
    hx = 0.5 * length * math.cos(angle)
    hy = 0.5 * length * math.sin(angle)
    return Segment(point(center.x - hx, center.y - hy), point(center.x + hx, center.y + hy))


def sample(model: ModelSpec, w: Window, rng: RngStream) -> RealizedSet:
    """One realization, complete within ``dilate_window(w, 1)``.

    Draw orders (per realization, in sequence):
      random point   : the single point
      grain union    : count, then per grain center, length (if random),
                       orientation
      poisson line   : line count, then per line offset, angle
      poisson segment: segment count, then per segment center, length,
                       orientation
      birth growth   : nucleus count, then per nucleus time, position
    """
    gen = rng.generator()
    target_window = dilate_window(w, 1.0)

    if isinstance(model, RandomPointModel):
        grains: list[Grain] = [PointGrain(model.pdf.sample(gen))]
        return RealizedSet(tuple(grains), 0, target_window)

    if isinstance(model, GrainUnionModel):
        count = model.count.sample(gen)
        grains = []
        for _ in range(count):
            grains.append(_draw_grain(model.grain, gen))
        return RealizedSet(tuple(grains), 1, target_window)

    if isinstance(model, PoissonLineModel):
        rho = target_window.circumradius
        c = target_window.center
        n_lines = int(gen.poisson(2.0 * rho * model.intensity))
        grains = []
        for _ in range(n_lines):
            p_rel = rho * (2.0 * gen.random() - 1.0)
            angle = _orientation(gen)
            offset = p_rel + c.x * math.cos(angle) + c.y * math.sin(angle)
            grains.append(Line(offset, angle))
        return RealizedSet(tuple(grains), 1, target_window)

    if isinstance(model, PoissonSegmentModel):
        region = dilate_window(w, 1.0 + 0.5 * model.length_law.max)
        n_seg = int(gen.poisson(model.center_intensity * region.volume))
        grains = []
        for _ in range(n_seg):
            center = UniformBox(region).sample(gen)
            length = model.length_law.sample(gen)
            grains.append(_segment_from(center, length, _orientation(gen)))
        return RealizedSet(tuple(grains), 1, target_window)

    if isinstance(model, BirthGrowthModel):
        return sample_birth_growth(model, w, rng)

    raise TypeError(f"not a model spec: {model!r}")


def _draw_grain(law: GrainLaw, gen) -> Grain:
    if isinstance(law, SegmentLaw):
        center = law.center_density.sample(gen)
        length = law.length_law.sample(gen)
        return _segment_from(center, length, _orientation(gen))
    if isinstance(law, CircleLaw):
        center = law.center_density.sample(gen)
        return Circle(center, law.radius)
    raise TypeError(f"not a grain law: {law!r}")


def sample_birth_growth(model: BirthGrowthModel, w: Window, rng: RngStream) -> RealizedSet:
    """Realize the grown union at the model horizon.

    Nuclei form a Poisson process on [0, horizon] x region where the region
    is the window dilated by 1 + speed * horizon, which guarantees that
    every disk able to touch (or cover parts of the boundary inside) the
    1-dilation of ``w`` is present.
    """
    gen = rng.generator()
    t = model.horizon
    region = dilate_window(w, 1.0 + model.growth_speed * t)
    if isinstance(model.nucleation, ConstantRate):
        base, slope = model.nucleation.rate, 0.0
    else:
        base, slope = model.nucleation.rate, model.nucleation.slope
        half = 0.5 * region.sizes[0]
        if abs(slope) * half > 1.0:
            raise ValueError(
                f"affine nucleation slope {slope} goes negative on the sampling region "
                f"(half-width {half})"
            )
    total = base * t * region.volume
    n_nuclei = int(gen.poisson(total))
    times = []
    centers = []
    for _ in range(n_nuclei):
        times.append(t * gen.random())
        if slope == 0.0:
            centers.append(UniformBox(region).sample(gen))
        else:
            centers.append(AffineX(region, slope).sample(gen))
    grains = grow_nuclei(times, centers, model.growth_speed, t, model.target)
    return RealizedSet(tuple(grains), model.n, dilate_window(w, 1.0))


def grow_nuclei(
    times, centers, growth_speed: float, horizon: float, target: str
) -> list[Grain]:
    """Disks of radius speed * (horizon - birth time); boundary target
    returns the union's boundary arcs instead of the disks."""
    disks = [
        Disk(c, growth_speed * (horizon - s))
        for s, c in zip(times, centers)
        if horizon - s > 0.0
    ]
    if target == "solid":
        return list(disks)
    return list(boundary_arcs(disks))


# --------------------------------------------------------------------------
# Segment extension and the concentration bound
# --------------------------------------------------------------------------


def extend_segment_to_min_length(g: Segment, min_length: float) -> Segment:
    """Scale the segment about its midpoint up to ``min_length`` if shorter;
    direction and midpoint are preserved exactly."""
    if not min_length > 0:
        raise ValueError("minimum length must be > 0")
    length = g.length
    if length >= min_length:
        return g
    f = 0.5 * min_length / length
    mx = (g.a.x + g.b.x) / 2.0
    my = (g.a.y + g.b.y) / 2.0
    vx = g.b.x - g.a.x
    vy = g.b.y - g.a.y
    return Segment(point(mx - f * vx, my - f * vy), point(mx + f * vx, my + f * vy))


def _grain_concentration_constant(g: Grain) -> float:
    """Largest certified gamma with H^n(grain within B_r(x)) >= gamma * r^n
    for every x on the grain and r in (0, 1); worst case sits at endpoints."""
    if isinstance(g, PointGrain):
        return 1.0
    if isinstance(g, Segment):
        return min(g.length, 1.0)
    if isinstance(g, Arc):
        # chord length never exceeds arc length, so the segment bound applies
        return min(g.length, 1.0) if g.extent < TWO_PI else 2.0 * min(1.0, g.radius)
    if isinstance(g, Circle):
        return 2.0 * min(1.0, g.radius)
    if isinstance(g, Line):
        # unbounded: every ball around a point on the line holds a diameter
        return 2.0
    raise ValueError(f"no concentration constant for {type(g).__name__}")


def concentration_bound(s: RealizedSet) -> float | None:
    """Certified lower bound for the concentration constant of the
    normalized H^n measure on the realization inside its valid window.

    The witness measure is H^n restricted to the clipped set, divided by
    its total mass; for each x on the clipped set the grain containing x
    supplies mass at least ``grain_constant * r^n`` to any ball B_r(x), so
    the minimum grain constant over the clipped grains divided by the total
    mass is a valid bound.  Returns ``None`` for (effectively) empty sets.
    """
    if s.n not in (0, 1):
        raise ValueError("concentration bounds cover point and curve sets only")
    clipped = restrict_to_window(s)
    if not clipped.grains:
        return None
    if s.n == 0:
        total = float(len(clipped.grains))
        return 1.0 / total
    total = sum(clip_measure(g, s.valid_window) for g in clipped.grains)
    if total <= 0.0:
        return None
    worst = min(_grain_concentration_constant(g) for g in clipped.grains)
    return worst / total
