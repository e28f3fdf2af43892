"""Mean densities of lower-dimensional random closed sets.

Monte Carlo estimators of coverage-probability density approximations for
random point, curve and disk processes, backed by exact geometry kernels,
deterministic grid quadrature and seeded reproducible samplers.
"""

__version__ = "0.1.0"

from ._backend import active_backend
from .estimators import (
    DensityField,
    EstimatorConfig,
    PointEstimate,
    SweepReport,
    ball_average_density,
    covering_bound_check,
    density_field,
    enlargement_density,
    expected_measure_oracle,
    factorization_ratios,
    hit_prob,
    integrated_estimate,
    radius_sweep,
)
from .geometry import (
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
    distance,
    distance_to_set,
    dilate_window,
    enlargement_volume,
    in_enlargement,
    measure_in_ball,
    point,
    unit_ball_volume,
    window,
)
from .mincontent import DeterministicSet, content_sweep, minkowski_ratio
from .processes import (
    AffineX,
    BirthGrowthModel,
    ConstantRate,
    Deterministic,
    FixedLength,
    GaussianTruncated,
    GeometricOnPositives,
    GrainUnionModel,
    OnePlusPoisson,
    PoissonLineModel,
    PoissonSegmentModel,
    RandomPointModel,
    RngStream,
    SegmentLaw,
    UniformBox,
    UniformLength,
    concentration_bound,
    extend_segment_to_min_length,
    sample,
    sample_birth_growth,
)

__all__ = [
    "__version__",
    "active_backend",
    # geometry
    "Arc", "Circle", "Disk", "Grain", "Line", "Point", "PointGrain",
    "RealizedSet", "Segment", "Window", "boundary_arcs", "clip_measure",
    "distance", "distance_to_set", "dilate_window", "enlargement_volume",
    "in_enlargement", "measure_in_ball", "point", "unit_ball_volume", "window",
    # processes
    "AffineX", "BirthGrowthModel", "ConstantRate", "Deterministic",
    "FixedLength", "GaussianTruncated", "GeometricOnPositives",
    "GrainUnionModel", "OnePlusPoisson", "PoissonLineModel",
    "PoissonSegmentModel", "RandomPointModel", "RngStream", "SegmentLaw",
    "UniformBox", "UniformLength", "concentration_bound",
    "extend_segment_to_min_length", "sample", "sample_birth_growth",
    # estimators
    "DensityField", "EstimatorConfig", "PointEstimate", "SweepReport",
    "ball_average_density", "covering_bound_check", "density_field",
    "enlargement_density", "expected_measure_oracle", "factorization_ratios",
    "hit_prob", "integrated_estimate", "radius_sweep",
    # minkowski content
    "DeterministicSet", "content_sweep", "minkowski_ratio",
]
