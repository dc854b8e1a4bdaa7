"""Support functions and mean widths of symmetric random polytopes via
Orlicz-norm inversion, with Monte Carlo oracles."""

from .bodies import (
    BodySpec,
    Direction,
    MarginalDensity,
    SampleBatch,
    coordinate_marginal,
    isotropic_constant,
    isotropy_report,
    marginal_coordinate,
    marginal_general,
    normalization_scale,
    sample_sphere,
    sample_uniform,
    support_function,
)
from .errors import (
    AccuracyError,
    DegenerateParameterError,
    DomainError,
    EstimationError,
    HypothesisError,
    RangeError,
)
from .estimators import (
    DirectionScan,
    EstimateReport,
    PolytopeExperiment,
    ScanResult,
    direction_measure_scan,
    expected_support_mc,
    expected_support_orlicz,
    general_upper_bound,
    mean_width_mc,
    mean_width_orlicz,
    scaling_fit,
    solve_tilde_s,
    sphere_average_m,
)
from .mathkit import (
    Interval,
    QuadratureSpec,
    SinCosParams,
    ball_volume,
    ball_volume_ratio,
    log1p_pow,
    log_gamma,
    quad_adaptive,
    sincos_recursion,
)
from .orlicz import (
    MTailSpec,
    OrliczFunction,
    invert_for_support,
    legendre_dual,
    luxemburg_norm,
    m_empirical,
    m_from_tail,
    m_from_tail_alt,
    m_pball_first,
    m_pball_second,
    m_spherical,
)

__version__ = "0.1.0"
