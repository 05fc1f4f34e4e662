"""Invariant metrics on classical complex domains.

Kobayashi metric on punctured planar domains (covering maps and the
elliptic modular function) and Bergman metric on the unit ball and the
ring domain ``{r < |z| < 1}`` in C^2 (kernel series).
"""

from .core import MetricSample, PuncturedDiskPoint, UpperHalfPlanePoint
from .covering import (
    MobiusMap,
    kobayashi_punctured_disk,
    kobayashi_punctured_domain_bounds,
    kobayashi_via_covering,
    mobius_to_disk,
)
from .modular import (
    CUSP_THRESHOLD,
    DEFAULT_POLICY,
    InversionError,
    LambdaInversionResult,
    SeriesValue,
    TruncationError,
    TruncationPolicy,
    eval_D,
    eval_lambda,
    eval_lambda_prime,
    eval_N,
    invert_lambda_near_zero,
    kobayashi_c_minus_two_points,
)
from .bergman import (
    AxisEvalPoint,
    BasisCoefficients,
    CoefficientTriple,
    RingDomainSpec,
    ball_metric,
    basis_renormalization,
    comparability_bounds,
    comparison_coefficients,
    cross_term_A,
    full_metric_ring,
    normal_metric_ring,
    ring_kernel_diagonal,
    ring_metric,
    tangential_metric_ring,
)

__version__ = "0.1.0"
