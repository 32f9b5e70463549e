"""Monotonicity-pattern classification for ratios of real power series.

Given two power series A and B with positive denominator coefficients,
the monotone segmentation of the coefficient-ratio sequence {a_k/b_k}
determines, together with endpoint signs of the H-function
H = (A'/B') B - A, the guaranteed shape of x -> A(x)/B(x) on (0, r):
monotone, one interior extremum, two interior extrema, or (for three or
more ratio changes) only a bound on how often the direction can change.
Turning points are localized as sign-change brackets of H, and every
verdict can be validated against dense samples of the ratio itself.
"""

from .config import AnalysisConfig, DEFAULT_CONFIG
from .errors import (
    AmbiguousClassificationError,
    ClassificationIncompleteError,
    DomainError,
    HypothesisViolationError,
    InsufficientDataError,
    LocalizationFailureError,
    RatioMonoError,
    SingularPointError,
    TruncationError,
    UndeterminedLimitError,
)
from .series import (
    GeometricTail,
    IndexScheme,
    PowerSeries,
    ZERO_TAIL,
    coeffs_from_derivatives,
    derivative,
    evaluate,
    pochhammer,
)
from .kernels import (
    KernelKind,
    KernelSpec,
    kernel_h_expression,
    kernel_h_limit,
    kernel_ratio_sequence,
    make_kernel,
)
from .profile import (
    Direction,
    RatioProfile,
    Segment,
    build_profile,
    shift_profile,
    validate_denominator,
)
from .instance import (
    RatioPair,
    RatioTail,
    TailKind,
    pair_from_kernel,
    pair_from_polynomials,
    pair_from_ratio_sequence,
)
from .hfunc import (
    EndpointSignature,
    HEvaluator,
    IdentityReport,
    Sign,
    SignValue,
    check_identities,
    h_at_zero,
    h_endpoint_limit,
    h_value,
)
from .patterns import ClassificationReport, MonotonicityPattern, Rule, Shape
from .classify import (
    LocalBehavior,
    ScanResult,
    classify,
    classify_two_changes,
    endpoint_signature,
    local_behavior,
    max_changes_bound,
    scan_h_sign,
)
from .turning import RootBracket, locate_turning_points
from .verify import (
    FUZZ_ALGORITHM,
    FuzzInstance,
    VerificationReport,
    count_sign_changes,
    fuzz_instances,
    verify_pattern,
)

__version__ = "0.1.0"
