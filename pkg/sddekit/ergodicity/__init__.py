from .chains import (
    DistanceCurve,
    NormalFit,
    TransitionContraction,
    distance_curve,
    normal_fit_check,
    skeleton,
    stationary_estimate,
    transition_contraction,
)
from .lyapunov import (
    LogCorrectedPhi,
    LyapunovReport,
    LyapunovSpec,
    PowerPhi,
    lyapunov_catalog,
    lyapunov_drift_check,
)
from .rates import RateEnvelope, RateFunctions, fit_rate_envelope, rate_bound, rate_functions
from .transport import empirical_coupling_distance, kr_dual_value

__all__ = [
    'DistanceCurve',
    'LogCorrectedPhi',
    'LyapunovReport',
    'LyapunovSpec',
    'NormalFit',
    'PowerPhi',
    'RateEnvelope',
    'RateFunctions',
    'TransitionContraction',
    'distance_curve',
    'empirical_coupling_distance',
    'fit_rate_envelope',
    'kr_dual_value',
    'lyapunov_catalog',
    'lyapunov_drift_check',
    'normal_fit_check',
    'rate_bound',
    'rate_functions',
    'skeleton',
    'stationary_estimate',
    'transition_contraction',
]
