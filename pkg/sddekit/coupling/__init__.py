from .metric import MetricSpec, d_metric
from .runs import (
    ContractionEstimate,
    ControlSpec,
    CoupledRun,
    contraction_estimate,
    gamma_admissible,
    n0_bound,
    pursue,
    run_controlled,
    run_synchronous,
)
from .studies import (
    ApproximationReport,
    SupportProbeReport,
    approximation_study,
    bridge_target,
    mollification_gap,
    support_probe,
)

__all__ = [
    'ApproximationReport',
    'ContractionEstimate',
    'ControlSpec',
    'CoupledRun',
    'MetricSpec',
    'SupportProbeReport',
    'approximation_study',
    'bridge_target',
    'contraction_estimate',
    'd_metric',
    'gamma_admissible',
    'mollification_gap',
    'n0_bound',
    'pursue',
    'run_controlled',
    'run_synchronous',
    'support_probe',
]
