from .grid import PathGrid, Segment, TimeGrid, segment_at, steps_of, sup_dist
from .integrator import em_simulate, em_step, replay
from .model import (
    AssumptionReport,
    CallbackModel,
    SddeModel,
    standard_probe_cloud,
    verify_assumptions,
)
from .noise import BrownianNoise

__all__ = [
    'AssumptionReport',
    'BrownianNoise',
    'CallbackModel',
    'PathGrid',
    'SddeModel',
    'Segment',
    'TimeGrid',
    'em_simulate',
    'em_step',
    'replay',
    'segment_at',
    'standard_probe_cloud',
    'steps_of',
    'sup_dist',
    'verify_assumptions',
]
