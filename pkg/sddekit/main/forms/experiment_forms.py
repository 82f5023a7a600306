"""Strict parsing of experiment config documents.

Each section of a document is validated by a WTForms form fed the section's
mapping as ``data``. An unknown key or a bad value raises ``ConfigError``
naming the dotted field.
"""
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import yaml
from wtforms import Field, FloatField, Form, IntegerField, StringField
from wtforms.validators import AnyOf, NumberRange, StopValidation, ValidationError

from ...core.grid import steps_of
from ...errors import ConfigError, GridAlignmentError
from ...functionals import FUNCTIONALS


UNKNOWN_KEY_ERROR_MESSAGE = "Unknown key"
MISSING_KEY_ERROR_MESSAGE = "This key is required"
NOT_A_MAPPING_ERROR_MESSAGE = "Expected a mapping of keys to values"
NOT_A_NUMBER_ERROR_MESSAGE = "Expected a number"
NOT_AN_INTEGER_ERROR_MESSAGE = "Expected a whole number"
NOT_A_STRING_ERROR_MESSAGE = "Expected a string"
NOT_A_LIST_ERROR_MESSAGE = "Expected a number or a list of numbers"
NOT_POSITIVE_ERROR_MESSAGE = "Must be positive"
SEED_RANGE_ERROR_MESSAGE = "Must be an integer in [0, 2^64)"
UNKNOWN_CHOICE_ERROR_MESSAGE = "Must be one of: %(values)s"
NOT_ON_GRID_ERROR_MESSAGE = "Must be an exact multiple of grid.dt"
INVALID_YAML_ERROR_MESSAGE = "Not a valid YAML document: {}"

MAX_SEED = 2 ** 64 - 1

KINDS = ('simulate', 'couple', 'approx-study', 'support-probe', 'ergodic', 'sensitivity', 'tailcheck', 'lyapunov')
KINDS_WITHOUT_MODEL = ('tailcheck',)

# default for keys that must be present
REQUIRED = object()


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


class StrictFloatField(FloatField):
    """A finite number; YAML booleans are not numbers."""

    def process_data(self, value):
        self.data = None
        if value is None:
            return
        if not _is_number(value):
            raise ValueError(NOT_A_NUMBER_ERROR_MESSAGE)
        self.data = float(value)


class StrictIntegerField(IntegerField):

    def process_data(self, value):
        self.data = None
        if value is None:
            return
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(NOT_AN_INTEGER_ERROR_MESSAGE)
        self.data = value


class StrictStringField(StringField):

    def process_data(self, value):
        self.data = None
        if value is None:
            return
        if not isinstance(value, str):
            raise ValueError(NOT_A_STRING_ERROR_MESSAGE)
        self.data = value


class FloatListField(Field):
    """A number or a non-empty list of numbers, always held as a list of floats."""

    def process_data(self, value):
        self.data = None
        if value is None:
            return
        values = value if isinstance(value, list) else [value]
        if not values or not all(_is_number(v) for v in values):
            raise ValueError(NOT_A_LIST_ERROR_MESSAGE)
        self.data = [float(v) for v in values]


class StateField(FloatListField):
    """An initial state: a scalar fills every coordinate, a list gives one per coordinate."""

    def process_data(self, value):
        super().process_data(value)
        if self.data is not None and len(self.data) == 1:
            self.data = self.data[0]


class MappingField(Field):

    def process_data(self, value):
        self.data = None
        if value is None:
            return
        if not isinstance(value, dict):
            raise ValueError(NOT_A_MAPPING_ERROR_MESSAGE)
        self.data = value


class ValueRequired:
    """Stops the chain on a missing value; a value that failed to parse keeps its own message."""

    def __init__(self, message=MISSING_KEY_ERROR_MESSAGE):
        self.message = message

    def __call__(self, form, field):
        if field.data is None:
            raise StopValidation(None if field.process_errors else self.message)


class AllowMissing:

    def __call__(self, form, field):
        if field.data is None:
            raise StopValidation()


class Positive:

    def __init__(self, message=NOT_POSITIVE_ERROR_MESSAGE):
        self.message = message

    def __call__(self, form, field):
        values = field.data if isinstance(field.data, list) else [field.data]
        if any(v <= 0 for v in values):
            raise ValidationError(self.message)


class OnGrid:
    """Every duration must be a whole number of steps of the form's grid."""

    def __init__(self, message=NOT_ON_GRID_ERROR_MESSAGE):
        self.message = message

    def __call__(self, form, field):
        dt = form.step_size()
        if dt is None:
            return
        for value in field.data if isinstance(field.data, list) else [field.data]:
            try:
                steps_of(value, dt, field.short_name)
            except GridAlignmentError:
                raise ValidationError(self.message)


def _field(field_class, default, *validators):
    presence = AllowMissing() if default is None else ValueRequired()
    return field_class(
        validators=[presence] + list(validators),
        default=None if default is REQUIRED else default,
    )


def number(default=REQUIRED, positive=False):
    return _field(StrictFloatField, default, *([Positive()] if positive else []))


def count(default=REQUIRED):
    return _field(StrictIntegerField, default, Positive())


def duration(default=REQUIRED):
    return _field(StrictFloatField, default, Positive(), OnGrid())


def durations():
    return _field(FloatListField, REQUIRED, Positive(), OnGrid())


def numbers(default=REQUIRED):
    return _field(FloatListField, default)


def state(default=REQUIRED):
    return _field(StateField, default)


def choice(values, default=REQUIRED):
    return _field(StrictStringField, default, AnyOf(values, message=UNKNOWN_CHOICE_ERROR_MESSAGE))


class ExperimentSectionForm(Form):
    grid_dt = None

    def step_size(self):
        return self.grid_dt

    @classmethod
    def parse(cls, prefix, document, grid_dt=None):
        """Validate one section and return its values with every default filled."""
        def dotted(key):
            return '{}.{}'.format(prefix, key) if prefix else key

        if document is None:
            document = {}
        if not isinstance(document, dict):
            raise ConfigError(prefix or '<root>', NOT_A_MAPPING_ERROR_MESSAGE)
        form = cls(data=document)
        for key in document:
            if key not in form:
                raise ConfigError(dotted(key), UNKNOWN_KEY_ERROR_MESSAGE)

        form.grid_dt = grid_dt
        if not form.validate():
            for form_field in form:
                if form_field.errors:
                    raise ConfigError(dotted(form_field.short_name), form_field.errors[0])
        return form.data


class DocumentForm(ExperimentSectionForm):
    kind = choice(KINDS)
    model = _field(MappingField, None)
    grid = _field(MappingField, None)
    seeds = _field(MappingField, None)
    estimator = _field(MappingField, None)
    output = _field(MappingField, None)


class ModelForm(ExperimentSectionForm):
    id = _field(StrictStringField, REQUIRED)
    params = _field(MappingField, dict)


class GridForm(ExperimentSectionForm):
    dt = number(positive=True)
    r = duration()
    horizon = _field(StrictFloatField, None, OnGrid())

    def step_size(self):
        if self.dt.errors or self.dt.data is None:
            return None
        return self.dt.data


class SeedsForm(ExperimentSectionForm):
    master = _field(StrictIntegerField, 0, NumberRange(0, MAX_SEED, message=SEED_RANGE_ERROR_MESSAGE))


class OutputForm(ExperimentSectionForm):
    path = _field(StrictStringField, None)


class SimulateForm(ExperimentSectionForm):
    paths = count(1)
    x0 = state(0.0)


class CoupleForm(ExperimentSectionForm):
    paths = count(1000)
    x0 = state(1.0)
    y0 = state()
    coupling = choice(('controlled', 'synchronous'), 'controlled')
    gamma = number(0.5, positive=True)
    threshold_mult = number(2.0, positive=True)
    mode = choice(('with_ledger', 'no_ledger'), 'with_ledger')
    law = choice(('holder', 'linear'), 'holder')
    gain = number(None, positive=True)
    h = duration()
    theta = number(0.5, positive=True)


class ApproxStudyForm(ExperimentSectionForm):
    paths = count(1000)
    x0 = state(0.0)
    T = duration()
    gamma = number(0.4, positive=True)
    eps = numbers()
    threshold_mult = number(1.0, positive=True)
    probes = count(64)
    upsilon_floor = number(1e-12, positive=True)


class SupportForm(ExperimentSectionForm):
    paths = count(1000)
    x0 = state(0.0)
    z = state()
    h = duration()
    delta = number(0.25, positive=True)
    lam = number(50.0)


class ErgodicForm(ExperimentSectionForm):
    paths = count(256)
    x0 = state(4.0)
    times = durations()
    burn_in = duration(10.0)
    spacing = duration(1.0)
    stationary_samples = count(256)
    N = number(1.0)
    gamma = number(1.0, positive=True)
    bootstrap = _field(StrictIntegerField, 50)
    delta = number(0.5, positive=True)
    phi_c = number(1.0, positive=True)
    lyapunov_alpha = number(1.0, positive=True)


class SensitivityForm(ExperimentSectionForm):
    paths = count(10000)
    x0 = state(1.0)
    z = state(1.0)
    times = durations()
    lambdas = numbers(lambda: [0.0])
    functional = choice(tuple(FUNCTIONALS), 'head')
    fd_eps = number(1e-4, positive=True)


class TailcheckForm(ExperimentSectionForm):
    driver = choice(('deterministic', 'squared-ou'))
    paths = count(10000)
    theta = number(1.0, positive=True)
    s = number(1.0, positive=True)
    cap = number(4.0, positive=True)
    x0 = number(0.0)
    A = number(1.0)
    lam = number(1.0, positive=True)
    v0 = number(0.0)
    delta = number(0.25, positive=True)
    T = duration(1.0)
    R_grid = numbers()


class LyapunovForm(ExperimentSectionForm):
    paths = count(10000)
    probes = numbers()
    kappa = number(1.0)
    h = duration(1.0)
    C_V = number(10.0)
    alpha = number(1.0, positive=True)
    c = number(0.5, positive=True)
    b = number(None, positive=True)
    p = number(None, positive=True)
    a = number(1.0, positive=True)
    A = number(None, positive=True)
    sigma_bound_sq = number(None, positive=True)


ESTIMATOR_FORMS = {
    'simulate': SimulateForm,
    'couple': CoupleForm,
    'approx-study': ApproxStudyForm,
    'support-probe': SupportForm,
    'ergodic': ErgodicForm,
    'sensitivity': SensitivityForm,
    'tailcheck': TailcheckForm,
    'lyapunov': LyapunovForm,
}


@dataclass
class ExperimentConfig:
    kind: str
    model_id: Optional[str]
    model_params: dict
    dt: float
    r: float
    horizon: Optional[float]
    master_seed: int
    estimator: dict
    output_path: Optional[str]
    document: dict = field(repr=False, default_factory=dict)

    @property
    def config_hash(self):
        """SHA-256 of the canonical JSON form of the effective document."""
        canonical = json.dumps(self.effective_document(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def effective_document(self):
        return {
            'kind': self.kind,
            'model': {'id': self.model_id, 'params': self.model_params},
            'grid': {'dt': self.dt, 'r': self.r, 'horizon': self.horizon},
            'seeds': {'master': self.master_seed},
            'estimator': self.estimator,
        }

    def with_overrides(self, master_seed=None):
        if master_seed is None:
            return self
        if not 0 <= master_seed <= MAX_SEED:
            raise ConfigError('seeds.master', SEED_RANGE_ERROR_MESSAGE)
        return ExperimentConfig(
            self.kind, self.model_id, self.model_params, self.dt, self.r, self.horizon,
            int(master_seed), self.estimator, self.output_path, self.document,
        )


def parse_experiment(document):
    """Validate a loaded document and fill every default."""
    sections = DocumentForm.parse('', document)
    kind = sections['kind']

    if kind in KINDS_WITHOUT_MODEL and 'model' not in document:
        model = {'id': None, 'params': {}}
    else:
        model = ModelForm.parse('model', document.get('model'))
    grid = GridForm.parse('grid', document.get('grid'))
    seeds = SeedsForm.parse('seeds', document.get('seeds'))
    output = OutputForm.parse('output', document.get('output'))
    estimator = ESTIMATOR_FORMS[kind].parse('estimator', document.get('estimator'), grid_dt=grid['dt'])

    if kind == 'simulate' and grid['horizon'] is None:
        raise ConfigError('grid.horizon', MISSING_KEY_ERROR_MESSAGE)

    return ExperimentConfig(
        kind=kind,
        model_id=model['id'],
        model_params=model['params'],
        dt=grid['dt'],
        r=grid['r'],
        horizon=grid['horizon'],
        master_seed=seeds['master'],
        estimator=estimator,
        output_path=output['path'],
        document=document,
    )


def load_experiment(path):
    with open(path, encoding='utf-8') as f:
        try:
            document = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError('<root>', INVALID_YAML_ERROR_MESSAGE.format(e))
    return parse_experiment(document)
