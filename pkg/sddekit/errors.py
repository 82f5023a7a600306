class SddeError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(SddeError, ValueError):
    """A parameter lies outside the range an operation is defined on."""


class GridMismatchError(SddeError):
    pass


class GridAlignmentError(DomainError):
    """A duration is not an exact multiple of the grid step."""


class NonFiniteStateError(SddeError):
    """Drift or diffusion produced NaN/inf; carries the offending segment."""

    def __init__(self, message, segment=None, step=None):
        super().__init__(message)
        self.segment = segment
        self.step = step

    def __str__(self):
        message = super().__str__()
        if self.step is not None:
            return "{} (step {})".format(message, self.step)
        return message


class MissingCapabilityError(SddeError):
    """The model lacks a right inverse or gradient callback an operation needs."""

    def __init__(self, capability, model=None):
        super().__init__("model {!r} does not provide {}".format(
            getattr(model, 'name', model), capability
        ))
        self.capability = capability


class NonFiniteControlError(SddeError):
    pass


class WeightOverflowError(SddeError):

    def __init__(self, exponent):
        super().__init__("importance weight overflows: log exponent {!r}".format(exponent))
        self.exponent = exponent


class EmptyBatchError(SddeError):
    pass


class SampleSizeError(SddeError):
    pass


class LipschitzViolationError(SddeError):

    def __init__(self, pair, ratio):
        super().__init__(
            "test functional is not 1-Lipschitz: samples {} give ratio {:.6g}; "
            "rescale the functional".format(pair, ratio)
        )
        self.pair = pair
        self.ratio = ratio


class LyapunovValueError(SddeError):
    pass


class RateFunctionError(SddeError):
    pass


class InsufficientRunsError(SddeError):
    pass


class AllPathsDiscardedError(SddeError):
    pass


class ConfigError(SddeError):

    def __init__(self, field, message):
        super().__init__("{}: {}".format(field, message))
        self.field = field


class UnknownModelError(SddeError):

    def __init__(self, model_id):
        super().__init__("unknown model id {!r}".format(model_id))
        self.model_id = model_id
