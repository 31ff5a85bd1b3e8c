"""Exception hierarchy shared across the package."""


class PeerDEError(Exception):
    """Base class for all package errors."""


class ConfigError(PeerDEError, ValueError):
    """Invalid optimizer or model configuration."""


class InvalidBoundsError(PeerDEError, ValueError):
    pass


class EvaluationError(PeerDEError, RuntimeError):
    """Objective returned a non-finite value."""

    def __init__(self, message, vector=None):
        super().__init__(message)
        self.vector = vector


class EmptySliceError(PeerDEError, ValueError):
    """An aggregate was requested over zero applicable records."""


class EmptyDesignError(EmptySliceError):
    pass


class DegenerateResponseError(PeerDEError, ValueError):
    """Response takes a single value, so the model is undefined."""


class UndefinedAUCError(DegenerateResponseError):
    pass


class InvalidCutpointsError(PeerDEError, ValueError):
    pass


class InconsistentFitError(PeerDEError, RuntimeError):
    """Full model fits worse than its nested null model."""


class IngestError(PeerDEError, ValueError):
    """The input file cannot be read as a survey table at all."""


class IncompleteStudyError(PeerDEError, ValueError):
    pass
