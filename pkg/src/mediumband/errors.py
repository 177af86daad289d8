"""Exception types shared across the package."""


class MediumbandError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(MediumbandError):
    """Invalid configuration value, flag, or config-file entry."""


class ParameterError(MediumbandError):
    """Statistical-model parameters outside their valid region."""


class DegenerateChannelError(MediumbandError):
    """Channel realization unusable for detection (zero desired tap)."""


class FitFailure(MediumbandError):
    """Maximum-likelihood fit did not converge.

    Carries the best parameters seen so far (may be None) so callers can
    salvage partial results.
    """

    def __init__(self, message, best_params=None, partial=None):
        super().__init__(message)
        self.best_params = best_params
        self.partial = partial
