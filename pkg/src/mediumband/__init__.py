"""Mediumband wireless channel simulation and statistical models.

Subpackages:

- channel: multipath profiles, pulse shaping, timing acquisition, taps
- statmodel: the Gaussian-hole distribution (pdf/sampler/moments/fit)
- detection: BPSK frame transmission and detectors
- experiments: seeded Monte Carlo drivers and CSV/manifest writers
- cli: command-line entry point (``mediumband`` console script)
"""

__version__ = "0.1.0"

from . import _backend
from .errors import (
    ConfigurationError,
    DegenerateChannelError,
    FitFailure,
    MediumbandError,
    ParameterError,
)

__all__ = [
    "__version__",
    "_backend",
    "ConfigurationError",
    "DegenerateChannelError",
    "FitFailure",
    "MediumbandError",
    "ParameterError",
]
