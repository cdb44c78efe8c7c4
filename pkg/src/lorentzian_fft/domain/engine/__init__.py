"""Engine components: configuration, instances and suites."""

from .config import (
    SUITES,
    ConfigValidationError,
    LoadedConfig,
    RunConfig,
    RunConfigLoader,
)
from .runner import VerificationEngine

__all__ = [
    "SUITES",
    "ConfigValidationError",
    "LoadedConfig",
    "RunConfig",
    "RunConfigLoader",
    "VerificationEngine",
]
