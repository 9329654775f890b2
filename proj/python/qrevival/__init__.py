"""Recurrence times of driven optical lattices."""

from ._core import (
    ConfigError,
    DomainError,
    QrevError,
    band_width,
    canonical_config,
    characteristic,
    config_hash,
    evolve,
    mathieu_q,
    poincare,
    resonance_q,
    sweep,
    times,
    validate,
    validation_count,
    version,
)

__version__ = version()

__all__ = [
    "ConfigError",
    "DomainError",
    "QrevError",
    "band_width",
    "canonical_config",
    "characteristic",
    "config_hash",
    "evolve",
    "mathieu_q",
    "poincare",
    "resonance_q",
    "sweep",
    "times",
    "validate",
    "validation_count",
    "version",
]
