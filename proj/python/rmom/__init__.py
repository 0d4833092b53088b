"""Momentum methods on Riemannian manifolds.

Thin Python layer over the C++ core: manifolds, curvature constants, and the
experiment driver used by the ``rmom`` command-line tool.
"""

from ._core import (
    ConfigError,
    DomainError,
    Euclidean,
    NumericalAbort,
    Spd,
    Sphere,
    compare,
    config_keys,
    curvature_constants,
    generate_instance,
    run,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Euclidean",
    "NumericalAbort",
    "Spd",
    "Sphere",
    "compare",
    "config_keys",
    "curvature_constants",
    "generate_instance",
    "run",
]
