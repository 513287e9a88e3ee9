"""Quadrature, differentiation and physical constants."""

from .constants import C_LIGHT, CONSTANTS, HBAR, K_B, PhysicalConstants
from .differentiation import (
    LocalPolynomial,
    SampledFunction,
    central_weights,
    derivative,
    derivative_with_error,
    sampled_derivative,
)
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    integrate_adaptive,
    integrate_exp_tail,
    integrate_oscillatory,
)

__all__ = [
    "C_LIGHT", "CONSTANTS", "HBAR", "K_B", "PhysicalConstants",
    "LocalPolynomial", "SampledFunction", "central_weights", "derivative",
    "derivative_with_error", "sampled_derivative",
    "DEFAULT_SPEC", "QuadratureSpec", "integrate_adaptive", "integrate_exp_tail",
    "integrate_oscillatory",
]
