"""Radiated spectrum, energy, photon number and reaction force of a collapsing bubble.

For the Lorentzian model profile the angle-integrated spectral density is

    P(w) = K w^3 exp(-2 gamma w),
    K    = (n^2-1)^2 / (64 n^2) * hbar A^2 / (c^4 gamma),   A = R0^2 - Rmin^2,

and for an arbitrary trajectory the energy radiated over the window is

    W = C int d5(R^2)/dt5 * R * beta dt,   C = (n^2-1)^2 hbar / (480 pi n^2 c^3).

For the model profile the two agree: integrating by parts twice turns the
time integral into int (S''')^2 dt = 45 pi A^2 / (8 gamma^5), giving
W = 3 K / (8 gamma^4) either way.  :func:`total_energy_spectral` and
:func:`total_energy_trajectory` compute the two sides independently.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalQualityError, UnsupportedOperationError
from .numerics import (
    C_LIGHT,
    DEFAULT_SPEC,
    HBAR,
    K_B,
    QuadratureSpec,
    derivative_with_error,
    integrate_adaptive,
    integrate_exp_tail,
)
from .trajectory import ModelProfile, StaticRadius, Trajectory

log = logging.getLogger(__name__)

BETA_WARNING_THRESHOLD = 0.3
MAX_TABULATED_D5_ERROR = 0.1
DEFAULT_SPECTRUM_SAMPLES = 512


@dataclass(frozen=True)
class Medium:
    """Non-dispersive dielectric surrounding the bubble, refractive index ``n``."""

    n: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.n) and self.n >= 1.0):
            raise InputError(f"refractive index must be >= 1, got {self.n}")

    @property
    def contrast(self) -> float:
        """``(n^2 - 1)^2 / n^2``; exactly zero for ``n = 1``."""
        return (self.n**2 - 1.0) ** 2 / self.n**2


@dataclass(frozen=True)
class CollapseScenario:
    medium: Medium
    trajectory: Trajectory

    @classmethod
    def model(cls, n: float, R0: float, R_min: float, gamma: float, window_scale: float = 5.0):
        return cls(Medium(n), Trajectory.model(R0, R_min, gamma, window_scale))

    def model_profile(self) -> ModelProfile:
        profile = self.trajectory.profile
        if not isinstance(profile, ModelProfile):
            raise UnsupportedOperationError(
                "the closed-form spectrum exists only for the Lorentzian model profile; "
                "use total_energy_trajectory, or the amplitude module for other trajectories"
            )
        return profile


#: Lorentzian profile reproducing W = 2e-13 J at gamma = 1 fs in water.
#: R0 was solved from the closed-form energy with R_min fixed at 0.5 um;
#: neither radius is quoted alongside the energy estimate it reproduces.
REFERENCE_SCENARIO = dict(n=1.3, R0=55.2e-6, R_min=0.5e-6, gamma=1e-15)


def reference_scenario(window_scale: float = 5.0) -> CollapseScenario:
    return CollapseScenario.model(window_scale=window_scale, **REFERENCE_SCENARIO)


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Sampled spectrum of the model profile.

    ``P`` is energy per unit angular frequency (J s) and ``N`` photon number
    per unit angular frequency (s).  ``W_spectral`` and ``N_total`` are the
    closed-form integrals over ``[0, inf)``.
    """

    omega: np.ndarray
    P: np.ndarray
    N: np.ndarray
    omega_peak: float
    T_eff: float
    W_spectral: float
    N_total: float


@dataclass(frozen=True, eq=False)
class EnergyResult:
    """Trajectory-integral energy plus diagnostic traces on ``times``.

    ``power`` is the integrand of the energy integral (W); it changes sign
    and only its integral is physical.  ``force`` is the leading-order
    reaction-force estimate (N).
    """

    W_trajectory: float
    error: float
    times: np.ndarray
    power: np.ndarray
    force: np.ndarray


def spectral_prefactor(medium: Medium, profile: ModelProfile) -> float:
    """``K`` in ``P(w) = K w^3 exp(-2 gamma w)``, units J s^4."""
    return (
        medium.contrast / 64.0 * HBAR * profile.amplitude**2 / (C_LIGHT**4 * profile.gamma)
    )


def trajectory_prefactor(medium: Medium) -> float:
    """``C`` multiplying ``int d5(R^2) R beta dt``, units J s^4 / m^3."""
    return medium.contrast * HBAR / (480.0 * math.pi * C_LIGHT**3)


def spectral_peak(gamma: float) -> float:
    """Angular frequency maximising ``w^3 exp(-2 gamma w)``."""
    if not gamma > 0:
        raise InputError(f"gamma must be positive, got {gamma}")
    return 1.5 / gamma


def effective_temperature(gamma: float) -> float:
    """Temperature whose Boltzmann factor matches ``exp(-2 gamma w)``."""
    if not gamma > 0:
        raise InputError(f"gamma must be positive, got {gamma}")
    return HBAR / (2.0 * gamma * K_B)


def spectral_density(scenario: CollapseScenario, omega):
    """``P(w)`` in J s for the model profile; ``omega`` scalar or array."""
    profile = scenario.model_profile()
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise InputError("angular frequency must be non-negative")
    k = spectral_prefactor(scenario.medium, profile)
    p = k * w**3 * np.exp(-2.0 * profile.gamma * w) + 0.0
    return float(p) if np.ndim(omega) == 0 else p


def photon_density(scenario: CollapseScenario, omega):
    """``N(w) = P(w) / (hbar w)`` in photons per unit angular frequency."""
    profile = scenario.model_profile()
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise InputError("angular frequency must be non-negative")
    k = spectral_prefactor(scenario.medium, profile)
    n = k / HBAR * w**2 * np.exp(-2.0 * profile.gamma * w) + 0.0
    return float(n) if np.ndim(omega) == 0 else n


def total_energy_spectral(
    scenario: CollapseScenario, method: str = "closed", spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """``int_0^inf P dw``: ``3 K / (8 gamma^4)`` or, with ``method="quadrature"``, numerically."""
    profile = scenario.model_profile()
    k = spectral_prefactor(scenario.medium, profile)
    if method == "closed":
        return 3.0 * k / (8.0 * profile.gamma**4) + 0.0
    if method == "quadrature":
        if k == 0.0:
            return 0.0
        return k * integrate_exp_tail(lambda w: w**3, 0.0, 2.0 * profile.gamma, spec)
    raise InputError(f"unknown method {method!r}")


def photon_count(
    scenario: CollapseScenario, method: str = "closed", spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """Total photon number ``K / (4 hbar gamma^3)``, or by quadrature."""
    profile = scenario.model_profile()
    k = spectral_prefactor(scenario.medium, profile)
    if method == "closed":
        return k / (4.0 * HBAR * profile.gamma**3) + 0.0
    if method == "quadrature":
        if k == 0.0:
            return 0.0
        return k / HBAR * integrate_exp_tail(lambda w: w**2, 0.0, 2.0 * profile.gamma, spec)
    raise InputError(f"unknown method {method!r}")


def default_omega_grid(gamma: float, samples: int = DEFAULT_SPECTRUM_SAMPLES,
                       omega_min: float | None = None, omega_max: float | None = None) -> np.ndarray:
    """Log-spaced grid over ``[w_peak/100, 20 w_peak]`` unless bounds are given."""
    peak = spectral_peak(gamma)
    lo = peak / 100.0 if omega_min is None else omega_min
    hi = peak * 20.0 if omega_max is None else omega_max
    if not (0 < lo < hi) or samples < 1:
        raise InputError(f"invalid spectrum grid: [{lo}, {hi}] with {samples} samples")
    return np.geomspace(lo, hi, samples)


def spectrum(scenario: CollapseScenario, omega: np.ndarray | None = None) -> SpectralResult:
    profile = scenario.model_profile()
    grid = default_omega_grid(profile.gamma) if omega is None else np.asarray(omega, dtype=float)
    return SpectralResult(
        omega=grid,
        P=spectral_density(scenario, grid),
        N=photon_density(scenario, grid),
        omega_peak=spectral_peak(profile.gamma),
        T_eff=effective_temperature(profile.gamma),
        W_spectral=total_energy_spectral(scenario),
        N_total=photon_count(scenario),
    )


def numeric_peak(omega: np.ndarray, values: np.ndarray) -> float:
    """Argmax of sampled data refined by a parabola through the top three points in log w."""
    omega = np.asarray(omega, dtype=float)
    values = np.asarray(values, dtype=float)
    i = int(np.argmax(values))
    if i == 0 or i == len(values) - 1:
        return float(omega[i])
    x = np.log(omega[i - 1:i + 2])
    y = values[i - 1:i + 2]
    denom = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2])
    a = (x[2] * (y[1] - y[0]) + x[1] * (y[0] - y[2]) + x[0] * (y[2] - y[1])) / denom
    b = (x[2] ** 2 * (y[0] - y[1]) + x[1] ** 2 * (y[2] - y[0]) + x[0] ** 2 * (y[1] - y[2])) / denom
    return float(np.exp(-b / (2.0 * a)))


def power_trace(scenario: CollapseScenario, t):
    """Integrand of the trajectory energy, ``C d5(R^2) R beta`` in watts.

    A diagnostic only: it takes both signs and has no meaning pointwise.
    """
    s = scenario.trajectory.r_squared_derivatives(t)
    r = np.sqrt(s[0])
    beta = s[1] / (2.0 * r) / C_LIGHT
    return trajectory_prefactor(scenario.medium) * s[5] * r * beta


def _check_tabulated_quality(scenario: CollapseScenario) -> None:
    err = scenario.trajectory.d5_relative_error()
    if err > MAX_TABULATED_D5_ERROR:
        raise NumericalQualityError(
            f"tabulated fifth derivative of R^2 has estimated relative error {err:.3g} "
            f"(limit {MAX_TABULATED_D5_ERROR}); resample the trajectory more finely",
            relative_error=err,
        )


def total_energy_trajectory(
    scenario: CollapseScenario, spec: QuadratureSpec = DEFAULT_SPEC, trace_points: int = 2001
) -> EnergyResult:
    """Radiated energy from the time integral over the trajectory window.

    Raises
    ------
    NumericalQualityError
        A tabulated trajectory whose fifth derivative is not trustworthy.
    """
    traj = scenario.trajectory
    _check_tabulated_quality(scenario)
    times = np.linspace(*traj.window, trace_points)
    if isinstance(traj.profile, StaticRadius) or scenario.medium.contrast == 0.0:
        zeros = np.zeros_like(times)
        return EnergyResult(0.0, 0.0, times, zeros, zeros.copy())
    value, error = integrate_adaptive(
        lambda t: power_trace(scenario, t), *traj.window, spec, points=traj.breakpoints()
    )
    return EnergyResult(
        W_trajectory=value + 0.0,
        error=error,
        times=times,
        power=power_trace(scenario, times),
        force=dissipative_force_leading(scenario, times),
    )


def dissipative_force_leading(scenario: CollapseScenario, t, method: str = "analytic"):
    """Leading term ``C R^2 d4(beta)/dt4`` of the reaction force, in newtons.

    A positive value opposes outward wall motion.  Only the scaling is
    established; treat the magnitude as an order-of-magnitude estimate.
    ``method="numeric"`` differentiates ``beta`` by Ridders extrapolation
    instead of using the analytic derivative chain (scalar ``t`` only).
    """
    _check_tabulated_quality(scenario)
    traj = scenario.trajectory
    c = trajectory_prefactor(scenario.medium)
    if method == "analytic":
        r = traj.radius_derivatives(t)
        force = c * r[0] ** 2 * (r[5] / C_LIGHT) + 0.0
        return float(force) if np.ndim(t) == 0 else force
    if method == "numeric":
        if np.ndim(t) != 0:
            raise InputError("numeric force path takes a scalar time")
        b4, _ = derivative_with_error(traj.beta, 4, float(t), characteristic_time(traj, float(t)))
        return c * traj.radius(t) ** 2 * b4 + 0.0
    raise InputError(f"unknown method {method!r}")


def characteristic_time(traj: Trajectory, t: float) -> float:
    """Time over which ``R`` changes appreciably near ``t``.

    For the model profile ``R^2`` has poles at ``t = +-i gamma`` and ``R``
    branch points at ``t = +-i gamma Rmin/R0``; the returned scale is 0.3 of
    the distance to the nearer one, so steps shrink near the collapse.
    """
    profile = traj.profile
    if isinstance(profile, ModelProfile):
        branch = math.hypot(t, profile.gamma * profile.R_min / profile.R0)
        return 0.3 * min(branch, math.hypot(t, profile.gamma))
    return (traj.window[1] - traj.window[0]) / 100.0


def anisotropy_estimate(a: float, b: float, theta) -> float:
    """Relative photon yield along polar angle ``theta`` from a spheroid.

    The spheroid has equatorial semi-axes ``a`` and polar semi-axis ``b``.
    Yield is taken proportional to the silhouette area seen from ``theta``,
    ``pi a sqrt(a^2 sin^2 + b^2 cos^2)``, normalised by the sphere value
    ``pi a^2``.
    """
    if not (a > 0 and b > 0):
        raise InputError(f"semi-axes must be positive, got a={a}, b={b}")
    th = np.asarray(theta, dtype=float)
    if np.any((th < 0) | (th > math.pi)):
        raise InputError("theta must lie in [0, pi]")
    rel = np.sqrt((a * np.sin(th)) ** 2 + (b * np.cos(th)) ** 2) / a
    return float(rel) if np.ndim(theta) == 0 else rel


def beta_warnings(scenario: CollapseScenario) -> list[str]:
    """Warnings for wall speeds where the first-order-in-beta result is doubtful."""
    mb = scenario.trajectory.max_beta()
    if mb > BETA_WARNING_THRESHOLD:
        msg = (f"max |beta| = {mb:.3g} exceeds {BETA_WARNING_THRESHOLD}; "
               "results are first order in the wall speed and unreliable here")
        log.warning(msg)
        return [msg]
    return []
