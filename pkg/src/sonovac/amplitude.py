"""First-order pair-creation amplitudes for a moving dielectric step.

The engine is generic in the radiation-pressure matrix element: a
:class:`MatrixElementModel` supplies ``<k, k'| F_r |0>`` at radius ``R``
together with the mode-measure weight used in frequency integrals.  Exact
spherical-Bessel elements are not provided; toy models exercise the
machinery.

To first order in the wall speed the amplitude for the vacuum to decay
into the pair ``(k, k')`` between ``t0`` and ``t`` is

    a(k, k') = -1/(w + w') int_{t0}^{t} beta(tau) exp(i (w + w') (tau - t)) M(k, k', R(tau)) dtau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Protocol, Sequence

import numpy as np

from .errors import InputError, SonovacError
from .numerics import DEFAULT_SPEC, QuadratureSpec, integrate_adaptive, integrate_oscillatory


@dataclass(frozen=True)
class DielectricStep:
    """Permittivity 1 inside radius ``R`` and ``n**2`` outside."""

    n: float
    R: float

    def __post_init__(self) -> None:
        if not self.n >= 1.0:
            raise InputError(f"refractive index must be >= 1, got {self.n}")
        if not self.R > 0:
            raise InputError(f"radius must be positive, got {self.R}")


def epsilon(step: DielectricStep, r):
    """Relative permittivity at distance ``r``; the wall itself counts as outside."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise InputError("r must be non-negative")
    eps = 1.0 + (step.n**2 - 1.0) * np.heaviside(r_arr - step.R, 1.0)
    return float(eps) if np.ndim(r) == 0 else eps


def pressure_prefactor(step: DielectricStep) -> float:
    """Scalar ``-(1 - 1/n^2) R^2 / 2`` in front of the angular field integral, m^2."""
    return -(1.0 - 1.0 / step.n**2) * step.R**2 / 2.0


@dataclass(frozen=True, order=True)
class ModeLabel:
    """A photon mode: angular frequency ``omega`` and an opaque channel index."""

    omega: float
    channel: int = 0

    def __post_init__(self) -> None:
        if not self.omega > 0:
            raise InputError(f"mode frequency must be positive, got {self.omega}")
        if self.channel < 0:
            raise InputError(f"channel must be non-negative, got {self.channel}")


@dataclass(frozen=True)
class MatrixElementModel:
    """Matrix element ``M(k, k', R)`` plus the mode-measure weight ``w(omega)``.

    ``element`` must be symmetric under exchange of the two modes and safe
    to call from several threads.
    """

    element: Callable[[ModeLabel, ModeLabel, float], complex]
    weight: Callable[[float], float] = field(default=lambda omega: 1.0)
    name: str = "custom"

    def __call__(self, k: ModeLabel, kp: ModeLabel, R: float) -> complex:
        return self.element(k, kp, R)

    @classmethod
    def constant(cls, value: complex, weight: Callable[[float], float] | None = None):
        return cls(lambda k, kp, R: value, weight or (lambda omega: 1.0), name=f"constant({value})")

    @classmethod
    def separable(cls, g: Callable[[float], float], weight: Callable[[float], float] | None = None):
        """``M = g(omega) g(omega')``, independent of ``R`` and channel."""
        return cls(lambda k, kp, R: g(k.omega) * g(kp.omega), weight or (lambda omega: 1.0),
                   name="separable")


class Kinematics(Protocol):
    """Anything exposing wall radius and speed (in units of c) as functions of time."""

    def radius(self, t): ...

    def beta(self, t): ...


class ModelEvaluationError(SonovacError):
    """The matrix-element model failed for a specific mode pair."""


@dataclass(frozen=True)
class TwoPhotonAmplitude:
    value: complex
    modes: tuple[ModeLabel, ModeLabel]
    window: tuple[float, float]
    reference: float


def _pair_element(model: MatrixElementModel, k: ModeLabel, kp: ModeLabel, radii: np.ndarray) -> np.ndarray:
    try:
        return np.array([model(k, kp, float(r)) for r in radii.ravel()], dtype=complex).reshape(radii.shape)
    except SonovacError:
        raise
    except Exception as exc:
        raise ModelEvaluationError(f"matrix element {model.name} failed for modes {k}, {kp}: {exc}") from exc


def transition_amplitude(
    model: MatrixElementModel,
    traj: Kinematics,
    k: ModeLabel,
    kp: ModeLabel,
    window: tuple[float, float],
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    reference: float | None = None,
) -> TwoPhotonAmplitude:
    """Vacuum-to-pair amplitude accumulated over ``window = (t0, t)``.

    The phase is referred to ``reference`` (default: the window end ``t``).
    ``traj`` may be a :class:`~sonovac.trajectory.Trajectory` or any object
    with vectorised ``radius`` and ``beta`` methods.
    """
    t0, t1 = window
    if not t0 < t1:
        raise InputError(f"degenerate window [{t0}, {t1}]")
    big_omega = k.omega + kp.omega
    t_ref = t1 if reference is None else reference

    def integrand(tau):
        b = np.asarray(traj.beta(tau), dtype=float)
        if not np.any(b):
            return np.zeros(np.shape(tau), dtype=complex)
        return b * _pair_element(model, k, kp, np.asarray(traj.radius(tau), dtype=float))

    integral = integrate_oscillatory(integrand, big_omega, (t0, t1), spec, reference=t_ref)
    value = -integral / big_omega
    return TwoPhotonAmplitude(complex(value) + 0.0, (k, kp), (t0, t1), t_ref)


@dataclass(frozen=True, eq=False)
class ModeGrid:
    """Discrete mode set with quadrature weights for frequency integrals."""

    omega: np.ndarray
    weights: np.ndarray
    channel: int = 0

    def __post_init__(self) -> None:
        omega = np.asarray(self.omega, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if omega.ndim != 1 or omega.shape != weights.shape or len(omega) == 0:
            raise InputError("mode grid needs matching non-empty 1-D omega and weights")
        if np.any(omega <= 0):
            raise InputError("mode frequencies must be positive")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def gauss_legendre(cls, lo: float, hi: float, n: int, channel: int = 0) -> "ModeGrid":
        x, w = np.polynomial.legendre.leggauss(n)
        half = 0.5 * (hi - lo)
        return cls(lo + half * (x + 1.0), half * w, channel)

    @classmethod
    def uniform(cls, lo: float, hi: float, n: int, channel: int = 0) -> "ModeGrid":
        """Midpoint rule with ``n`` cells on ``[lo, hi]``."""
        h = (hi - lo) / n
        return cls(lo + h * (np.arange(n) + 0.5), np.full(n, h), channel)

    def labels(self) -> list[ModeLabel]:
        return [ModeLabel(float(w), self.channel) for w in self.omega]


def force_variance(
    model: MatrixElementModel,
    R: float,
    modes: ModeGrid | tuple[float, float] = (0.0, math.inf),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Vacuum variance ``1/2 int dk int dk' |<0|F_r|k,k'>|^2`` of the wall force.

    ``modes`` is either a :class:`ModeGrid` (direct weighted double sum) or a
    frequency interval integrated adaptively in both variables, with an
    infinite upper limit mapped through ``omega = x / (1 - x)``.  Model
    weights ``w(omega)`` multiply each mode measure.  A divergent integrand
    surfaces as :class:`~sonovac.errors.QuadratureError`.
    """
    if isinstance(modes, ModeGrid):
        labels = modes.labels()
        mu = modes.weights * np.array([model.weight(float(w)) for w in modes.omega])
        total = 0.0
        for i, ki in enumerate(labels):
            row = np.array([abs(model(ki, kj, R)) ** 2 for kj in labels])
            total += mu[i] * math.fsum(mu * row)
        return 0.5 * total

    lo, hi = modes
    if not (0 <= lo < hi):
        raise InputError(f"invalid mode interval [{lo}, {hi}]")
    if math.isinf(hi):
        x_lo, x_hi = lo / (1.0 + lo), 1.0

        def to_omega(x):
            if x >= 1.0:  # a node rounded onto the mapped infinity
                return math.inf, math.inf
            return x / (1.0 - x), 1.0 / (1.0 - x) ** 2
    else:
        x_lo, x_hi = lo, hi

        def to_omega(x):
            return x, 1.0

    def label(omega):
        # omega = 0 is only ever hit at an excluded endpoint of the open measure.
        return ModeLabel(max(omega, np.finfo(float).tiny))

    def inner(xo):
        wo, jo = to_omega(xo)
        if not math.isfinite(wo):
            return 0.0
        ko = label(wo)

        def f(xi):
            wi, ji = to_omega(xi)
            if not math.isfinite(wi):
                return 0.0
            return abs(model(ko, label(wi), R)) ** 2 * model.weight(wi) * ji

        value, _ = integrate_adaptive(f, x_lo, x_hi, spec, vectorized=False)
        return value * model.weight(wo) * jo

    value, _ = integrate_adaptive(inner, x_lo, x_hi, spec, vectorized=False)
    return 0.5 * value


def spectral_density_from_amplitudes(
    model: MatrixElementModel,
    traj: Kinematics,
    omega: float,
    partners: ModeGrid,
    window: tuple[float, float],
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    angular_factor: float = 1.0,
    time_convention: Literal["final", "integrated"] = "final",
    channel: int = 0,
) -> float:
    """Assemble ``omega^3 * angular_factor * sum_j mu_j |a(omega, omega_j)|^2``.

    ``mu_j`` are the partner-grid weights times the model weight.  The
    normalisation of the angular and partner-mode integrals is left to the
    caller through ``angular_factor``.  With ``time_convention="final"`` the
    amplitudes are taken at the window end; ``"integrated"`` additionally
    integrates ``|a|^2`` over the running end time across the window.

    Not a substitute for the closed-form model spectrum in
    :mod:`sonovac.radiation`; intended for toy and future exact elements.
    """
    k = ModeLabel(omega, channel)
    labels = partners.labels()
    mu = partners.weights * np.array([model.weight(float(w)) for w in partners.omega])

    def summed_probability(t_end: float) -> float:
        probs = [
            abs(transition_amplitude(model, traj, k, kp, (window[0], t_end), spec).value) ** 2
            for kp in labels
        ]
        return math.fsum(m * p for m, p in zip(mu, probs))

    if time_convention == "final":
        total = summed_probability(window[1])
    elif time_convention == "integrated":
        loose = QuadratureSpec(rel_tol=max(spec.rel_tol, 1e-6), abs_tol=spec.abs_tol,
                               max_subdivisions=spec.max_subdivisions)
        start = window[0] + 1e-9 * (window[1] - window[0])
        total, _ = integrate_adaptive(summed_probability, start, window[1], loose, vectorized=False)
    else:
        raise InputError(f"unknown time convention {time_convention!r}")
    return omega**3 * angular_factor * total + 0.0


def riemann_amplitude(
    model: MatrixElementModel,
    traj: Kinematics,
    k: ModeLabel,
    kp: ModeLabel,
    window: tuple[float, float],
    steps: int = 1_000_000,
) -> complex:
    """Brute-force midpoint-rule amplitude, for cross-checking the engine."""
    t0, t1 = window
    h = (t1 - t0) / steps
    tau = t0 + h * (np.arange(steps) + 0.5)
    big_omega = k.omega + kp.omega
    b = np.asarray(traj.beta(tau), dtype=float)
    m = _pair_element(model, k, kp, np.asarray(traj.radius(tau), dtype=float))
    s = np.sum(b * m * np.exp(1j * big_omega * (tau - t1))) * h
    return complex(-s / big_omega)


__all__: Sequence[str] = [
    "DielectricStep", "Kinematics", "MatrixElementModel", "ModeGrid", "ModeLabel",
    "ModelEvaluationError", "TwoPhotonAmplitude", "epsilon", "force_variance",
    "pressure_prefactor", "riemann_amplitude", "spectral_density_from_amplitudes",
    "transition_amplitude",
]
