"""Bubble-wall trajectories R(t) and their time derivatives up to fifth order.

Three profile kinds are supported:

* :class:`ModelProfile`: the Lorentzian collapse profile
  ``R^2(t) = R0^2 - (R0^2 - Rmin^2) / ((t/gamma)^2 + 1)``, differentiated in
  closed form;
* :class:`TabulatedProfile`: measured or simulated ``(t, R)`` samples,
  differentiated through local polynomial fits of ``R^2``;
* :class:`StaticRadius`: a bubble that does not move.

Derivatives of ``R`` are obtained from those of ``S = R^2`` through the
Leibniz rule ``sum_j C(k, j) R^(j) R^(k-j) = S^(k)``, so the same chain
serves every profile kind.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .errors import InputError
from .numerics import C_LIGHT, LocalPolynomial, SampledFunction

MAX_ORDER = 5
DEFAULT_WINDOW_SCALE = 5.0


def _lorentzian_derivative_numerators(u: np.ndarray) -> list[np.ndarray]:
    # d^k/du^k 1/(1+u^2) = P_k(u) / (1+u^2)^(k+1); odd P_k vanish exactly at u=0.
    u2 = u * u
    return [
        np.ones_like(u),
        -2.0 * u,
        6.0 * u2 - 2.0,
        24.0 * u * (1.0 - u2),
        24.0 * (5.0 * u2 * u2 - 10.0 * u2 + 1.0),
        -240.0 * u * (3.0 * u2 * u2 - 10.0 * u2 + 3.0),
    ]


@dataclass(frozen=True)
class ModelProfile:
    """Lorentzian collapse about ``t = 0`` with minimum radius ``R_min``.

    Parameters are SI: radii in metres, ``gamma`` in seconds.
    """

    R0: float
    R_min: float
    gamma: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.R0) and np.isfinite(self.R_min) and np.isfinite(self.gamma)):
            raise InputError("model profile parameters must be finite")
        if not self.R0 > self.R_min > 0:
            raise InputError(f"need R0 > R_min > 0, got R0={self.R0}, R_min={self.R_min}")
        if not self.gamma > 0:
            raise InputError(f"gamma must be positive, got {self.gamma}")

    @property
    def amplitude(self) -> float:
        """``A = R0^2 - R_min^2`` in m^2."""
        return self.R0**2 - self.R_min**2

    def r2_derivatives(self, t) -> list[np.ndarray]:
        """``[S, S', ..., S^(5)]`` at ``t`` for ``S = R^2``."""
        u = np.asarray(t, dtype=float) / self.gamma
        q = 1.0 + u * u
        # Written as (R0^2 u^2 + Rmin^2)/(1+u^2) so that S(0) is exactly Rmin^2.
        out = [(self.R0**2 * u * u + self.R_min**2) / q]
        numerators = _lorentzian_derivative_numerators(u)
        a = self.amplitude
        for k in range(1, MAX_ORDER + 1):
            out.append(-a * numerators[k] / (q ** (k + 1) * self.gamma**k))
        return out


@dataclass(frozen=True)
class StaticRadius:
    """A bubble held at fixed radius ``R`` (metres)."""

    R: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.R) and self.R > 0):
            raise InputError(f"static radius must be positive, got {self.R}")

    def r2_derivatives(self, t) -> list[np.ndarray]:
        t = np.asarray(t, dtype=float)
        return [np.full(t.shape, self.R**2)] + [np.zeros(t.shape) for _ in range(MAX_ORDER)]


@dataclass(frozen=True, eq=False)
class TabulatedProfile:
    """Radius samples ``R(t_i)`` reconstructed by local fits of ``R^2``.

    The default fit interpolates (degree 10 through 11 points); fitting
    ``R^2`` rather than ``R`` keeps the reconstruction away from the branch
    point of the square root near a deep collapse.
    """

    samples: SampledFunction
    window: int = 11
    degree: int = 10
    _fit: LocalPolynomial = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if np.any(self.samples.y <= 0):
            raise InputError("tabulated radii must be positive")
        squared = SampledFunction(self.samples.t, self.samples.y**2)
        object.__setattr__(self, "_fit", LocalPolynomial(squared, self.window, self.degree))

    @classmethod
    def from_arrays(cls, t, radius, **kwargs) -> "TabulatedProfile":
        return cls(SampledFunction(np.asarray(t, dtype=float), np.asarray(radius, dtype=float)), **kwargs)

    @classmethod
    def from_file(cls, path: Union[str, Path], **kwargs) -> "TabulatedProfile":
        """Read two-column ``t_seconds, R_meters`` text (comma or whitespace)."""
        t, radius = read_table(path)
        return cls.from_arrays(t, radius, **kwargs)

    @property
    def valid_range(self) -> tuple[float, float]:
        return self._fit.valid_range

    @property
    def switch_points(self) -> np.ndarray:
        return self._fit.switch_points

    def r2_derivatives(self, t) -> list[np.ndarray]:
        return [self._fit.evaluate(t, k)[0] for k in range(MAX_ORDER + 1)]

    def r2_derivative_error(self, t, order: int) -> np.ndarray:
        return self._fit.evaluate(t, order)[1]


Profile = Union[ModelProfile, TabulatedProfile, StaticRadius]


def read_table(path: Union[str, Path]) -> tuple[np.ndarray, np.ndarray]:
    """Parse a two-column radius table; ``#`` starts a comment line."""
    t_vals, r_vals = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = [p for p in re.split(r"[,\s]+", stripped) if p]
            if len(parts) != 2:
                raise InputError(f"{path}:{lineno}: expected two columns, got {len(parts)}")
            try:
                t_vals.append(float(parts[0]))
                r_vals.append(float(parts[1]))
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
    t = np.array(t_vals)
    if len(t) > 1 and not np.all(np.diff(t) > 0):
        raise InputError(f"{path}: time column must be strictly increasing")
    return t, np.array(r_vals)


def _radius_chain(s: list[np.ndarray]) -> list[np.ndarray]:
    """``[R, R', ..., R^(5)]`` from ``[S, S', ..., S^(5)]`` with ``S = R^2``."""
    r = [np.sqrt(s[0])]
    two_r = 2.0 * r[0]
    for k in range(1, len(s)):
        acc = s[k]
        for j in range(1, k):
            acc = acc - math.comb(k, j) * r[j] * r[k - j]
        r.append(acc / two_r)
    return r


@dataclass(frozen=True)
class Trajectory:
    """A profile together with the time window ``[t0, t1]`` it is used on.

    Tabulated profiles may only be evaluated inside the window, which must
    itself lie inside the stencil-safe range of the samples.
    """

    profile: Profile
    window: tuple[float, float]

    def __post_init__(self) -> None:
        t0, t1 = (float(x) for x in self.window)
        if not (np.isfinite(t0) and np.isfinite(t1) and t0 < t1):
            raise InputError(f"trajectory window must satisfy t0 < t1, got {self.window}")
        if isinstance(self.profile, TabulatedProfile):
            lo, hi = self.profile.valid_range
            if t0 < lo or t1 > hi:
                raise InputError(
                    f"window [{t0:.6g}, {t1:.6g}] exceeds tabulated range [{lo:.6g}, {hi:.6g}]"
                )
        object.__setattr__(self, "window", (t0, t1))

    @classmethod
    def model(cls, R0: float, R_min: float, gamma: float, window_scale: float = DEFAULT_WINDOW_SCALE):
        """Model profile on the symmetric window ``+-5 gamma window_scale``."""
        if not window_scale > 0:
            raise InputError(f"window_scale must be positive, got {window_scale}")
        half = 5.0 * gamma * window_scale
        return cls(ModelProfile(R0, R_min, gamma), (-half, half))

    @classmethod
    def tabulated(cls, profile: TabulatedProfile, window: tuple[float, float] | None = None):
        return cls(profile, profile.valid_range if window is None else window)

    @classmethod
    def static(cls, R: float, window: tuple[float, float] = (-1.0, 1.0)):
        return cls(StaticRadius(R), window)

    @property
    def is_model(self) -> bool:
        return isinstance(self.profile, ModelProfile)

    def breakpoints(self) -> np.ndarray:
        """Interior points where the reconstruction switches pieces."""
        if isinstance(self.profile, TabulatedProfile):
            sp = self.profile.switch_points
            return sp[(sp > self.window[0]) & (sp < self.window[1])]
        return np.empty(0)

    def _check(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if isinstance(self.profile, TabulatedProfile):
            t0, t1 = self.window
            if np.any((t < t0) | (t > t1)):
                raise InputError(f"t outside tabulated trajectory window [{t0:.6g}, {t1:.6g}]")
        return t

    def r_squared_derivatives(self, t) -> list[np.ndarray]:
        return self.profile.r2_derivatives(self._check(t))

    def radius_derivatives(self, t) -> list[np.ndarray]:
        return _radius_chain(self.r_squared_derivatives(t))

    def radius(self, t):
        """``R(t)`` in metres."""
        return _scalar(np.sqrt(self.r_squared_derivatives(t)[0]), t)

    def beta(self, t):
        """Wall speed in units of c, ``dR/dt / c``."""
        s = self.r_squared_derivatives(t)
        return _scalar(s[1] / (2.0 * np.sqrt(s[0])) / C_LIGHT, t)

    def d5_R_squared(self, t):
        """Fifth time derivative of ``R^2`` in m^2/s^5."""
        return _scalar(self.r_squared_derivatives(t)[5], t)

    def beta_derivative(self, t, order: int):
        """``d^order beta / dt^order`` for order 1..4, in s^-order."""
        if order not in (1, 2, 3, 4):
            raise InputError(f"beta derivative order must be in 1..4, got {order!r}")
        return _scalar(self.radius_derivatives(t)[order + 1] / C_LIGHT, t)

    def d5_relative_error(self) -> float:
        """Worst reported error of ``d^5 R^2/dt^5`` relative to its peak.

        Zero for analytic profiles; for tabulated ones the local-fit error
        estimate at every sample inside the window.
        """
        if not isinstance(self.profile, TabulatedProfile):
            return 0.0
        t = self.profile.samples.t
        t = t[(t >= self.window[0]) & (t <= self.window[1])]
        values = np.abs(self.profile.r2_derivatives(t)[5])
        errors = self.profile.r2_derivative_error(t, 5)
        peak = float(np.max(values))
        if peak == 0.0:
            return 0.0 if float(np.max(errors)) == 0.0 else math.inf
        return float(np.max(errors)) / peak

    def max_beta(self) -> float:
        """Largest ``|beta|`` over the window (dense sampling)."""
        if isinstance(self.profile, StaticRadius):
            return 0.0
        t0, t1 = self.window
        if isinstance(self.profile, TabulatedProfile):
            t = self.profile.samples.t
            t = t[(t >= t0) & (t <= t1)]
        else:
            g = self.profile.gamma
            reach = max(abs(t0), abs(t1)) / g
            offsets = g * np.geomspace(1e-7, max(reach, 1e-6), 4001)
            t = np.concatenate([-offsets[::-1], [0.0], offsets])
            t = t[(t >= t0) & (t <= t1)]
        return float(np.max(np.abs(self.beta(t))))


def _scalar(value, t):
    return float(value) if np.ndim(t) == 0 else value


def radius(traj: Trajectory, t):
    return traj.radius(t)


def beta(traj: Trajectory, t):
    return traj.beta(t)


def d5_R_squared(traj: Trajectory, t):
    return traj.d5_R_squared(t)


def beta_derivative(traj: Trajectory, t, order: int):
    return traj.beta_derivative(t, order)
