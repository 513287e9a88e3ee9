"""Derivatives of order 1..5 of callables and of tabulated samples."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from ..errors import InputError

MAX_ORDER = 5


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Ordinates ``y`` sampled at strictly increasing abscissae ``t``."""

    t: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.t, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if t.ndim != 1 or t.shape != y.shape:
            raise InputError("abscissae and ordinates must be 1-D and of equal length")
        if len(t) < 2 * MAX_ORDER + 1:
            raise InputError(f"need at least {2 * MAX_ORDER + 1} samples, got {len(t)}")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(y)):
            raise InputError("samples must be finite")
        if not np.all(np.diff(t) > 0):
            raise InputError("abscissae must be strictly increasing")
        t.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)


def _check_order(order: int, max_order: int = MAX_ORDER) -> None:
    if not (isinstance(order, (int, np.integer)) and 1 <= order <= max_order):
        raise InputError(f"derivative order must be in 1..{max_order}, got {order!r}")


@lru_cache(maxsize=None)
def central_weights(order: int) -> tuple[tuple[int, float], ...]:
    """Second-order-accurate central stencil ``(offset, weight)`` pairs.

    Weights solve the moment conditions exactly in rationals, so the stencil
    is bitwise reproducible.
    """
    m = (order + 1) // 2
    offsets = list(range(-m, m + 1))
    n = len(offsets)
    rows = [[Fraction(j) ** i for j in offsets] + [Fraction(math.factorial(order) if i == order else 0)]
            for i in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [v - factor * w for v, w in zip(rows[r], rows[col])]
    return tuple((j, float(rows[i][n])) for i, j in enumerate(offsets) if rows[i][n] != 0)


def _central_difference(f: Callable[[float], float], order: int, t: float, h: float) -> float:
    return math.fsum(w * f(t + j * h) for j, w in central_weights(order)) / h**order


def derivative_with_error(
    f: Callable[[float], float],
    order: int,
    t: float,
    scale: float = 1.0,
    *,
    initial_step: float = 0.25,
    shrink: float = 1.4,
    max_steps: int = 16,
) -> tuple[float, float]:
    """Ridders-extrapolated central difference of a scalar callable.

    The first step is ``initial_step * scale``; each further step shrinks
    by ``shrink`` and the tableau is extrapolated in ``h**2``.  The entry
    with the smallest internal error estimate wins.  ``scale`` should be the
    distance over which ``f`` changes appreciably (for a singularity at
    complex distance ``d`` from ``t`` use something below ``d``).

    Returns ``(value, error_estimate)``.
    """
    _check_order(order)
    if not scale > 0:
        raise InputError(f"scale must be positive, got {scale}")
    h = initial_step * scale
    fac2 = shrink * shrink
    prev = [_central_difference(f, order, t, h)]
    best, err = prev[0], math.inf
    for _ in range(1, max_steps):
        h /= shrink
        row = [_central_difference(f, order, t, h)]
        fac = fac2
        for j in range(1, len(prev) + 1):
            row.append((row[j - 1] * fac - prev[j - 1]) / (fac - 1.0))
            fac *= fac2
            errt = max(abs(row[j] - row[j - 1]), abs(row[j] - prev[j - 1]))
            if errt <= err:
                err, best = errt, row[j]
        if abs(row[-1] - prev[-1]) >= 2.0 * err:
            break
        prev = row
    return best, err


@dataclass(frozen=True, eq=False)
class LocalPolynomial:
    """Moving least-squares polynomial fits over a sampled function.

    Every sample index ``i`` owns a fit of ``degree`` through the ``window``
    samples centred on it.  A query at ``t`` uses the fit owned by the
    nearest sample, so the reconstruction is piecewise polynomial with
    switch points halfway between samples.  Only indices with a full
    centred window are admissible; see :attr:`valid_range`.
    """

    samples: SampledFunction
    window: int = 11
    degree: int = 7

    def __post_init__(self) -> None:
        n = len(self.samples.t)
        if self.window % 2 != 1 or self.window < 3:
            raise InputError(f"window must be an odd integer >= 3, got {self.window}")
        if not MAX_ORDER <= self.degree < self.window:
            raise InputError(f"degree must satisfy {MAX_ORDER} <= degree < window, got {self.degree}")
        if n < self.window:
            raise InputError(f"need at least {self.window} samples for the stencil, got {n}")
        half = self.window // 2
        t, y = self.samples.t, self.samples.y
        centers = np.arange(half, n - half)
        scales = np.empty(len(centers))
        coeffs = np.empty((len(centers), self.degree + 1))
        # Two degrees lower: on a symmetric stencil odd and even powers
        # decouple, so dropping a single power leaves half the derivatives unchanged.
        low_deg = max(self.degree - 2, 0)
        lower = np.empty((len(centers), low_deg + 1))
        for row, i in enumerate(centers):
            ts = t[i - half:i + half + 1]
            scales[row] = (ts[-1] - ts[0]) / (self.window - 1)
            x = (ts - t[i]) / scales[row]
            ys = y[i - half:i + half + 1]
            coeffs[row] = np.linalg.lstsq(np.vander(x, self.degree + 1, increasing=True), ys, rcond=None)[0]
            lower[row] = np.linalg.lstsq(np.vander(x, low_deg + 1, increasing=True), ys, rcond=None)[0]
        for arr in (scales, coeffs, lower):
            arr.setflags(write=False)
        object.__setattr__(self, "_centers", centers)
        object.__setattr__(self, "_scales", scales)
        object.__setattr__(self, "_coeffs", coeffs)
        object.__setattr__(self, "_lower", lower)

    @property
    def valid_range(self) -> tuple[float, float]:
        t = self.samples.t
        return float(t[self._centers[0]]), float(t[self._centers[-1]])

    @property
    def switch_points(self) -> np.ndarray:
        """Abscissae where the owning fit changes (midpoints between centres)."""
        tc = self.samples.t[self._centers]
        return 0.5 * (tc[1:] + tc[:-1])

    def _owner(self, t: np.ndarray) -> np.ndarray:
        lo, hi = self.valid_range
        if np.any((t < lo) | (t > hi)):
            raise InputError(f"t outside the sampled range minus stencil margin [{lo:.6g}, {hi:.6g}]")
        tc = self.samples.t[self._centers]
        if len(tc) == 1:
            return np.zeros(t.shape, dtype=int)
        k = np.clip(np.searchsorted(tc, t), 1, len(tc) - 1)
        take_left = (t - tc[k - 1]) <= (tc[k] - t)
        return np.where(take_left, k - 1, k)

    @staticmethod
    def _poly_derivative(c: np.ndarray, x: np.ndarray, order: int) -> np.ndarray:
        # c has shape (m, deg+1); evaluate sum_j c_j * d^order/dx^order x^j.
        deg = c.shape[1] - 1
        out = np.zeros(x.shape)
        for j in range(deg, order - 1, -1):
            factor = math.perm(j, order)
            out = out * x + factor * c[:, j]
        return out

    def evaluate(self, t, order: int = 0) -> tuple[np.ndarray, np.ndarray]:
        """Value (``order=0``) or derivative of the fit at ``t``.

        Returns ``(value, error_estimate)``; the error estimate is the
        difference to the fit two degrees lower.
        """
        if not 0 <= order <= MAX_ORDER:
            raise InputError(f"derivative order must be in 0..{MAX_ORDER}, got {order}")
        t_in = np.asarray(t, dtype=float)
        t_arr = np.atleast_1d(t_in).ravel()
        owner = self._owner(t_arr)
        h = self._scales[owner]
        x = (t_arr - self.samples.t[self._centers[owner]]) / h
        value = self._poly_derivative(self._coeffs[owner], x, order) / h**order
        lower = self._poly_derivative(self._lower[owner], x, order) / h**order
        if t_in.ndim == 0:
            return value[0], np.abs(value - lower)[0]
        return value.reshape(t_in.shape), np.abs(value - lower).reshape(t_in.shape)


def sampled_derivative(
    samples: SampledFunction, order: int, t: float, *, window: int = 11, degree: int = 7
) -> tuple[float, float]:
    """Local least-squares derivative of tabulated data.

    Fits a degree-``degree`` polynomial to the ``window`` samples centred
    on the sample nearest ``t``.  Returns ``(value, error_estimate)``.
    """
    _check_order(order)
    fit = LocalPolynomial(samples, window=window, degree=degree)
    value, err = fit.evaluate(t, order)
    return float(value), float(err)


def derivative(
    f: Union[Callable[[float], float], SampledFunction],
    order: int,
    t: float,
    scale: float = 1.0,
) -> float:
    """Derivative of order 1..5 of a callable or of tabulated samples.

    Callables go through :func:`derivative_with_error`; sampled input through
    :func:`sampled_derivative` with its default 11-point, degree-7 window.
    """
    if isinstance(f, SampledFunction):
        return sampled_derivative(f, order, t)[0]
    return derivative_with_error(f, order, t, scale)[0]
