"""Self-check suite run by ``sonovac validate``.

Each check recomputes a quantity along two independent routes (closed form
against quadrature, analytic against finite differences, engine against a
brute-force sum) and reports whether they agree at a fixed tolerance.  The
functions are looked up through their modules at call time so a perturbed
build is caught.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import amplitude, radiation, trajectory
from .numerics import HBAR, K_B, derivative_with_error, integrate_adaptive

SEED = 271828


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def random_model_scenarios(count: int = 100, seed: int = SEED) -> Iterator[radiation.CollapseScenario]:
    """Scenarios with n in [1.1, 2], gamma in [0.1 fs, 1 ps], R0/Rmin in [2, 200]."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = rng.uniform(1.1, 2.0)
        gamma = 10 ** rng.uniform(-16, -12)
        ratio = 10 ** rng.uniform(math.log10(2), math.log10(200))
        r_min = 10 ** rng.uniform(-7, -5)
        yield radiation.CollapseScenario.model(n, ratio * r_min, r_min, gamma)


def check_identity() -> CheckResult:
    worst = 0.0
    for sc in random_model_scenarios():
        w_spec = radiation.total_energy_spectral(sc)
        w_traj = radiation.total_energy_trajectory(sc, trace_points=3).W_trajectory
        worst = max(worst, _rel(w_traj, w_spec))
    return CheckResult("spectral/trajectory identity", worst <= 1e-4,
                       f"worst relative difference {worst:.2e} over 100 scenarios (limit 1e-4)")


def check_reference_energy() -> CheckResult:
    sc = radiation.reference_scenario()
    w_spec = radiation.total_energy_spectral(sc)
    w_traj = radiation.total_energy_trajectory(sc, trace_points=3).W_trajectory
    worst = max(_rel(w_spec, 2e-13), _rel(w_traj, 2e-13))
    return CheckResult("reference energy", worst <= 0.05,
                       f"W = {w_spec:.4e} J (spectral), {w_traj:.4e} J (trajectory); target 2e-13 J +-5%")


def _golden_max(f: Callable[[float], float], lo: float, hi: float, iters: int = 200) -> float:
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def check_peak() -> CheckResult:
    worst = 0.0
    for gamma in (1e-16, 1e-15, 3.7e-14, 1e-12):
        sc = radiation.CollapseScenario.model(1.3, 10e-6, 1e-6, gamma)
        # Maximise in log-omega so the search is scale free.
        x = _golden_max(lambda lw: radiation.spectral_density(sc, math.exp(lw)) / 1.0,
                        math.log(0.01 / gamma), math.log(100.0 / gamma))
        worst = max(worst, _rel(radiation.spectral_peak(gamma), math.exp(x)))
    return CheckResult("spectral peak", worst <= 1e-3,
                       f"peak formula vs numeric maximum, worst {worst:.2e} (limit 1e-3)")


def check_temperature() -> CheckResult:
    t1 = radiation.effective_temperature(1e-15)
    t10 = radiation.effective_temperature(1e-14)
    omega = 2.0e15
    boltzmann = math.exp(-HBAR * omega / (K_B * t1))
    ok = (_rel(t1, 3.818e3) <= 1e-3 and _rel(t1 / t10, 10.0) <= 1e-12
          and _rel(boltzmann, math.exp(-2.0 * 1e-15 * omega)) <= 1e-12)
    return CheckResult("effective temperature", ok, f"T_eff(1 fs) = {t1:.5g} K")


def check_spectral_quadrature() -> CheckResult:
    worst_w, worst_n, worst_e = 0.0, 0.0, 0.0
    for sc in random_model_scenarios(10, SEED + 1):
        w = radiation.total_energy_spectral(sc)
        n = radiation.photon_count(sc)
        worst_w = max(worst_w, _rel(radiation.total_energy_spectral(sc, "quadrature"), w))
        worst_n = max(worst_n, _rel(radiation.photon_count(sc, "quadrature"), n))
        # hbar * int omega N domega must give back W.
        gamma = sc.trajectory.profile.gamma
        e, _ = integrate_adaptive(lambda x: HBAR * x * radiation.photon_density(sc, x), 0.0, 40.0 / gamma)
        worst_e = max(worst_e, _rel(e, w))
    ok = worst_w <= 1e-8 and worst_n <= 1e-6 and worst_e <= 1e-8
    return CheckResult("photon bookkeeping", ok,
                       f"W {worst_w:.1e}, N {worst_n:.1e}, hbar<omega>N {worst_e:.1e}")


def check_scaling() -> CheckResult:
    base = dict(n=1.3, R0=20e-6, R_min=1e-6, gamma=2e-15)

    def w(**kw):
        sc = radiation.CollapseScenario.model(**{**base, **kw})
        return radiation.total_energy_trajectory(sc, trace_points=3).W_trajectory

    w0 = w()
    g = _rel(w(gamma=20e-15) / w0, 10.0**-5)
    a_new = math.sqrt(10 * (base["R0"] ** 2 - base["R_min"] ** 2) + base["R_min"] ** 2)
    a = _rel(w(R0=a_new) / w0, 100.0)
    contrast = lambda n: (n * n - 1) ** 2 / (n * n)
    c = _rel(w(n=2.0) / w0, contrast(2.0) / contrast(1.3))
    worst = max(g, a, c)
    return CheckResult("scaling laws", worst <= 1e-6,
                       f"gamma^-5 {g:.1e}, A^2 {a:.1e}, contrast {c:.1e} (limit 1e-6)")


def check_nullity() -> CheckResult:
    vacuum = radiation.CollapseScenario.model(1.0, 55.2e-6, 0.5e-6, 1e-15)
    static = radiation.CollapseScenario(radiation.Medium(1.3), trajectory.Trajectory.static(1e-6))
    model = amplitude.MatrixElementModel.constant(1.0)
    k = amplitude.ModeLabel(1e15)
    amp = amplitude.transition_amplitude(model, static.trajectory, k, k, (-1e-14, 1e-14)).value
    values = [
        radiation.total_energy_spectral(vacuum),
        radiation.total_energy_trajectory(vacuum, trace_points=3).W_trajectory,
        radiation.total_energy_trajectory(static, trace_points=3).W_trajectory,
        radiation.spectral_density(vacuum, 1.5e15),
        abs(amp),
    ]
    return CheckResult("nullity", all(v == 0.0 for v in values), f"values {values}")


def check_derivatives() -> CheckResult:
    r0, rmin, gamma = 10e-6, 1e-6, 1e-12
    traj = trajectory.Trajectory.model(r0, rmin, gamma)
    a = r0**2 - rmin**2
    analytic = _rel(traj.d5_R_squared(gamma), -15 * a / gamma**5)
    scale = radiation.characteristic_time(traj, gamma)
    b4_num, _ = derivative_with_error(traj.beta, 4, gamma, scale)
    beta4 = _rel(b4_num, traj.beta_derivative(gamma, 4))
    t = np.linspace(-5 * gamma, 5 * gamma, 201)
    tab = trajectory.Trajectory.tabulated(trajectory.TabulatedProfile.from_arrays(t, traj.radius(t)))
    tabulated = _rel(tab.d5_R_squared(gamma), -15 * a / gamma**5)
    ok = analytic <= 1e-9 and beta4 <= 1e-5 and tabulated <= 1e-2
    return CheckResult("derivative self-consistency", ok,
                       f"analytic d5 {analytic:.1e}, beta'''' {beta4:.1e}, tabulated d5 {tabulated:.1e}")


class _GaussianPulse:
    def __init__(self, beta0: float, sigma: float, radius: float = 1e-6):
        self.beta0, self.sigma, self.r = beta0, sigma, radius

    def beta(self, t):
        return self.beta0 * np.exp(-np.asarray(t, dtype=float) ** 2 / (2 * self.sigma**2))

    def radius(self, t):
        return np.full(np.shape(t), self.r)


def check_amplitudes() -> CheckResult:
    sigma, beta0, m = 1e-15, 1e-3, 0.7
    pulse = _GaussianPulse(beta0, sigma)
    model = amplitude.MatrixElementModel.constant(m)
    k, kp = amplitude.ModeLabel(0.9e15), amplitude.ModeLabel(1.4e15)
    big = k.omega + kp.omega
    window = (-8 * sigma, 8 * sigma)
    amp = amplitude.transition_amplitude(model, pulse, k, kp, window).value
    oracle = (-(m / big) * beta0 * sigma * math.sqrt(2 * math.pi)
              * math.exp(-(big * sigma) ** 2 / 2) * np.exp(-1j * big * window[1]))
    fourier = abs(amp - oracle) / abs(oracle)
    riemann = abs(amplitude.riemann_amplitude(model, pulse, k, kp, window) - amp) / abs(amp)
    half = amplitude.transition_amplitude(model, _GaussianPulse(beta0 / 2, sigma), k, kp, window).value
    linear = abs(2 * half - amp) / abs(amp)
    sep = amplitude.MatrixElementModel.separable(lambda w: math.exp(-w * w))
    variance = _rel(amplitude.force_variance(sep, 1e-6), math.pi / 16)
    ok = fourier <= 1e-6 and riemann <= 1e-4 and linear <= 1e-10 and variance <= 1e-6
    return CheckResult("amplitude oracles", ok,
                       f"Fourier {fourier:.1e}, Riemann {riemann:.1e}, linearity {linear:.1e}, "
                       f"variance {variance:.1e}")


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_identity,
    check_reference_energy,
    check_peak,
    check_temperature,
    check_spectral_quadrature,
    check_scaling,
    check_nullity,
    check_derivatives,
    check_amplitudes,
)


def run_checks() -> list[CheckResult]:
    results = []
    for check in CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failing check
            name = check.__name__.removeprefix("check_").replace("_", " ")
            results.append(CheckResult(name, False, f"raised {type(exc).__name__}: {exc}"))
    return results
