import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sonovac import trajectory as tr
from sonovac.errors import InputError
from sonovac.numerics import C_LIGHT
from sonovac.trajectory import ModelProfile, TabulatedProfile, Trajectory

UM, PS = 1e-6, 1e-12
mpmath = pytest.importorskip("mpmath")


def _mp_radius(r0, rmin, g):
    a = r0 * r0 - rmin * rmin
    return lambda t: mpmath.sqrt(r0 * r0 - a / (1 + (t / g) ** 2))


def test_minimum_radius_is_exact(micron_traj):
    assert micron_traj.radius(0.0) == 1 * UM


def test_far_past_radius(micron_traj):
    assert micron_traj.radius(1e6 * PS) == pytest.approx(10 * UM, rel=1e-11)


def test_radius_at_gamma(micron_traj):
    # R(gamma)^2 = (R0^2 + Rmin^2) / 2
    assert micron_traj.radius(PS) == pytest.approx(math.sqrt(101 / 2) * UM, rel=1e-14)
    assert micron_traj.radius(PS) == pytest.approx(7.1063e-6, rel=1e-4)


def test_wall_speed_at_gamma(micron_traj):
    # dR/dt = A t / (gamma^2 (1+u^2)^2 R): at t = gamma, A / (4 gamma R(gamma)).
    r = math.sqrt(101 / 2) * UM
    rdot = 99e-12 / (4 * PS * r)
    assert rdot == pytest.approx(3.482808e6, rel=1e-6)
    assert micron_traj.beta(PS) * C_LIGHT == pytest.approx(rdot, rel=1e-13)
    assert micron_traj.beta(PS) == pytest.approx(1.161740e-2, rel=1e-6)


def test_static_wall_at_turning_point(micron_traj):
    assert micron_traj.beta(0.0) == 0.0


def test_fifth_derivative_at_gamma(micron_traj):
    assert micron_traj.d5_R_squared(PS) == pytest.approx(-15 * 99e-12 / PS**5, rel=1e-12)


def test_module_level_functions(micron_traj):
    assert tr.radius(micron_traj, PS) == micron_traj.radius(PS)
    assert tr.beta(micron_traj, PS) == micron_traj.beta(PS)
    assert tr.d5_R_squared(micron_traj, PS) == micron_traj.d5_R_squared(PS)
    assert tr.beta_derivative(micron_traj, PS, 2) == micron_traj.beta_derivative(PS, 2)


def test_derivatives_match_mpmath_on_grid(micron_traj):
    mpmath.mp.dps = 40
    try:
        f = _mp_radius(mpmath.mpf(10) * UM, mpmath.mpf(1) * UM, mpmath.mpf(PS))
        for t in np.linspace(-5 * PS, 5 * PS, 100):
            derivs = micron_traj.radius_derivatives(t)
            for k in range(1, 6):
                oracle = float(mpmath.diff(f, mpmath.mpf(t), k))
                scale = max(abs(oracle), 1e-12 * float(abs(mpmath.diff(f, 0, 2))) * PS ** (2 - k))
                assert abs(derivs[k] - oracle) <= 1e-9 * scale
    finally:
        mpmath.mp.dps = 15


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_beta_derivative_definition(micron_traj, order):
    t = 0.7 * PS
    assert micron_traj.beta_derivative(t, order) == micron_traj.radius_derivatives(t)[order + 1] / C_LIGHT


@pytest.mark.parametrize("order", [0, 5, 2.5])
def test_beta_derivative_order_range(micron_traj, order):
    with pytest.raises(InputError):
        micron_traj.beta_derivative(PS, order)


@given(
    ratio=st.floats(1.5, 500),
    rmin=st.floats(1e-8, 1e-4),
    g=st.floats(1e-16, 1e-9),
    x=st.floats(-50, 50),
)
@settings(max_examples=100, deadline=None)
def test_symmetry_and_bounds(ratio, rmin, g, x):
    traj = Trajectory.model(ratio * rmin, rmin, g)
    t = x * g
    r, r_mirror = traj.radius(t), traj.radius(-t)
    assert r == r_mirror
    assert rmin * (1 - 1e-15) <= r <= ratio * rmin * (1 + 1e-15)
    assert traj.beta(t) == -traj.beta(-t)
    assert traj.d5_R_squared(t) == -traj.d5_R_squared(-t)
    assert math.copysign(1, traj.beta(t)) == math.copysign(1, t) or traj.beta(t) == 0


def test_vectorised_matches_scalar(micron_traj):
    t = np.linspace(-3 * PS, 3 * PS, 7)
    vec = micron_traj.beta(t)
    assert [micron_traj.beta(x) for x in t] == list(vec)


@pytest.mark.parametrize(
    "kwargs",
    [dict(R0=1e-6, R_min=2e-6, gamma=1e-12), dict(R0=1e-6, R_min=0.0, gamma=1e-12),
     dict(R0=1e-6, R_min=0.5e-6, gamma=0.0), dict(R0=math.nan, R_min=0.5e-6, gamma=1e-12)],
)
def test_model_validation(kwargs):
    with pytest.raises(InputError):
        ModelProfile(**kwargs)


def test_static_profile_has_no_motion():
    traj = Trajectory.static(3e-6)
    assert traj.radius(0.2) == 3e-6
    assert traj.beta(0.2) == 0.0
    assert all(traj.beta_derivative(0.2, k) == 0.0 for k in range(1, 5))
    assert traj.max_beta() == 0.0


def test_max_beta_model(micron_traj):
    # |beta| peaks where d/du [u / ((1+u^2)^2 R)] = 0; brute force a fine grid as oracle.
    t = np.linspace(0, 2 * PS, 200001)
    assert micron_traj.max_beta() == pytest.approx(np.max(np.abs(micron_traj.beta(t))), rel=1e-6)


@pytest.fixture(scope="module")
def tabulated():
    t = np.linspace(-5 * PS, 5 * PS, 201)
    model = Trajectory.model(10 * UM, 1 * UM, PS)
    return model, Trajectory.tabulated(TabulatedProfile.from_arrays(t, model.radius(t)))


def test_tabulated_radius_roundtrip(tabulated):
    model, tab = tabulated
    lo, hi = tab.window
    t = np.linspace(lo, hi, 997)
    assert np.max(np.abs(tab.radius(t) / model.radius(t) - 1)) <= 1e-6


def test_tabulated_beta_roundtrip(tabulated):
    model, tab = tabulated
    lo, hi = tab.window
    t = np.linspace(lo, hi, 997)
    # Relative to the peak speed: beta crosses zero at t = 0.
    err = np.max(np.abs(tab.beta(t) - model.beta(t)))
    assert err <= 1e-6 * model.max_beta()


def test_tabulated_fifth_derivative_interior(tabulated):
    model, tab = tabulated
    lo, hi = tab.window
    half = 0.4 * (hi - lo)
    mid = 0.5 * (lo + hi)
    t = np.linspace(mid - half, mid + half, 301)
    exact = model.d5_R_squared(t)
    err = np.max(np.abs(tab.d5_R_squared(t) - exact)) / np.max(np.abs(exact))
    assert err <= 1e-2
    assert tab.d5_R_squared(PS) == pytest.approx(-15 * 99e-12 / PS**5, rel=1e-2)


def test_tabulated_window_is_enforced(tabulated):
    _, tab = tabulated
    with pytest.raises(InputError):
        tab.radius(-5 * PS)
    with pytest.raises(InputError):
        Trajectory.tabulated(tab.profile, window=(-5 * PS, 0.0))


def test_tabulated_breakpoints_inside_window(tabulated):
    _, tab = tabulated
    bp = tab.breakpoints()
    assert bp.size > 0
    assert np.all((bp > tab.window[0]) & (bp < tab.window[1]))


def test_read_table_formats(tmp_path):
    path = tmp_path / "r.txt"
    rows = [f"{i * 1e-15:.6e}{',' if i % 2 else ' '}{(2 + i * 1e-3) * 1e-6:.9e}" for i in range(15)]
    path.write_text("# t R\n\n" + "\n".join(rows) + "\n")
    t, r = tr.read_table(path)
    assert len(t) == 15 and r[3] == pytest.approx(2.003e-6)
    assert TabulatedProfile.from_file(path).samples.t.size == 15


@pytest.mark.parametrize(
    "body",
    ["0 1e-6 3\n", "0 abc\n", "1e-15 1e-6\n0 1e-6\n"],
    ids=["three-columns", "not-a-number", "decreasing"],
)
def test_read_table_errors(tmp_path, body):
    path = tmp_path / "bad.txt"
    path.write_text(body)
    with pytest.raises(InputError):
        tr.read_table(path)


def test_tabulated_rejects_non_positive_radius():
    t = np.linspace(0, 1, 20)
    with pytest.raises(InputError):
        TabulatedProfile.from_arrays(t, np.linspace(-1, 1, 20))


def _numeric_vs_analytic(lower, upper, traj, t):
    from sonovac.numerics import derivative_with_error
    from sonovac.radiation import characteristic_time

    value, _ = derivative_with_error(lower, 1, t, characteristic_time(traj, t))
    return value, upper(t)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_numeric_derivative_of_next_lower_order(micron_traj, k):
    # d/dt of the analytic (k-1)th derivative against the analytic kth, on 100 points.
    lower = lambda t: float(micron_traj.radius_derivatives(t)[k - 1])
    upper = lambda t: float(micron_traj.radius_derivatives(t)[k])
    grid = np.linspace(-5 * PS, 5 * PS, 100)
    peak = max(abs(upper(t)) for t in grid)
    for t in grid:
        num, ana = _numeric_vs_analytic(lower, upper, micron_traj, t)
        # Relative, with a floor at 1e-9 of the peak for points near a zero crossing.
        assert abs(num - ana) <= 1e-5 * max(abs(ana), 1e-4 * peak)


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_beta_derivatives_against_numeric(micron_traj, order):
    lower = (micron_traj.beta if order == 1
             else lambda t: micron_traj.beta_derivative(t, order - 1))
    upper = lambda t: micron_traj.beta_derivative(t, order)
    grid = np.linspace(-5 * PS, 5 * PS, 100)
    peak = max(abs(upper(t)) for t in grid)
    for t in grid:
        num, ana = _numeric_vs_analytic(lower, upper, micron_traj, t)
        assert abs(num - ana) <= 1e-5 * max(abs(ana), 1e-4 * peak)


def test_fifth_derivative_of_r_squared_against_numeric(micron_traj):
    s4 = lambda t: float(micron_traj.r_squared_derivatives(t)[4])
    grid = np.linspace(-5 * PS, 5 * PS, 100)
    peak = max(abs(micron_traj.d5_R_squared(t)) for t in grid)
    for t in grid:
        num, ana = _numeric_vs_analytic(s4, micron_traj.d5_R_squared, micron_traj, t)
        assert abs(num - ana) <= 1e-5 * max(abs(ana), 1e-4 * peak)
