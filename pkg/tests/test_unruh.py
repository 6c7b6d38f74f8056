import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vibcavity.casimir import DriveParams
from vibcavity.cavity import ModeSpec
from vibcavity.errors import NonPositivePhotonNumber, NoThresholdInRange
from vibcavity.units import INTERNAL, SI
from vibcavity.unruh import (acceleration_ratio, effective_acceleration,
                             efficiency_threshold_time, matching_residual,
                             mirror_peak_acceleration, solve_matching, thermal_energy_coth,
                             thermal_energy_planck, unruh_energy_density, unruh_photon_number,
                             unruh_temperature)

E_THRESHOLD = 1 / (math.e - 1)
mpmath.mp.dps = 40


def oracle_root(N_c):
    """Bisection at 40 digits on the matching equation."""
    N = mpmath.mpf(N_c)
    f = lambda y: (mpmath.exp(y) - 1) * N - 1 - 4 * mpmath.pi ** 2 / y ** 2
    lo, hi = mpmath.mpf("1e-12"), mpmath.mpf(2000)
    for _ in range(200):
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


# -- temperature and spectra -----------------------------------------------------------


def test_temperature():
    assert unruh_temperature(0.0) == 0.0
    assert unruh_temperature(2.5) == pytest.approx(2 * unruh_temperature(1.25), rel=1e-15)
    assert unruh_temperature(-3.0) == unruh_temperature(3.0)
    hbar = mpmath.mpf("6.62607015e-34") / (2 * mpmath.pi)
    ref = hbar * mpmath.mpf("1e20") / (2 * mpmath.pi * 299792458 * mpmath.mpf("1.380649e-23"))
    assert unruh_temperature(1e20, SI) == pytest.approx(float(ref), rel=1e-14)
    assert unruh_temperature(1e20, SI) == pytest.approx(0.405, abs=1e-3)


def test_vacuum_limit():
    W, W_T = unruh_energy_density(3.0, 0.0)
    assert W == W_T == 1.5
    assert unruh_photon_number(3.0, 0.0) == 0.0
    W, W_T = unruh_energy_density(3.0, 1e-7)
    assert W_T == 1.5 and W == pytest.approx(1.5, rel=1e-12)
    assert unruh_photon_number(3.0, 1e-2) == 0.0


def test_unit_occupation_point():
    omega = 1.7
    a = 2 * math.pi * omega / math.log(2)
    W, W_T = unruh_energy_density(omega, a)
    assert W_T == pytest.approx(1.5 * omega, rel=1e-14)
    assert unruh_photon_number(omega, a) == pytest.approx(83.169153820895282, rel=1e-13)
    assert W == pytest.approx((1 + (2 * math.pi / math.log(2)) ** 2) * W_T, rel=1e-14)


def test_photon_number_tail():
    a = 1.0
    N = unruh_photon_number(np.array([1.0, 5.0, 10.0, 20.0]), a)
    assert np.all(np.diff(N) < 0)
    assert N[-1] < 1e-50


def test_coth_and_planck_forms_agree():
    omega, a = np.meshgrid(np.logspace(-3, 2, 10), np.logspace(-2, 3, 10))
    coth = thermal_energy_coth(omega, a)
    planck = thermal_energy_planck(omega, a)
    assert coth.size == 100
    np.testing.assert_allclose(coth, planck, rtol=1e-12)


def test_spectrum_ordering():
    omega = np.logspace(-2, 2, 30)
    for a in (0.1, 1.0, 50.0):
        W, W_T = unruh_energy_density(omega, a)
        assert np.all(W >= W_T) and np.all(W_T >= 0.5 * omega)
        assert np.all(unruh_photon_number(omega, a) >= 0)


def test_spectrum_rejects_nonpositive_frequency():
    with pytest.raises(ValueError):
        unruh_energy_density(0.0, 1.0)
    with pytest.raises(ValueError):
        unruh_photon_number(-1.0, 1.0)


# -- effective acceleration ------------------------------------------------------------------


def test_threshold_photon_number():
    cmp = effective_acceleration(E_THRESHOLD, 1.0)
    assert cmp.y_approx == pytest.approx(1.0, abs=1e-15)
    assert cmp.a_eff_approx == pytest.approx(2 * math.pi, rel=1e-15)
    assert cmp.y_exact > cmp.y_approx


def test_four_pi_gap():
    cmp = effective_acceleration(1 / math.expm1(4 * math.pi), 1.0)
    assert cmp.y_approx == pytest.approx(4 * math.pi, rel=1e-14)
    assert cmp.y_exact == pytest.approx(12.782776372996688, rel=1e-14)
    assert (cmp.y_exact - cmp.y_approx) / cmp.y_approx == pytest.approx(0.0172, abs=1e-4)


def test_small_photon_number_limit():
    cmp = effective_acceleration(1e-200, 1.0)
    assert cmp.y_approx > 400 and cmp.a_eff_exact < 0.02


def test_nonpositive_photon_number():
    with pytest.raises(NonPositivePhotonNumber):
        effective_acceleration(0.0, 1.0)
    with pytest.raises(NonPositivePhotonNumber):
        solve_matching(-1.0)
    with pytest.raises(ValueError):
        effective_acceleration(1.0, 1.0, V_c=0.0)


@pytest.mark.parametrize("N_c", [1e-300, 1e-40, 1e-5, 0.01, E_THRESHOLD, 1.0, 37.0, 1e6, 1e12])
def test_root_against_bisection_oracle(N_c):
    y = solve_matching(N_c)
    assert y == pytest.approx(oracle_root(N_c), rel=1e-13)
    assert abs(matching_residual(y, N_c)) <= 1e-12 * max(1.0, 4 * math.pi ** 2 / y ** 2)


@settings(max_examples=200, deadline=None)
@given(log_n=st.floats(-300, 15))
def test_ordering_and_residual(log_n):
    N_c = 10.0 ** log_n
    cmp = effective_acceleration(N_c, 1.0)
    assert cmp.y_exact > cmp.y_approx > 0
    assert cmp.a_eff_exact < cmp.a_eff_approx
    y = cmp.y_exact
    assert abs(matching_residual(y, N_c)) <= 1e-12 * max(1.0, 4 * math.pi ** 2 / y ** 2)
    gap = (cmp.y_exact - cmp.y_approx) / cmp.y_approx
    if cmp.y_approx >= 4 * math.pi:
        assert gap <= 0.02
    if cmp.y_approx >= 2 * math.pi:
        assert gap <= 0.15


def test_gap_bounds_against_oracle():
    for y_a in (2 * math.pi, 4 * math.pi):
        N_c = 1 / math.expm1(y_a)
        gap = (oracle_root(N_c) - y_a) / y_a
        assert gap <= (0.15 if y_a < 10 else 0.02)
        assert effective_acceleration(N_c, 1.0).y_exact == pytest.approx(oracle_root(N_c), rel=1e-13)


def test_monotone_in_photon_number():
    Ns = np.logspace(-20, 8, 60)
    ys = np.array([[c.y_exact, c.y_approx, c.a_eff_exact] for c in
                   (effective_acceleration(n, 1.0) for n in Ns)])
    assert np.all(np.diff(ys[:, 0]) < 0)
    assert np.all(np.diff(ys[:, 1]) < 0)
    assert np.all(np.diff(ys[:, 2]) > 0)


def test_volume_normalization():
    a = effective_acceleration(4.0, 1.0, V_c=2.0)
    b = effective_acceleration(2.0, 1.0)
    assert a.N_c == 2.0 and a.y_exact == b.y_exact


# -- mirror acceleration and ratio -----------------------------------------------------------


def test_mirror_peak_acceleration():
    mode = ModeSpec(1, 1.0)
    assert mirror_peak_acceleration(0.0, mode) == 0.0
    fast = ModeSpec(1, 0.5)
    assert mirror_peak_acceleration(1e-3, fast) == pytest.approx(
        4 * mirror_peak_acceleration(1e-3, mode), rel=1e-15)
    si = ModeSpec(1, 2 * math.pi * SI.c / 1e10, SI.c)
    assert si.omega_m0 == pytest.approx(1e10, rel=1e-15)
    assert mirror_peak_acceleration(1e-9, si) == pytest.approx(4e11, rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(eps=st.floats(1e-12, 1e-1), L0=st.floats(1e-3, 1e3), m=st.integers(1, 20),
       c=st.sampled_from([1.0, SI.c]))
def test_mirror_acceleration_second_form(eps, L0, m, c):
    mode = ModeSpec(m, L0, c)
    second = 2 * math.pi * mode.omega_m0 * c * (4 * eps / L0) * m
    assert mirror_peak_acceleration(eps, mode) == pytest.approx(second, rel=1e-12)


def test_ratio_threshold_cases():
    m, eps = 2, 0.125
    r = acceleration_ratio(E_THRESHOLD, eps, 4 * m * eps, m)
    assert r.R == pytest.approx(1.0, abs=1e-15)
    assert r.high_acceleration or r.R == pytest.approx(1.0)
    assert acceleration_ratio(E_THRESHOLD, eps, 8 * m * eps, m).R == pytest.approx(2.0, rel=1e-15)
    assert acceleration_ratio(1e15, eps, 4 * m * eps, m).R > 1e14
    assert r.R_exact < r.R


@settings(max_examples=100, deadline=None)
@given(log_n=st.floats(-30, 10), eps=st.floats(1e-4, 0.1), m=st.integers(1, 5),
       L0=st.floats(0.1, 10))
def test_ratio_matches_separate_operations(log_n, eps, m, L0):
    N = 10.0 ** log_n
    r = acceleration_ratio(N, eps, L0, m)
    mode = ModeSpec(m, L0)
    a_eff = effective_acceleration(N, mode.omega_m0).a_eff_approx
    assert r.R == pytest.approx(a_eff / mirror_peak_acceleration(eps, mode), rel=1e-12)
    assert r.a0 == mirror_peak_acceleration(eps, mode)


def test_ratio_rejects_bad_input():
    with pytest.raises(ValueError):
        acceleration_ratio(1.0, 0.0, 1.0, 1)
    with pytest.raises(NonPositivePhotonNumber):
        acceleration_ratio(0.0, 0.1, 1.0, 1)


# -- threshold time -------------------------------------------------------------------------------


def test_threshold_time_at_four_m_eps():
    p = DriveParams.resonant(1e-3, 1.0)
    th = efficiency_threshold_time(p, 4 * 0.25, 1, 0.25)
    x = th.nu0 * th.t_exact
    assert x == pytest.approx(float(mpmath.asinh(1 / mpmath.sqrt(mpmath.e - 1))), abs=1e-9)
    assert x == pytest.approx(0.70341455687364763, abs=1e-12)
    assert th.nu0 * th.t_asymptotic == pytest.approx(0.42248475325, abs=1e-10)
    assert th.N_threshold == pytest.approx(E_THRESHOLD, rel=1e-15)
    assert not th.log_form_physical
    assert th.nu0 * th.t_log_form == pytest.approx(0.5 * math.log(E_THRESHOLD), rel=1e-14)
    assert th.quarter_deviation == pytest.approx(0.25 / x - 1, rel=1e-12)
    assert not th.quarter_consistent


def test_threshold_time_grows_with_amplitude_at_fixed_rate():
    p = DriveParams.resonant(1e-3, 1.0)
    ts = [efficiency_threshold_time(p, 1.0, 1, e).t_exact for e in (0.1, 0.2, 0.3, 0.5)]
    assert all(b > a for a, b in zip(ts, ts[1:]))


def test_threshold_time_out_of_range():
    p = DriveParams.resonant(1e-3, 1.0)
    with pytest.raises(NoThresholdInRange):
        efficiency_threshold_time(p, 1.0, 1, 0.25, t_max=10.0)


def test_internal_units_are_unity():
    assert (INTERNAL.c, INTERNAL.hbar, INTERNAL.k_B) == (1.0, 1.0, 1.0)
