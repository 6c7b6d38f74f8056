"""Unruh spectra and the effective acceleration of a pumped cavity mode.

The effective acceleration is the uniform acceleration whose (non-thermal)
Unruh occupation at ``omega_m0`` equals the cavity photon number. With
``y = 2 pi omega_m0 c / a`` it solves

    (exp(y) - 1) N_c = 1 + 4 pi^2 / y^2,

and drops to ``y = ln(1 + 1/N_c)`` when the ``1/y^2`` correction is ignored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .casimir import DriveParams, resonant_rate
from .cavity import ModeSpec
from .errors import NonPositivePhotonNumber, NoThresholdInRange, RootBracketFailure
from .units import INTERNAL, Units

FOUR_PI_SQ = 4 * math.pi ** 2


def unruh_temperature(a: float, units: Units = INTERNAL) -> float:
    return units.hbar * abs(a) / (2 * math.pi * units.c * units.k_B)


def _x(omega, a, units):
    """``pi omega c / |a|``; infinite for ``a == 0``."""
    a = np.abs(np.asarray(a, dtype=float))
    with np.errstate(divide="ignore"):
        return np.where(a > 0, math.pi * omega * units.c / np.where(a > 0, a, 1.0), np.inf)


def thermal_energy_coth(omega, a, units: Units = INTERNAL):
    """``(hbar omega / 2) coth(pi omega c / |a|)``."""
    x = _x(omega, a, units)
    return 0.5 * units.hbar * omega / np.tanh(x)


def thermal_energy_planck(omega, a, units: Units = INTERNAL):
    """``hbar omega [1/2 + 1/(exp(2 pi omega c/|a|) - 1)]``."""
    x = _x(omega, a, units)
    with np.errstate(over="ignore"):
        return units.hbar * omega * (0.5 + 1.0 / np.expm1(2 * x))


def _prefactor(omega, a, units):
    return 1.0 + (np.asarray(a, dtype=float) / (omega * units.c)) ** 2


def unruh_energy_density(omega, a, units: Units = INTERNAL):
    """Energy per mode ``(W, W_T)``; ``W = [1 + a^2/(omega c)^2] W_T``."""
    if np.any(np.asarray(omega) <= 0):
        raise ValueError("omega must be positive")
    W_T = thermal_energy_coth(omega, a, units)
    return _prefactor(omega, a, units) * W_T, W_T


def unruh_photon_number(omega, a, units: Units = INTERNAL):
    """Photons per mode without the vacuum half-quantum."""
    if np.any(np.asarray(omega) <= 0):
        raise ValueError("omega must be positive")
    x = _x(omega, a, units)
    with np.errstate(over="ignore"):
        out = _prefactor(omega, a, units) / np.expm1(2 * x)
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class UnruhComparison:
    N_c: float
    V_c: float
    y_exact: float
    y_approx: float
    a_eff_exact: float
    a_eff_approx: float
    a0: float = math.nan
    R: float = math.nan
    R_exact: float = math.nan

    @property
    def high_acceleration(self) -> bool:
        return self.R >= 1.0


def matching_residual(y: float, N_c: float) -> float:
    """``(exp(y) - 1) N_c - 1 - 4 pi^2 / y^2`` evaluated without overflow."""
    lhs = math.exp(y + math.log(N_c) + math.log(-math.expm1(-y)))
    return lhs - 1.0 - FOUR_PI_SQ / (y * y)


def _log_residual(y: float, N_c: float) -> float:
    # log of both sides; same root, monotone, no overflow
    return y + math.log(-math.expm1(-y)) + math.log(N_c) - math.log1p(FOUR_PI_SQ / (y * y))


def _log_residual_slope(y: float) -> float:
    return 1.0 / -math.expm1(-y) + 2 * FOUR_PI_SQ / (y * (y * y + FOUR_PI_SQ))


def solve_matching(N_c: float) -> float:
    """Root ``y > 0`` of ``(exp(y) - 1) N_c = 1 + 4 pi^2 / y^2``.

    The root lies in ``[ln(1 + 1/N_c), ln(1 + (1 + 4 pi^2/y_a^2)/N_c)]``; bisection
    inside that bracket, then Newton polishing.
    """
    if not N_c > 0:
        raise NonPositivePhotonNumber(f"N_c must be positive, got {N_c}")
    lo = math.log1p(1.0 / N_c)
    hi = math.log1p((1.0 + FOUR_PI_SQ / (lo * lo)) / N_c)
    f_lo, f_hi = _log_residual(lo, N_c), _log_residual(hi, N_c)
    if f_lo > 0 or f_hi < 0:
        raise RootBracketFailure(f"matching root not bracketed for N_c={N_c}")
    if f_hi == 0:
        return hi
    y = optimize.bisect(_log_residual, lo, hi, args=(N_c,), xtol=1e-15, rtol=1e-15)
    for _ in range(3):
        step = _log_residual(y, N_c) / _log_residual_slope(y)
        y -= step
        if abs(step) <= 1e-16 * y:
            break
    return y


def effective_acceleration(N_m: float, omega_m0: float, V_c: float = 1.0,
                           units: Units = INTERNAL) -> UnruhComparison:
    """Effective Unruh acceleration matching ``N_m`` photons in the mode."""
    if not N_m > 0:
        raise NonPositivePhotonNumber(f"photon number must be positive, got {N_m}")
    if not V_c > 0:
        raise ValueError("V_c must be positive")
    N_c = N_m / V_c
    y_approx = math.log1p(1.0 / N_c)
    y_exact = solve_matching(N_c)
    scale = 2 * math.pi * omega_m0 * units.c
    return UnruhComparison(N_c, V_c, y_exact, y_approx, scale / y_exact, scale / y_approx)


def mirror_peak_acceleration(epsilon: float, mode: ModeSpec, L0: float | None = None) -> float:
    """Peak wall acceleration ``eps Omega^2`` at ``Omega = 2 omega_m0``, i.e. ``4 eps omega_m0^2``."""
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    L0 = mode.L0 if L0 is None else L0
    omega = 2 * math.pi * mode.m * mode.c / L0
    return 4 * epsilon * omega ** 2


def acceleration_ratio(N_m: float, epsilon: float, L0: float, m: int, V_c: float = 1.0,
                       c: float = 1.0) -> UnruhComparison:
    """Ratio of effective to peak mirror acceleration.

    ``R = L0 / (4 m eps ln(1 + 1/N_c))`` uses the logarithmic approximation;
    ``R_exact`` uses the full matching root.
    """
    if not (epsilon > 0 and L0 > 0 and m > 0):
        raise ValueError("epsilon, L0 and m must be positive")
    mode = ModeSpec(m, L0, c)
    cmp = effective_acceleration(N_m, mode.omega_m0, V_c, Units(c=c))
    K = L0 / (4 * m * epsilon)
    return UnruhComparison(cmp.N_c, V_c, cmp.y_exact, cmp.y_approx, cmp.a_eff_exact,
                           cmp.a_eff_approx, mirror_peak_acceleration(epsilon, mode),
                           K / cmp.y_approx, K / cmp.y_exact)


@dataclass(frozen=True)
class ThresholdTime:
    """When the effective acceleration first reaches the peak mirror acceleration.

    ``t_exact`` inverts ``sinh^2``; ``t_asymptotic`` inverts ``exp(2 nu0 t)/4``;
    ``t_log_form`` is ``ln(N_threshold)/(2 nu0)`` (negative whenever the
    threshold is below one photon); ``t_quarter`` is the rough ``1/(4 nu0)``.
    """

    nu0: float
    N_threshold: float
    t_exact: float
    t_asymptotic: float
    t_log_form: float
    t_quarter: float

    @property
    def quarter_deviation(self) -> float:
        return (self.t_quarter - self.t_exact) / self.t_exact

    @property
    def quarter_consistent(self) -> bool:
        return abs(self.quarter_deviation) <= 0.05

    @property
    def log_form_physical(self) -> bool:
        return self.t_log_form > 0


def efficiency_threshold_time(params: DriveParams, L0: float, m: int, epsilon: float,
                              V_c: float = 1.0, t_max: float | None = None) -> ThresholdTime:
    """First ``t`` with ``R(t) = 1`` for ideal growth ``N_c = sinh^2(nu0 t)/V_c``.

    Found by bracketed root-finding on ``R(t) - 1``. Raises
    :class:`NoThresholdInRange` if ``R < 1`` up to ``t_max``.
    """
    nu0 = resonant_rate(params)
    if not nu0 > 0:
        raise ValueError("growth rate must be positive")
    K = L0 / (4 * m * epsilon)

    def excess(t):
        N_c = math.sinh(nu0 * t) ** 2 / V_c
        if N_c == 0:
            return -1.0
        return K / math.log1p(1.0 / N_c) - 1.0

    limit = t_max if t_max is not None else 300 / nu0
    hi = min(1.0 / nu0, limit)
    while excess(hi) < 0:
        if hi >= limit:
            raise NoThresholdInRange(f"R(t) < 1 for all t <= {limit}")
        hi = min(2 * hi, limit)
    lo = 0.0
    t_star = optimize.brentq(excess, lo, hi, xtol=1e-15 / nu0, rtol=4 * np.finfo(float).eps)
    N_thr = V_c / math.expm1(K)
    return ThresholdTime(nu0, N_thr, t_star, math.log(4 * N_thr) / (2 * nu0),
                         math.log(N_thr) / (2 * nu0), 1 / (4 * nu0))
