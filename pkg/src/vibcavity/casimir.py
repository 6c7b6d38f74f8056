"""Dynamical Casimir instability: resonance structure and photon growth models.

A wall oscillating as ``L0 + eps sin(Omega t)`` pumps mode ``m`` efficiently
when ``Omega = 2 omega_m0``; the photon number then grows as
``sinh^2(nu0 t)``. This module holds the closed-form rates, the damped and
saturated balance equations, and an engine-driven resonance scan.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from .bessel import bessel_j
from .cavity import CavityProfile, ModeSpec
from .engine import DEFAULT_TOL, evolve
from .errors import DomainError, ToleranceNotMet


@dataclass(frozen=True)
class DriveParams:
    epsilon_rel: float
    Omega: float
    omega_m0: float
    gamma: float = 0.0
    zeta: float = 0.0

    def __post_init__(self):
        if self.epsilon_rel < 0:
            raise DomainError("epsilon_rel must be non-negative")
        if self.epsilon_rel > 0.1:
            warnings.warn(f"epsilon_rel={self.epsilon_rel} is outside the small-amplitude regime",
                          stacklevel=3)
        if self.Omega <= 0 or self.omega_m0 <= 0:
            raise DomainError("Omega and omega_m0 must be positive")
        if self.gamma < 0 or self.zeta < 0:
            raise DomainError("gamma and zeta must be non-negative")

    @classmethod
    def resonant(cls, epsilon_rel: float, omega_m0: float, **kw) -> DriveParams:
        return cls(epsilon_rel, 2 * omega_m0, omega_m0, **kw)

    @property
    def quality_factor(self) -> float:
        return math.inf if self.gamma == 0 else self.omega_m0 / self.gamma


class GrowthModel(str, Enum):
    ODE_EXACT = "ode_exact"
    IDEAL = "ideal"
    DAMPED = "damped"
    SATURATED = "saturated"


@dataclass(frozen=True)
class GrowthTrace:
    model: GrowthModel
    t: np.ndarray
    N: np.ndarray
    nu0: float
    gamma: float = 0.0
    zeta: float = 0.0
    saturation_level: float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.N.tolist()))


@dataclass(frozen=True)
class Resonance:
    Omega: float
    branches: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class GrowthEstimate:
    """Exact ideal growth together with its limiting forms."""

    exact: float
    short_time: float
    long_time: float
    short_time_valid: bool
    long_time_valid: bool


# -- closed forms ----------------------------------------------------------------


def modulation_index(params: DriveParams) -> float:
    return 2 * params.epsilon_rel * params.omega_m0 / params.Omega


def resonant_drive_frequencies(mode: ModeSpec, n_max: int) -> list[Resonance]:
    """Positive drive frequencies solving ``(n +/- 1) Omega = 2 omega_m0`` for ``|n| <= n_max``.

    Branches that coincide in frequency are merged; sorted by decreasing Omega,
    so the dominant ``n = 0`` resonance comes first.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    found: dict[float, list[tuple[int, str]]] = {}
    for n in range(-n_max, n_max + 1):
        for branch, k in (("+", n + 1), ("-", n - 1)):
            if k <= 0:
                continue
            Om = 2 * mode.omega_m0 / k
            found.setdefault(Om, []).append((n, branch))
    return [Resonance(Om, tuple(tags)) for Om, tags in sorted(found.items(), reverse=True)]


def is_resonant(n: int, params: DriveParams, rtol: float = 1e-9) -> bool:
    target = 2 * params.omega_m0
    return any(abs(k * params.Omega - target) <= rtol * target for k in (n + 1, n - 1))


def coupling_constant(n: int, params: DriveParams) -> float:
    """Secular coupling ``rho Omega^2 / (8 omega_m0) J_n(rho)`` of harmonic ``n``.

    Meaningful only when ``is_resonant(n, params)``; otherwise a formal value.
    """
    rho = modulation_index(params)
    return rho * params.Omega ** 2 / (8 * params.omega_m0) * bessel_j(n, rho)


def resonant_rate(params: DriveParams) -> float:
    """Growth rate ``nu0`` at ``Omega = 2 omega_m0``."""
    e = params.epsilon_rel
    return e * params.omega_m0 / 2 * bessel_j(0, e)


def ideal_growth(nu0: float, t):
    """``sinh^2(nu0 t)``."""
    return np.sinh(nu0 * np.asarray(t, dtype=float)) ** 2


def ideal_growth_estimate(nu0: float, t: float, small: float = 0.1,
                          large: float = 3.0) -> GrowthEstimate:
    """``sinh^2(nu0 t)`` with its Taylor form ``(nu0 t)^2`` and asymptote ``exp(2 nu0 t)/4``.

    The short-time limit is quadratic, not linear, in ``nu0 t``.
    """
    x = nu0 * t
    return GrowthEstimate(math.sinh(x) ** 2, x * x, 0.25 * math.exp(2 * x),
                          x < small, x > large)


def damped_growth(nu0: float, gamma: float, t):
    """``sinh^2(nu0 t) exp(-gamma t)``; solves the coth-form rate equation exactly."""
    if gamma < 0:
        raise DomainError("gamma must be non-negative")
    t = np.asarray(t, dtype=float)
    return np.sinh(nu0 * t) ** 2 * np.exp(-gamma * t)


# -- balance equations -------------------------------------------------------------


def _solve(fun, t_span, y0, t_eval, tol, method, jac=None, atol=1e-300):
    kw = {"jac": jac} if jac is not None else {}
    sol = solve_ivp(fun, t_span, [y0], method=method, t_eval=t_eval,
                    rtol=tol, atol=atol, **kw)
    if not sol.success:
        raise ToleranceNotMet(sol.message)
    return sol.y[0]


def integrate_damped(nu0: float, gamma: float, t_eval, form: str = "rate",
                     t0: float | None = None, tol: float = 1e-12) -> GrowthTrace:
    """Numerically integrate a lossy growth equation.

    ``form="rate"``: ``N' = (2 nu0 coth(nu0 t) - gamma) N`` from ``t0`` (default
    ``1e-6/nu0``) with ``N(t0) = sinh^2(nu0 t0) exp(-gamma t0)``.
    ``form="balance"``: ``N' = 2 nu0 sinh cosh - gamma N`` from ``N(0) = 0``.
    The closed form solves the rate form; the balance form differs from it
    at first order in ``gamma t``.
    """
    t_eval = np.asarray(t_eval, dtype=float)
    if form == "rate":
        t0 = 1e-6 / nu0 if t0 is None else t0
        if t_eval[0] < t0:
            raise ValueError("rate form needs t_eval >= t0")
        N0 = float(damped_growth(nu0, gamma, t0))
        N = _solve(lambda t, y: (2 * nu0 / math.tanh(nu0 * t) - gamma) * y,
                   (t0, t_eval[-1]), N0, t_eval, tol, "DOP853")
    elif form == "balance":
        N = _solve(lambda t, y: nu0 * math.sinh(2 * nu0 * t) - gamma * y,
                   (0.0, t_eval[-1]), 0.0, t_eval, tol, "DOP853")
    else:
        raise ValueError(f"unknown form {form!r}")
    return GrowthTrace(GrowthModel.DAMPED, t_eval, N, nu0, gamma, meta={"form": form})


def _plateau(N: np.ndarray, rel: float = 1e-3) -> float | None:
    tail = N[int(0.9 * len(N)):]
    if len(tail) < 2 or tail[-1] <= 0:
        return None
    if (tail.max() - tail.min()) <= rel * tail[-1]:
        return float(tail[-1])
    return None


def saturated_growth(params: DriveParams, t_end: float, tol: float = 1e-10,
                     samples=201) -> GrowthTrace:
    """Balance equation with nonlinear detuning, started from ``N(0) = 0``.

    ``N' = 2 nu0 sinh(nu0 t) cosh(nu0 t) (1 - zeta N^2) - gamma N``. The drive
    switches off at ``N = zeta**-0.5``, which the solution approaches from
    below. ``saturation_level`` is set when the last tenth of the trace is flat
    to 1e-3.
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    nu0, g, z = resonant_rate(params), params.gamma, params.zeta
    t_eval = np.linspace(0.0, t_end, samples) if np.isscalar(samples) else np.asarray(samples)

    def fun(t, y):
        return nu0 * math.sinh(2 * nu0 * t) * (1 - z * y * y) - g * y

    def jac(t, y):
        return [[-2 * z * nu0 * math.sinh(2 * nu0 * t) * y[0] - g]]

    N = _solve(fun, (0.0, float(t_eval[-1])), 0.0, t_eval, tol, "Radau", jac, atol=1e-3 * tol)
    return GrowthTrace(GrowthModel.SATURATED, t_eval, N, nu0, g, z, _plateau(N))


# -- engine-backed models ------------------------------------------------------------


def drive_profile(mode: ModeSpec, epsilon_rel: float, Omega: float) -> CavityProfile:
    return CavityProfile.sinusoidal(mode.L0, epsilon_rel * mode.L0, Omega)


def ode_growth(mode: ModeSpec, params: DriveParams, t_eval, tol: float = DEFAULT_TOL) -> GrowthTrace:
    """Photon number from the Bogoliubov engine for a sinusoidal wall."""
    t_eval = np.asarray(t_eval, dtype=float)
    tr = evolve(drive_profile(mode, params.epsilon_rel, params.Omega), mode,
                float(t_eval[-1]), tol, samples=t_eval)
    return GrowthTrace(GrowthModel.ODE_EXACT, t_eval, tr.photon_number, resonant_rate(params),
                       meta={"max_relative_drift": tr.stats.max_relative_drift})


def resonance_scan(mode: ModeSpec, epsilon_rel: float, Omega_grid, t_end: float,
                   tol: float = DEFAULT_TOL, workers: int = 1) -> dict[float, float]:
    """Final photon number for each drive frequency, in grid order.

    Grid points are independent and may run on ``workers`` threads; results
    do not depend on the worker count.
    """
    grid = [float(x) for x in Omega_grid]
    if any(x <= 0 for x in grid):
        raise ValueError("drive frequencies must be positive")

    def one(Om):
        tr = evolve(drive_profile(mode, epsilon_rel, Om), mode, t_end, tol, samples=2)
        return float(tr.photon_number[-1])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, grid))
    else:
        values = [one(Om) for Om in grid]
    return dict(zip(grid, values))
