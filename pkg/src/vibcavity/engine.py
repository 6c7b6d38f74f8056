"""Time-refraction engine: Bogoliubov coefficients of a single cavity mode.

The slowly varying mode amplitudes obey ``A' = nu(t) A^+`` with the coupling
``nu = (L'/2L) exp(2 i phi)``. Writing ``A(t) = alpha A(0) - beta A^+(0)``
gives the linear system

    alpha' = -nu conj(beta),    beta' = -nu conj(alpha),

which conserves ``|alpha|^2 - |beta|^2``. It is integrated together with the
phase ``phi' = omega_m(t)``. Length discontinuities are crossed with the exact
hyperbolic map for an instantaneous change.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

from . import _dop853
from .cavity import CavityProfile, ModeSpec, ProfileKind
from .errors import (DomainError, InvariantViolation, NotDifferentiable,
                     QuadratureFailure, ToleranceNotMet)

DEFAULT_TOL = 1e-10
INVARIANT_FACTOR = 100.0
MAX_STEPS = 50_000_000


@dataclass(frozen=True)
class BogoliubovState:
    alpha: complex
    beta: complex
    phi: float
    t: float

    @classmethod
    def vacuum(cls, t: float = 0.0) -> BogoliubovState:
        return cls(1.0 + 0j, 0j, 0.0, t)

    @property
    def invariant(self) -> float:
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2

    @property
    def photon_number(self) -> float:
        return abs(self.beta) ** 2


@dataclass(frozen=True)
class IntegratorStats:
    n_accepted: int
    n_rejected: int
    n_jumps: int
    max_step: float
    max_drift: float
    max_relative_drift: float


@dataclass(frozen=True)
class EvolutionTrace:
    """Sampled evolution; arrays share one time axis."""

    t: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    phi: np.ndarray
    stats: IntegratorStats

    @cached_property
    def samples(self) -> list[BogoliubovState]:
        return [BogoliubovState(complex(a), complex(b), float(p), float(t))
                for t, a, b, p in zip(self.t, self.alpha, self.beta, self.phi)]

    @property
    def final(self) -> BogoliubovState:
        return BogoliubovState(complex(self.alpha[-1]), complex(self.beta[-1]),
                               float(self.phi[-1]), float(self.t[-1]))

    @property
    def photon_number(self) -> np.ndarray:
        return np.abs(self.beta) ** 2

    @property
    def invariant_drift(self) -> np.ndarray:
        inv0 = abs(self.alpha[0]) ** 2 - abs(self.beta[0]) ** 2
        return np.abs(np.abs(self.alpha) ** 2 - np.abs(self.beta) ** 2 - inv0)


def photon_number(state: BogoliubovState) -> float:
    """Vacuum expectation of the mode number operator, ``|beta|^2``."""
    return abs(state.beta) ** 2


def max_step_for(profile: CavityProfile, mode: ModeSpec, t_end: float) -> float:
    """Step cap resolving both ``exp(2 i phi)`` and the drive."""
    omega_max = 2 * math.pi * mode.m * mode.c / profile.min_length(0.0, t_end)
    fastest = max(2 * omega_max, profile.Omega)
    return 2 * math.pi / (20 * fastest)


def jump_map(alpha: complex, beta: complex, L_before: float, L_after: float,
             phi: float) -> tuple[complex, complex]:
    """Exact update of ``(alpha, beta)`` across an instantaneous length change."""
    r = 0.5 * math.log(L_after / L_before)
    ch, sh = math.cosh(r), math.sinh(r)
    rot = cmath.exp(2j * phi)
    return (alpha * ch - rot * beta.conjugate() * sh,
            beta * ch - rot * alpha.conjugate() * sh)


def _check_span(profile: CavityProfile, t_end: float):
    lo, hi = profile.domain
    if lo > 0 or hi < t_end:
        raise DomainError(f"profile domain [{lo}, {hi}] does not cover [0, {t_end}]")


def _sample_times(t_end: float, samples) -> np.ndarray:
    if samples is None:
        samples = 101
    if np.isscalar(samples):
        n = int(samples)
        if n < 2:
            raise ValueError("need at least two samples")
        return np.linspace(0.0, t_end, n)
    ts = np.asarray(samples, dtype=float)
    if ts.ndim != 1 or ts.size == 0:
        raise ValueError("sample times must be a non-empty 1-D sequence")
    if np.any(np.diff(ts) <= 0) or ts[0] < 0 or ts[-1] > t_end:
        raise ValueError("sample times must increase strictly within [0, t_end]")
    return ts


def _run(system: int, profile: CavityProfile, mode: ModeSpec, t_end: float,
         times: np.ndarray, y0: np.ndarray, tol: float, on_jump):
    """Drive the compiled integrator over smooth segments, applying jumps at boundaries."""
    kind, params, kt, kl = profile.kernel_args()
    two_pi_mc = 2 * math.pi * mode.m * mode.c
    h_max = max_step_for(profile, mode, t_end)
    bounds = [0.0, *profile.breakpoints(0.0, t_end), t_end]
    jumps = {tj: (L1, L2) for tj, L1, L2 in profile.jumps(0.0, t_end)}
    inv_ref = y0[0] ** 2 + y0[1] ** 2 - y0[2] ** 2 - y0[3] ** 2
    out = np.empty((times.size, 5))
    y = y0.copy()
    n_acc = n_rej = n_jumps = 0
    max_abs = max_rel = 0.0

    def at_boundary(b, y):
        nonlocal n_jumps
        if b in jumps:
            y = on_jump(y, *jumps[b])
            n_jumps += 1
        hit = times == b
        out[hit] = y
        return y

    for t0, t1 in zip(bounds[:-1], bounds[1:]):
        if t0 == bounds[0]:
            y = at_boundary(t0, y)
        inside = (times > t0) & (times < t1)
        res = _dop853.integrate(system, kind, params, kt, kl, 0.5 * (t0 + t1), two_pi_mc,
                                t0, t1, y, times[inside], tol, tol, h_max, MAX_STEPS, inv_ref)
        y_out, y, acc, rej, d_abs, d_rel, status = res
        if status != _dop853.OK:
            reason = {_dop853.STEP_TOO_SMALL: "step size underflow",
                      _dop853.TOO_MANY_STEPS: "step budget exhausted",
                      _dop853.NON_FINITE: "non-finite error estimate"}[status]
            raise ToleranceNotMet(f"integration stopped in [{t0}, {t1}]: {reason}")
        out[inside] = y_out
        n_acc += acc
        n_rej += rej
        max_abs, max_rel = max(max_abs, d_abs), max(max_rel, d_rel)
        y = at_boundary(t1, y)
    stats = IntegratorStats(n_acc, n_rej, n_jumps, h_max, max_abs, max_rel)
    return out, stats


def _pack(alpha: complex, beta: complex, phi: float) -> np.ndarray:
    return np.array([alpha.real, alpha.imag, beta.real, beta.imag, phi])


def evolve(profile: CavityProfile, mode: ModeSpec, t_end: float, tol: float = DEFAULT_TOL,
           samples=None, initial: BogoliubovState | None = None) -> EvolutionTrace:
    """Integrate the Bogoliubov coefficients from ``t = 0`` to ``t_end``.

    ``samples`` is a count (uniform grid including both ends) or an explicit
    increasing array of times. ``initial`` defaults to the vacuum. The state
    reported at a jump time is the post-jump state.

    Raises :class:`InvariantViolation` when ``|alpha|^2 - |beta|^2`` drifts by
    more than ``100 * tol`` relative to ``|alpha|^2 + |beta|^2``.
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not tol > 0:
        raise ValueError("tol must be positive")
    _check_span(profile, t_end)
    times = _sample_times(t_end, samples)
    state = initial or BogoliubovState.vacuum()
    y0 = _pack(complex(state.alpha), complex(state.beta), float(state.phi))

    def on_jump(y, L1, L2):
        a, b = jump_map(complex(y[0], y[1]), complex(y[2], y[3]), L1, L2, y[4])
        return _pack(a, b, y[4])

    out, stats = _run(_dop853.BOGOLIUBOV, profile, mode, t_end, times, y0, tol, on_jump)
    if stats.max_relative_drift > INVARIANT_FACTOR * tol:
        raise InvariantViolation(
            f"|alpha|^2 - |beta|^2 drifted by {stats.max_relative_drift:.3e} (relative)")
    return EvolutionTrace(times, out[:, 0] + 1j * out[:, 1], out[:, 2] + 1j * out[:, 3],
                          out[:, 4], stats)


def time_reversed_state(state: BogoliubovState) -> BogoliubovState:
    """Initial state that, evolved under ``profile.reversed(state.t)``, undoes the evolution.

    If ``(alpha, beta)`` is reached at time ``T`` with phase ``phi``, the
    reversed run started from ``(conj(alpha), exp(2 i phi) conj(beta))`` ends at
    ``(conj(alpha_0), exp(2 i phi) conj(beta_0))``.
    """
    rot = cmath.exp(2j * state.phi)
    return BogoliubovState(state.alpha.conjugate(), rot * state.beta.conjugate(), 0.0, 0.0)


# -- phase, coupling and squeezing integral -----------------------------------


def phase_integral(profile: CavityProfile, mode: ModeSpec, t: float,
                   tol: float = 1e-12) -> float:
    """Accumulated phase ``int_0^t omega_m(t') dt'`` by adaptive quadrature."""
    if t < 0:
        raise ValueError("t must be non-negative")
    w = 2 * math.pi * mode.m * mode.c
    if t == 0:
        return 0.0
    if profile.kind is ProfileKind.CONSTANT:
        return w / profile.L0 * t
    _check_span(profile, t)
    edges = [0.0, *profile.breakpoints(0.0, t), t]
    if profile.kind is ProfileKind.SINUSOIDAL and profile.Omega > 0:
        # chunks of a few drive periods keep quad's subdivision budget small
        span = 8 * math.pi / profile.Omega
        edges = sorted(set(edges) | set(np.arange(span, t, span).tolist()))
    parts = []
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        if profile.kind is ProfileKind.STEP:
            L_seg = profile.L0 if mid < profile.step_time else profile.step_L2
            parts.append(w / L_seg * (b - a))
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(lambda s: w / profile.length(s), a, b,
                                          epsabs=0.0, epsrel=tol, limit=200)
            except integrate.IntegrationWarning as exc:
                raise QuadratureFailure(str(exc)) from exc
        if err > max(tol * abs(val), 1e-300) * 10:
            raise QuadratureFailure(f"phase quadrature error {err:.2e} on [{a}, {b}]")
        parts.append(val)
    return math.fsum(parts)


def coupling(profile: CavityProfile, mode: ModeSpec, t: float) -> complex:
    """``nu(t) = (L'/2L) exp(2 i phi(t))``."""
    if profile.kind is ProfileKind.STEP and t == profile.step_time:
        raise NotDifferentiable(f"length jumps at t={t}")
    L = float(profile.length(t))
    dL = float(profile.rate(t))
    if dL == 0.0:
        return 0j
    return dL / (2 * L) * cmath.exp(2j * phase_integral(profile, mode, t))


def coupling_first_order(profile: CavityProfile, mode: ModeSpec, t: float) -> complex:
    """Small-amplitude closed form of the coupling for a sinusoidal wall.

    ``(eps Omega / 2 L(t)) cos(Omega t) exp(i [2 omega_m0 t + rho cos(Omega t)])``
    with ``rho = 2 eps omega_m0 / (Omega L0)``; the constant phase offset of the
    exact first-order phase is dropped, so agreement is to ``O(eps/L0)``.
    """
    if profile.kind is not ProfileKind.SINUSOIDAL or profile.phase != 0.0:
        raise DomainError("closed form needs a sinusoidal profile with zero phase")
    eps, Om, L0 = profile.epsilon, profile.Omega, profile.L0
    omega0 = 2 * math.pi * mode.m * mode.c / L0
    rho = 2 * eps * omega0 / (Om * L0)
    L = float(profile.length(t))
    return (eps * Om / (2 * L) * math.cos(Om * t)
            * cmath.exp(1j * (2 * omega0 * t + rho * math.cos(Om * t))))


def squeezing_integral(profile: CavityProfile, mode: ModeSpec, t: float,
                       tol: float = DEFAULT_TOL) -> complex:
    """Complex squeezing function ``r(t) = int_0^t nu(t') dt'``.

    Length jumps contribute ``0.5 ln(L_after/L_before) exp(2 i phi)`` with the
    phase frozen at the jump.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        jumps = profile.jumps(0.0, 0.0)
        return sum(0.5 * math.log(L2 / L1) + 0j for _, L1, L2 in jumps) + 0j
    _check_span(profile, t)

    def on_jump(y, L1, L2):
        r = 0.5 * math.log(L2 / L1) * cmath.exp(2j * y[4])
        return np.array([y[0] + r.real, y[1] + r.imag, 0.0, 0.0, y[4]])

    times = np.array([t])
    try:
        out, _ = _run(_dop853.SQUEEZING, profile, mode, t, times, np.zeros(5), tol, on_jump)
    except ToleranceNotMet as exc:
        raise QuadratureFailure(str(exc)) from exc
    return complex(out[0, 0], out[0, 1])
