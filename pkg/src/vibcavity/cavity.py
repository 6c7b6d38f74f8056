"""Cavity geometry: time-dependent optical length and instantaneous mode frequencies.

A cavity is described by its optical length ``L(t)``. Four shapes are
supported (constant, sinusoidal, a sudden step and a piecewise-linear ramp
through knots). A medium with a time-varying refractive index is mapped onto
an equivalent moving-mirror profile by :func:`dielectric_to_length`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, NonPositiveLength, NotDifferentiable


class ProfileKind(str, Enum):
    CONSTANT = "constant"
    SINUSOIDAL = "sinusoidal"
    STEP = "step"
    PIECEWISE_LINEAR = "piecewise_linear"


# integer codes understood by the compiled integrator
_KIND_CODE = {
    ProfileKind.CONSTANT: 0,
    ProfileKind.SINUSOIDAL: 1,
    ProfileKind.STEP: 2,
    ProfileKind.PIECEWISE_LINEAR: 3,
}


@dataclass(frozen=True)
class CavityProfile:
    """Optical length ``L(t)`` of a one-dimensional cavity.

    Use the ``constant``, ``sinusoidal``, ``step`` and ``piecewise`` class
    methods rather than the raw constructor. The sinusoidal shape is
    ``L0 + epsilon * sin(Omega * t + phase)``; a step holds ``L0`` for
    ``t < step_time`` and ``step_L2`` afterwards.
    """

    kind: ProfileKind
    L0: float
    epsilon: float = 0.0
    Omega: float = 0.0
    phase: float = 0.0
    step_time: float = 0.0
    step_L2: float = 0.0
    knots: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "kind", ProfileKind(self.kind))
        for name in ("L0", "epsilon", "Omega", "phase", "step_time", "step_L2"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.kind is ProfileKind.PIECEWISE_LINEAR:
            knots = tuple((float(t), float(L)) for t, L in self.knots)
            object.__setattr__(self, "knots", knots)
            if len(knots) < 2:
                raise DomainError("piecewise profile needs at least two knots")
            times = np.array([k[0] for k in knots])
            if np.any(np.diff(times) <= 0):
                raise DomainError("knot times must be strictly increasing")
            if min(k[1] for k in knots) <= 0:
                raise NonPositiveLength("knot lengths must be positive")
            object.__setattr__(self, "L0", knots[0][1])
            return
        if self.L0 <= 0:
            raise NonPositiveLength(f"L0 must be positive, got {self.L0}")
        if self.kind is ProfileKind.SINUSOIDAL:
            if not 0 <= self.epsilon < self.L0:
                raise NonPositiveLength(
                    f"sinusoidal profile needs 0 <= epsilon < L0, got epsilon={self.epsilon}")
            if self.Omega < 0:
                raise DomainError("Omega must be non-negative")
        if self.kind is ProfileKind.STEP and self.step_L2 <= 0:
            raise NonPositiveLength(f"step_L2 must be positive, got {self.step_L2}")

    @classmethod
    def constant(cls, L0: float) -> CavityProfile:
        return cls(ProfileKind.CONSTANT, float(L0))

    @classmethod
    def sinusoidal(cls, L0: float, epsilon: float, Omega: float, phase: float = 0.0) -> CavityProfile:
        return cls(ProfileKind.SINUSOIDAL, float(L0), epsilon=float(epsilon),
                   Omega=float(Omega), phase=float(phase))

    @classmethod
    def step(cls, L0: float, step_time: float, step_L2: float) -> CavityProfile:
        return cls(ProfileKind.STEP, float(L0), step_time=float(step_time), step_L2=float(step_L2))

    @classmethod
    def piecewise(cls, knots) -> CavityProfile:
        return cls(ProfileKind.PIECEWISE_LINEAR, 1.0, knots=tuple(knots))

    # -- evaluation ---------------------------------------------------------

    @property
    def domain(self) -> tuple[float, float]:
        if self.kind is ProfileKind.PIECEWISE_LINEAR:
            return self.knots[0][0], self.knots[-1][0]
        return -math.inf, math.inf

    def _check_domain(self, t):
        lo, hi = self.domain
        if np.any(np.asarray(t) < lo) or np.any(np.asarray(t) > hi):
            raise DomainError(f"t outside profile domain [{lo}, {hi}]")

    def _knot_arrays(self):
        kt = np.array([k[0] for k in self.knots])
        kl = np.array([k[1] for k in self.knots])
        return kt, kl

    def length(self, t):
        """``L(t)``; accepts scalars or arrays."""
        self._check_domain(t)
        t = np.asarray(t, dtype=float)
        kind = self.kind
        if kind is ProfileKind.CONSTANT:
            out = np.full_like(t, self.L0)
        elif kind is ProfileKind.SINUSOIDAL:
            out = self.L0 + self.epsilon * np.sin(self.Omega * t + self.phase)
        elif kind is ProfileKind.STEP:
            out = np.where(t < self.step_time, self.L0, self.step_L2)
        else:
            kt, kl = self._knot_arrays()
            out = np.interp(t, kt, kl)
        if np.any(out <= 0):
            raise NonPositiveLength("evaluated length is not positive")
        return out[()] if out.ndim == 0 else out

    def rate(self, t):
        """``dL/dt``. Piecewise knots take the right-hand slope (left at the last knot)."""
        self._check_domain(t)
        t = np.asarray(t, dtype=float)
        kind = self.kind
        if kind is ProfileKind.CONSTANT:
            out = np.zeros_like(t)
        elif kind is ProfileKind.SINUSOIDAL:
            out = self.epsilon * self.Omega * np.cos(self.Omega * t + self.phase)
        elif kind is ProfileKind.STEP:
            if np.any(t == self.step_time):
                raise NotDifferentiable(f"length jumps at t={self.step_time}")
            out = np.zeros_like(t)
        else:
            kt, kl = self._knot_arrays()
            slopes = np.diff(kl) / np.diff(kt)
            seg = np.clip(np.searchsorted(kt, t, side="right") - 1, 0, len(slopes) - 1)
            out = slopes[seg]
        return out[()] if out.ndim == 0 else out

    # -- helpers for the integrator ------------------------------------------

    def min_length(self, t0: float = 0.0, t1: float = math.inf) -> float:
        """Lower bound of ``L`` on ``[t0, t1]`` (used to cap integrator steps)."""
        kind = self.kind
        if kind is ProfileKind.CONSTANT:
            return self.L0
        if kind is ProfileKind.SINUSOIDAL:
            return self.L0 - self.epsilon
        if kind is ProfileKind.STEP:
            return min(self.L0, self.step_L2)
        return min(k[1] for k in self.knots)

    def breakpoints(self, t0: float, t1: float) -> list[float]:
        """Times in the open interval ``(t0, t1)`` where ``dL/dt`` is discontinuous."""
        if self.kind is ProfileKind.STEP:
            pts = [self.step_time]
        elif self.kind is ProfileKind.PIECEWISE_LINEAR:
            pts = [k[0] for k in self.knots]
        else:
            pts = []
        return [p for p in pts if t0 < p < t1]

    def jumps(self, t0: float, t1: float) -> list[tuple[float, float, float]]:
        """Length discontinuities ``(time, L_before, L_after)`` with ``t0 <= time <= t1``."""
        if self.kind is ProfileKind.STEP and t0 <= self.step_time <= t1:
            return [(self.step_time, self.L0, self.step_L2)]
        return []

    def reversed(self, T: float) -> CavityProfile:
        """Profile ``s -> L(T - s)``."""
        kind = self.kind
        if kind is ProfileKind.CONSTANT:
            return self
        if kind is ProfileKind.SINUSOIDAL:
            # sin(Omega*(T - s) + p) = sin(Omega*s + pi - Omega*T - p)
            return CavityProfile.sinusoidal(self.L0, self.epsilon, self.Omega,
                                            math.pi - self.Omega * T - self.phase)
        if kind is ProfileKind.STEP:
            return CavityProfile.step(self.step_L2, T - self.step_time, self.L0)
        return CavityProfile.piecewise([(T - t, L) for t, L in reversed(self.knots)])

    def kernel_args(self):
        kt, kl = self._knot_arrays() if self.knots else (np.zeros(1), np.ones(1))
        params = np.array([self.L0, self.epsilon, self.Omega, self.phase,
                           self.step_time, self.step_L2])
        return _KIND_CODE[self.kind], params, kt, kl


@dataclass(frozen=True)
class ModeSpec:
    """Cavity mode ``m`` of a cavity with unperturbed length ``L0``."""

    m: int
    L0: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"mode number must be a positive integer, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        if self.L0 <= 0:
            raise NonPositiveLength("L0 must be positive")
        if self.c <= 0:
            raise DomainError("c must be positive")

    @classmethod
    def from_frequency(cls, m: int, omega_m0: float, c: float = 1.0) -> ModeSpec:
        return cls(m, 2 * math.pi * m * c / omega_m0, c)

    @property
    def k_m0(self) -> float:
        return 2 * math.pi * self.m / self.L0

    @property
    def omega_m0(self) -> float:
        return self.k_m0 * self.c


@dataclass(frozen=True)
class RefractiveTrace:
    """Refractive index ``n0 + dn(t)`` of the medium filling a fixed cavity.

    ``dn`` is either identically zero, ``amplitude * sin(Omega t + phase)``, or
    linear interpolation through ``knots`` of ``(t, dn)`` pairs.
    """

    n0: float = 1.0
    amplitude: float = 0.0
    Omega: float = 0.0
    phase: float = 0.0
    knots: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.knots is not None:
            object.__setattr__(self, "knots", tuple((float(t), float(d)) for t, d in self.knots))
        if self.n0 <= 0:
            raise DomainError("n0 must be positive")
        if self.knots is not None:
            if min(self.n0 + d for _, d in self.knots) <= 0:
                raise DomainError("n0 + dn(t) must stay positive")
        elif self.n0 - abs(self.amplitude) <= 0:
            raise DomainError("n0 + dn(t) must stay positive")

    def delta_n(self, t):
        t = np.asarray(t, dtype=float)
        if self.knots is not None:
            kt = np.array([k[0] for k in self.knots])
            kd = np.array([k[1] for k in self.knots])
            out = np.interp(t, kt, kd)
        else:
            out = self.amplitude * np.sin(self.Omega * t + self.phase)
        return out[()] if out.ndim == 0 else out

    def index(self, t):
        return self.n0 + self.delta_n(t)


def length_at(profile: CavityProfile, t):
    return profile.length(t)


def length_rate(profile: CavityProfile, t):
    return profile.rate(t)


def dielectric_to_length(trace: RefractiveTrace, L0: float,
                         convention: str = "literal") -> CavityProfile:
    """Moving-mirror profile with the same optical length as a dielectric-filled cavity.

    ``convention="literal"`` gives ``L = L0 * (1 + dn)`` regardless of ``n0``;
    ``"relative"`` gives ``L = L0 * n(t) / n0``. Both coincide for ``n0 == 1``.
    """
    if convention == "literal":
        scale = 1.0
        if trace.n0 != 1.0:
            warnings.warn("n0 != 1 with the literal convention: dn is not rescaled by n0",
                          stacklevel=2)
    elif convention == "relative":
        scale = 1.0 / trace.n0
    else:
        raise ValueError(f"unknown convention {convention!r}")
    if trace.knots is not None:
        return CavityProfile.piecewise([(t, L0 * (1 + scale * d)) for t, d in trace.knots])
    if trace.amplitude == 0.0:
        return CavityProfile.constant(L0)
    amp, phase = L0 * scale * trace.amplitude, trace.phase
    if amp < 0:
        amp, phase = -amp, phase + math.pi
    return CavityProfile.sinusoidal(L0, amp, trace.Omega, phase)


def mode_frequency(profile: CavityProfile, mode: ModeSpec, t):
    """Instantaneous mode frequency ``2 pi m c / L(t)``."""
    return 2 * math.pi * mode.m * mode.c / profile.length(t)


def mode_frequency_first_order(profile: CavityProfile, mode: ModeSpec, t):
    """Small-amplitude expansion ``omega_m0 [1 - (eps/L0) sin(Omega t + phase)]``."""
    if profile.kind is not ProfileKind.SINUSOIDAL:
        raise DomainError("first-order expansion is defined for sinusoidal profiles only")
    omega0 = 2 * math.pi * mode.m * mode.c / profile.L0
    t = np.asarray(t, dtype=float)
    out = omega0 * (1 - profile.epsilon / profile.L0 * np.sin(profile.Omega * t + profile.phase))
    return out[()] if out.ndim == 0 else out
