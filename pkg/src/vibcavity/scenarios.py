"""Dispatch a validated run configuration to the physics modules."""
from __future__ import annotations

import logging
import math
import warnings

import numpy as np
import scipy

from . import __version__
from .casimir import (DriveParams, damped_growth, ideal_growth, ode_growth, resonance_scan,
                      resonant_rate, saturated_growth)
from .cavity import ProfileKind
from .config import RunConfig
from .engine import evolve
from .errors import ValidationError
from .table import ResultTable
from .unruh import acceleration_ratio, unruh_energy_density, unruh_photon_number

log = logging.getLogger(__name__)

COMMANDS = ("simulate", "casimir", "scan", "unruh", "compare")


def _metadata(config: RunConfig, command: str, **extra) -> dict[str, str]:
    meta = {
        "tool": f"vibcavity {__version__}",
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "command": command,
        "config_sha256": config.digest(),
    }
    meta.update({k: ("%.17g" % v if isinstance(v, float) else str(v)) for k, v in extra.items()})
    return meta


def drive_params(config: RunConfig) -> DriveParams:
    """Drive parameters, falling back to the sinusoidal profile for missing values."""
    profile = config.cavity()
    eps, Om = config.drive.epsilon_rel, config.drive.Omega
    if profile.kind is ProfileKind.SINUSOIDAL:
        eps = profile.epsilon / profile.L0 if eps is None else eps
        Om = profile.Omega if Om is None else Om
    if eps is None or Om is None:
        raise ValidationError("drive.epsilon_rel and drive.Omega are required "
                              "unless the profile is sinusoidal")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return DriveParams(eps, Om, config.mode_spec().omega_m0,
                           config.drive.gamma, config.drive.zeta)


def _simulate(config: RunConfig) -> ResultTable:
    times = config.numerics.grid()
    tr = evolve(config.cavity(), config.mode_spec(), float(times[-1]),
                config.numerics.tol, samples=times)
    data = np.column_stack([tr.t, tr.alpha.real, tr.alpha.imag, tr.beta.real, tr.beta.imag,
                            tr.photon_number, tr.invariant_drift])
    cols = ("t", "re_alpha", "im_alpha", "re_beta", "im_beta", "abs_beta_sq", "invariant_drift")
    return ResultTable(cols, data, _metadata(
        config, "simulate", accepted_steps=tr.stats.n_accepted,
        max_relative_drift=tr.stats.max_relative_drift))


def _casimir(config: RunConfig) -> ResultTable:
    params = drive_params(config)
    nu0 = resonant_rate(params)
    times = config.numerics.grid()
    models = config.casimir.models
    cols, data = ["t"], [times]
    if "ode" in models:
        cols.append("N_ode")
        data.append(ode_growth(config.mode_spec(), params, times, config.numerics.tol).N)
    if "ideal" in models:
        cols.append("N_ideal")
        data.append(ideal_growth(nu0, times))
    if "damped" in models:
        cols.append("N_damped")
        data.append(damped_growth(nu0, params.gamma, times))
    if "saturated" in models:
        cols.append("N_saturated")
        data.append(saturated_growth(params, float(times[-1]), samples=times).N)
    return ResultTable(cols, np.column_stack(data), _metadata(
        config, "casimir", nu0=nu0, gamma=params.gamma, zeta=params.zeta))


def _scan(config: RunConfig) -> ResultTable:
    if config.scan.Omega_grid is None:
        raise ValidationError("scan.Omega_grid is required for the scan command")
    params = drive_params(config)
    grid = config.scan.Omega_grid.array()
    result = resonance_scan(config.mode_spec(), params.epsilon_rel, grid,
                            config.numerics.end(), config.numerics.tol, config.scan.workers)
    data = np.column_stack([grid, [result[float(x)] for x in grid]])
    return ResultTable(("Omega", "N_final"), data, _metadata(
        config, "scan", epsilon_rel=params.epsilon_rel, t_end=config.numerics.end()))


def _unruh(config: RunConfig) -> ResultTable:
    spec = config.unruh
    if spec.omega_grid is None or spec.a is None:
        raise ValidationError("unruh.omega_grid and unruh.a are required for the unruh command")
    omega = spec.omega_grid.array()
    if np.any(omega <= 0):
        raise ValidationError("unruh.omega_grid must be positive")
    units = config.unit_system()
    W, W_T = unruh_energy_density(omega, spec.a, units)
    N = unruh_photon_number(omega, spec.a, units)
    data = np.column_stack([omega, W_T, W, np.broadcast_to(N, omega.shape)])
    return ResultTable(("omega", "W_T", "W", "N"), data, _metadata(config, "unruh", a=spec.a))


def _compare(config: RunConfig) -> ResultTable:
    params = drive_params(config)
    nu0 = resonant_rate(params)
    mode = config.mode_spec()
    L0, m, c = mode.L0, mode.m, mode.c
    epsilon = params.epsilon_rel * L0
    if epsilon <= 0:
        raise ValidationError("compare needs a non-zero drive amplitude")
    times = config.numerics.grid()
    if config.compare.source == "ode":
        N_m = ode_growth(mode, params, times, config.numerics.tol).N
    else:
        N_m = ideal_growth(nu0, times)
    V_c = config.unruh.V_c
    a0 = 4 * epsilon * mode.omega_m0 ** 2
    rows = []
    for t, n in zip(times, N_m):
        if n > 0:
            r = acceleration_ratio(float(n), epsilon, L0, m, V_c, c)
            rows.append((t, n, r.N_c, r.y_approx, r.y_exact, r.a_eff_approx, r.a_eff_exact,
                         r.a0, r.R, r.R_exact))
        else:
            # N_c -> 0+: y -> inf, a_eff -> 0
            rows.append((t, n, 0.0, math.inf, math.inf, 0.0, 0.0, a0, 0.0, 0.0))
    cols = ("t", "N_m", "N_c", "y_approx", "y_exact", "a_eff_approx", "a_eff_exact",
            "a0", "R", "R_exact")
    return ResultTable(cols, np.array(rows, dtype=float), _metadata(
        config, "compare", nu0=nu0, V_c=V_c, source=config.compare.source))


_DISPATCH = {"simulate": _simulate, "casimir": _casimir, "scan": _scan,
             "unruh": _unruh, "compare": _compare}


def run_scenario(config: RunConfig, command: str) -> ResultTable:
    if command not in _DISPATCH:
        raise ValueError(f"unknown command {command!r}; expected one of {COMMANDS}")
    log.info("running %s (config %s)", command, config.digest()[:12])
    return _DISPATCH[command](config)
