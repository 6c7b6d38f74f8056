"""Unit systems.

Physics routines work in any consistent system; only the three constants
below enter the formulas. ``INTERNAL`` sets all of them to one.
"""
from __future__ import annotations

from dataclasses import dataclass

from scipy import constants


@dataclass(frozen=True)
class Units:
    c: float = 1.0
    hbar: float = 1.0
    k_B: float = 1.0
    name: str = "internal"


INTERNAL = Units()
SI = Units(c=constants.c, hbar=constants.hbar, k_B=constants.k, name="si")


def nonlinear_coefficient(n1: float, omega_m0: float, units: Units = SI) -> float:
    """Saturation coefficient from a Kerr index ``n1``.

    Uses the photon-number intensity ``I = hbar * omega * c * N`` so that the
    index shift is ``n1 * I``; the returned value multiplies ``N**2``.
    """
    return (units.hbar * omega_m0 * units.c * n1) ** 2
