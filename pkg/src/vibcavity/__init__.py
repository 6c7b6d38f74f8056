"""Photon creation from vacuum in a cavity of time-varying optical length."""

__version__ = "0.1.0"

from .cavity import (CavityProfile, ModeSpec, ProfileKind, RefractiveTrace,  # noqa: E402
                     dielectric_to_length, length_at, mode_frequency)
from .engine import (BogoliubovState, EvolutionTrace, coupling, evolve,  # noqa: E402
                     phase_integral, photon_number, squeezing_integral)
from .casimir import (DriveParams, GrowthTrace, coupling_constant, damped_growth,  # noqa: E402
                      ideal_growth, modulation_index, resonance_scan,
                      resonant_drive_frequencies, resonant_rate, saturated_growth)
from .bessel import bessel_j  # noqa: E402
from .unruh import (UnruhComparison, acceleration_ratio, effective_acceleration,  # noqa: E402
                    efficiency_threshold_time, mirror_peak_acceleration,
                    unruh_energy_density, unruh_photon_number, unruh_temperature)
from .config import RunConfig, parse_config  # noqa: E402
from .scenarios import run_scenario  # noqa: E402
from .table import ResultTable, read_table, write_table  # noqa: E402
