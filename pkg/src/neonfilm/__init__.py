"""Digital twin of a cryogenic neon film-growth monitor.

The package simulates gas handling, two-branch vapor coexistence, film
condensation and collapse on a coplanar resonator, and the resonator
readout itself, with analysis helpers to invert observed frequency shifts
back to film thickness.
"""

from .config import ModelConfig, config_from_dict, default_config
from .engine import (Campaign, Engine, Scenario, derive_seed, load_campaign,
                     load_scenario, run_campaign, run_scenario)
from .errors import (BranchDomainError, CalibrationError, CommandError,
                     NeonFilmError, ScenarioError, ShiftRangeError)

__version__ = "0.1.0"

__all__ = [
    "ModelConfig", "config_from_dict", "default_config",
    "Campaign", "Engine", "Scenario", "derive_seed",
    "load_campaign", "load_scenario", "run_campaign", "run_scenario",
    "NeonFilmError", "BranchDomainError", "CalibrationError",
    "CommandError", "ScenarioError", "ShiftRangeError",
    "__version__",
]
