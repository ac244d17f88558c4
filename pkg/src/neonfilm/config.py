"""Model configuration.

Every physical parameter of the twin lives here, grouped by module, with the
shipped defaults in ``data/default_config.json``. Defaults are calibrated
values (see the calibrate_* helpers in thermo/film/resonator), not assertions:
tests recompute expectations from whatever config they load.

Scenario files may override any subset via a nested ``overrides`` mapping.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from importlib import resources
from typing import Any

from .errors import ScenarioError


@dataclass(frozen=True)
class DiagramConfig:
    """Two-branch coexistence curve, anchored at the triple point."""

    T_triple: float  # K
    P_triple: float  # Pa
    L_vap: float     # J/mol, liquid branch
    L_fus: float     # J/mol; sublimation branch uses L_vap + L_fus
    hysteresis: float  # K, branch validity tolerance / supercooling depth

    @property
    def L_sub(self) -> float:
        return self.L_vap + self.L_fus


@dataclass(frozen=True)
class GeometryConfig:
    V_warm: float   # m^3, room-temperature manifold volume
    V_cold: float   # m^3, cell volume
    T_warm: float   # K, manifold temperature
    A_total: float  # m^2, effective cold deposition area
    A_res: float    # m^2, resonator footprint


@dataclass(frozen=True)
class MaterialConfig:
    molar_mass: float  # kg/mol
    rho_solid: float   # kg/m^3
    rho_liquid: float  # kg/m^3
    eps_solid: float   # relative permittivity
    eps_liquid: float


@dataclass(frozen=True)
class ThermalConfig:
    C_cell: float      # J/K, lumped cell heat capacity
    gain: float        # W/K, proportional coupling to the setpoint
    max_step_K: float  # substep guard for the integrator


@dataclass(frozen=True)
class FilmConfig:
    local_fraction: float  # share of liquid condensate pooling at the resonator
    wall_uptake_mol: float  # saturating scale: solid share ~ 1/(1 + n_remote/this)
    d_wetting: float       # m, post-collapse wetting floor
    tau_wet: float         # s, collapse thinning time constant
    dT_dep: float          # K, hot-spot deposition suppression scale
    dT0: float             # K, power-thinning scale d_eq = d0*exp(-dT/dT0)


@dataclass(frozen=True)
class SolidifyConfig:
    """Stochastic solid-thickness outcome at the triple crossing."""

    beta: float           # slope of log10 d_solid vs log10 d_liquid
    intercept: float      # log10-space intercept
    sigma_log: float      # decades of scatter; 0 disables the stochastic branch
    p_collapse: float     # probability of collapsing to the wetting floor
    d_cap_highpower: float  # m, resample ceiling when driven hard
    P_threshold_dbm: float  # drive power at/above which the ceiling applies


@dataclass(frozen=True)
class ResonatorConfig:
    f0: float                 # Hz, bare resonance near base temperature
    Q_loaded: float
    coupling_fraction: float  # kappa_ext / kappa_tot
    baseline: tuple[float, float, float, float]  # Hz offsets, c0..c3 in T^k
    p_inf: float              # participation asymptote
    lambda_field: float       # m, field decay length
    kappa_trench: float       # 1/m, in-trench participation slope
    trench_depth: float       # m, gap overetch filled before conformal growth
    kerr_hz_per_photon: float  # negative for softening
    attenuation_db: float     # source dBm -> feedline power
    eta_K_per_W: float        # hot-spot temperature per circulating watt
    tau_th: float             # s, hot-spot thermal time constant
    monitor_dbm: float        # default probe power
    noise_amp: float          # additive |S21|^2 noise amplitude


@dataclass(frozen=True)
class EngineConfig:
    dt: float            # s, fixed integrator step
    stride_s: float      # s, telemetry decimation stride
    campaign_dt: float   # s, step used for campaign events
    pacing: float        # default sim-seconds per wall-second when serving


@dataclass(frozen=True)
class ModelConfig:
    diagram: DiagramConfig
    geometry: GeometryConfig
    material: MaterialConfig
    thermal: ThermalConfig
    film: FilmConfig
    solidify: SolidifyConfig
    resonator: ResonatorConfig
    engine: EngineConfig

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


_SECTIONS = {
    "diagram": DiagramConfig,
    "geometry": GeometryConfig,
    "material": MaterialConfig,
    "thermal": ThermalConfig,
    "film": FilmConfig,
    "solidify": SolidifyConfig,
    "resonator": ResonatorConfig,
    "engine": EngineConfig,
}


def _build_section(name: str, cls, data: dict[str, Any]):
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(fields)
    if unknown:
        raise ScenarioError(f"config.{name}.{sorted(unknown)[0]}", "unknown parameter")
    missing = set(fields) - set(data)
    if missing:
        raise ScenarioError(f"config.{name}.{sorted(missing)[0]}", "missing parameter")
    kwargs = {}
    for key, value in data.items():
        if key == "baseline":
            kwargs[key] = tuple(float(v) for v in value)
        else:
            kwargs[key] = float(value)
    return cls(**kwargs)


def config_from_dict(data: dict[str, Any]) -> ModelConfig:
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ScenarioError(f"config.{sorted(unknown)[0]}", "unknown section")
    missing = set(_SECTIONS) - set(data)
    if missing:
        raise ScenarioError(f"config.{sorted(missing)[0]}", "missing section")
    return ModelConfig(**{name: _build_section(name, cls, data[name])
                          for name, cls in _SECTIONS.items()})


def default_config() -> ModelConfig:
    text = resources.files("neonfilm.data").joinpath("default_config.json").read_text()
    return config_from_dict(json.loads(text))


def apply_overrides(cfg: ModelConfig, overrides: dict[str, Any]) -> ModelConfig:
    """Return a config with the nested override mapping applied.

    Unknown sections or parameters raise ScenarioError naming the offending
    path, so scenario typos fail loudly instead of silently using defaults.
    """
    if not overrides:
        return cfg
    merged = cfg.to_dict()
    for section, params in overrides.items():
        if section not in _SECTIONS:
            raise ScenarioError(f"overrides.{section}", "unknown section")
        if not isinstance(params, dict):
            raise ScenarioError(f"overrides.{section}", "expected a mapping")
        for key, value in params.items():
            if key not in merged[section]:
                raise ScenarioError(f"overrides.{section}.{key}", "unknown parameter")
            merged[section][key] = value
    return config_from_dict(merged)
