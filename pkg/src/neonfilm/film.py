"""Film bookkeeping at the resonator.

Moles are the source of truth; thickness is derived through the material
density and the resonator footprint. The film state distinguishes the local
film (on the resonator) from the remote condensate (everything else cold),
and the two always sum to the condensed inventory.

Growth routes:
  * liquid: pools with a fixed local fraction, fills the coupling-gap trench
    first (in_trench morphology), thinned by local heating.
  * gas->solid: conformal, with a local share that saturates as the remote
    inventory grows and that a hot spot suppresses exponentially.
  * quench: same conformal split, used far below the triple point where the
    vapor pressure is negligible.

At a downward triple crossing the liquid film solidifies through a stochastic
thinning event: with probability p_collapse the film collapses to the wetting
floor, otherwise log10(d_solid) = beta*log10(d_liquid) + intercept + sigma*xi.
Driving the resonator hard resamples the outcome below a cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import FilmConfig, GeometryConfig, MaterialConfig, SolidifyConfig
from .constants import MONOLAYER_M
from .errors import CalibrationError

PHASE_NONE = "none"
PHASE_LIQUID = "liquid"
PHASE_SOLID = "solid"

MORPH_TRENCH = "in_trench"
MORPH_CONFORMAL = "conformal"

_TARGET_EPS = 1e-15  # mol, transient considered settled below this gap


def density(phase: str, material: MaterialConfig) -> float:
    if phase == PHASE_LIQUID:
        return material.rho_liquid
    if phase == PHASE_SOLID:
        return material.rho_solid
    raise ValueError(f"no density for phase {phase!r}")


def moles_to_thickness(n: float, area: float, phase: str,
                       material: MaterialConfig) -> float:
    """Uniform-equivalent thickness of n moles over the given area."""
    if n < 0:
        raise ValueError(f"negative film amount {n}")
    if area <= 0:
        raise ValueError(f"nonpositive area {area}")
    return n * material.molar_mass / (density(phase, material) * area)


def thickness_to_moles(d: float, area: float, phase: str,
                       material: MaterialConfig) -> float:
    if d < 0:
        raise ValueError(f"negative thickness {d}")
    return d * density(phase, material) * area / material.molar_mass


@dataclass
class FilmState:
    """Mutable film bookkeeping carried by the engine."""

    n_local: float = 0.0    # mol on the resonator
    n_remote: float = 0.0   # mol elsewhere in the cell
    phase: str = PHASE_NONE
    morphology: str = MORPH_CONFORMAL
    target_n_local: float | None = None  # collapse transient target, if active

    def thickness(self, geometry: GeometryConfig, material: MaterialConfig) -> float:
        if self.phase == PHASE_NONE or self.n_local <= 0.0:
            return 0.0
        return moles_to_thickness(self.n_local, geometry.A_res, self.phase, material)

    def reported_phase(self, geometry: GeometryConfig,
                       material: MaterialConfig) -> str:
        """Phase label for telemetry; below a monolayer the film reads as none."""
        if self.phase == PHASE_NONE:
            return PHASE_NONE
        if self.thickness(geometry, material) < MONOLAYER_M:
            return PHASE_NONE
        return self.phase

    @property
    def n_condensed(self) -> float:
        return self.n_local + self.n_remote


def thinning_factor(dT_local: float, film_cfg: FilmConfig) -> float:
    """Equilibrium thinning of a heated liquid film: d_eq = d0 * this."""
    if dT_local <= 0:
        return 1.0
    return math.exp(-dT_local / film_cfg.dT0)


def apply_liquid_equilibrium(state: FilmState, n_liquid: float,
                             dT_local: float, film_cfg: FilmConfig) -> None:
    """Distribute the liquid inventory; the local pool tracks its equilibrium.

    The local film is local_fraction of the inventory, thinned by the hot
    spot; displaced moles sit with the remote condensate. Total is conserved
    by construction (remote is the exact complement).
    """
    if n_liquid < 0:
        raise ValueError(f"negative liquid inventory {n_liquid}")
    state.phase = PHASE_LIQUID if n_liquid > 0 else PHASE_NONE
    state.morphology = MORPH_TRENCH
    state.target_n_local = None
    n_local = film_cfg.local_fraction * n_liquid * thinning_factor(dT_local, film_cfg)
    state.n_local = n_local
    state.n_remote = n_liquid - n_local


def solid_local_share(n_remote: float, dT_local: float,
                      film_cfg: FilmConfig, geometry: GeometryConfig) -> float:
    """Fraction of a gas->solid deposit that lands on the resonator.

    The geometric share A_res/A_total rolls off as the remote condensate
    accumulates (deposition increasingly favors the grown wall surface) and is
    suppressed exponentially by a local hot spot.
    """
    share = geometry.A_res / geometry.A_total
    share *= film_cfg.wall_uptake_mol / (film_cfg.wall_uptake_mol + max(n_remote, 0.0))
    if dT_local > 0:
        share *= math.exp(-dT_local / film_cfg.dT_dep)
    return share


def deposit_solid(state: FilmState, dn: float, share: float) -> None:
    """Add dn moles of solid, share of it locally, the rest remote.

    During an active collapse transient the local part accrues to the
    transient target instead of the film itself.
    """
    if dn < 0:
        raise ValueError(f"negative deposit {dn}")
    if dn == 0.0:
        return
    local = dn * share
    state.phase = PHASE_SOLID
    state.morphology = MORPH_CONFORMAL
    if state.target_n_local is not None:
        state.target_n_local += local
    else:
        state.n_local += local
    state.n_remote += dn - local


def remove_condensate(state: FilmState, dn: float) -> None:
    """Evaporate/sublimate dn moles back to the gas, remote first."""
    if dn < 0:
        raise ValueError(f"negative removal {dn}")
    take_remote = min(dn, state.n_remote)
    state.n_remote -= take_remote
    rest = dn - take_remote
    if rest > 0:
        if state.target_n_local is not None:
            state.target_n_local = max(0.0, state.target_n_local - rest)
        state.n_local = max(0.0, state.n_local - rest)
    # Rounding in remote-first splits can strand a few ulps of inventory;
    # anything this far below a monolayer is an empty cell.
    if state.n_condensed <= _TARGET_EPS:
        state.n_local = 0.0
        state.n_remote = 0.0
        state.phase = PHASE_NONE
        state.target_n_local = None


def sample_solid_outcome(d_liquid: float, power_dbm: float, rng: np.random.Generator,
                         cfg: SolidifyConfig, d_wetting: float) -> float:
    """Draw the post-solidification local thickness for a given liquid film.

    sigma_log = 0 with p_collapse in {0, 1} makes the draw deterministic.
    At/above the drive threshold the draw is repeated until it clears the cap.
    """
    if d_liquid <= 0:
        return 0.0
    capped = power_dbm >= cfg.P_threshold_dbm
    for _ in range(10000):
        if rng.random() < cfg.p_collapse:
            d = d_wetting
        else:
            log_d = cfg.beta * math.log10(d_liquid) + cfg.intercept
            if cfg.sigma_log > 0:
                log_d += cfg.sigma_log * rng.standard_normal()
            d = 10.0 ** log_d
        if not capped or d < cfg.d_cap_highpower:
            return d
    # With any workable cap the loop exits almost immediately; this is a
    # guard against a configuration where the cap excludes all outcomes.
    return min(d, cfg.d_cap_highpower * 0.99)


def begin_solidify(state: FilmState, d_target: float,
                   geometry: GeometryConfig, material: MaterialConfig) -> None:
    """Freeze the liquid film and start the thinning transient toward d_target.

    The whole inventory flips to solid instantly; only the local thickness
    relaxes. The target draws on the remote reservoir when it exceeds the
    current local pool, clamped to the total condensed inventory.
    """
    n_target = thickness_to_moles(d_target, geometry.A_res, PHASE_SOLID, material)
    n_target = min(n_target, state.n_condensed)
    state.phase = PHASE_SOLID
    state.morphology = MORPH_CONFORMAL
    state.target_n_local = n_target


def step_collapse(state: FilmState, dt: float, tau_wet: float) -> None:
    """Relax the local film toward the collapse target (exponential, exact)."""
    if state.target_n_local is None:
        return
    total = state.n_condensed
    gap = state.target_n_local - state.n_local
    move = gap * -math.expm1(-dt / tau_wet)
    state.n_local += move
    state.n_remote = total - state.n_local
    if abs(state.target_n_local - state.n_local) < _TARGET_EPS:
        state.n_local = min(state.target_n_local, total)
        state.n_remote = total - state.n_local
        state.target_n_local = None


def melt(state: FilmState, dT_local: float, film_cfg: FilmConfig) -> None:
    """Solid inventory re-equilibrates as liquid (upward triple crossing)."""
    apply_liquid_equilibrium(state, state.n_condensed, dT_local, film_cfg)


# --- calibration helpers -------------------------------------------------


def calibrate_local_fraction(n_condensed: float, d_target: float,
                             geometry: GeometryConfig,
                             material: MaterialConfig) -> float:
    """Local liquid fraction that puts d_target of liquid on the resonator."""
    if n_condensed <= 0:
        raise CalibrationError("no condensate at the calibration point")
    n_needed = thickness_to_moles(d_target, geometry.A_res, PHASE_LIQUID, material)
    f = n_needed / n_condensed
    if not 0 < f < 1:
        raise CalibrationError(f"local fraction {f:.3g} outside (0, 1)")
    return f


def deposited_local_thickness(n_start_remote: float, dn_deposit: float,
                              wall_uptake: float, geometry: GeometryConfig,
                              material: MaterialConfig) -> float:
    """Closed-form local thickness gained while dn_deposit moles condense.

    Integral of the saturating share as the remote inventory grows from
    n_start_remote; matches the engine's stepwise deposition in the
    small-step limit.
    """
    k = material.molar_mass / (material.rho_solid * geometry.A_total)
    w = wall_uptake
    return k * w * math.log((w + n_start_remote + dn_deposit) / (w + n_start_remote))


def calibrate_wall_uptake(n_cond_at_collapse: float, n_cond_final_rich: float,
                          dn_deposit_lean: float, d_wetting: float,
                          target_ratio: float, geometry: GeometryConfig,
                          material: MaterialConfig) -> float:
    """Wall-uptake scale making the rich/lean final-thickness ratio hit target.

    The rich route arrives below the triple point with n_cond_at_collapse
    already condensed (collapsed to the wetting floor) and finishes with
    n_cond_final_rich; the lean route deposits dn_deposit_lean from zero.
    Solved by bisection; raises if no scale in [1e-6, 10] mol works.
    """
    def ratio(w: float) -> float:
        rich = d_wetting + deposited_local_thickness(
            n_cond_at_collapse, n_cond_final_rich - n_cond_at_collapse,
            w, geometry, material)
        lean = deposited_local_thickness(0.0, dn_deposit_lean, w, geometry, material)
        return rich / lean

    # ratio(w) is U-shaped: the preexisting rich-route inventory suppresses
    # its share at small w. Solve on the ascending branch (large w), where
    # the share saturates and the pedestal stays moderate.
    grid = [10.0 ** (-6 + 7 * i / 400) for i in range(401)]
    values = [ratio(w) for w in grid]
    i_min = min(range(len(grid)), key=values.__getitem__)
    if values[i_min] > target_ratio or values[-1] < target_ratio:
        raise CalibrationError(
            f"target ratio {target_ratio} unreachable "
            f"(min {values[i_min]:.3f}, max-at-scale {values[-1]:.3f})")
    lo, hi = grid[i_min], grid[-1]
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if ratio(mid) < target_ratio:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


def sigma_for_target_r(beta: float, s_liquid_log: float, r_target: float) -> float:
    """Scatter (decades) that yields Pearson r_target between the log thicknesses.

    For the linear-Gaussian outcome model, r = beta*s_L/sqrt(beta^2 s_L^2 +
    sigma^2); inverting gives sigma = beta*s_L*sqrt(1/r^2 - 1).
    """
    if not 0 < r_target < 1:
        raise CalibrationError(f"target correlation {r_target} outside (0, 1)")
    if s_liquid_log <= 0 or beta <= 0:
        raise CalibrationError("need positive slope and liquid spread")
    return beta * s_liquid_log * math.sqrt(1.0 / r_target**2 - 1.0)
