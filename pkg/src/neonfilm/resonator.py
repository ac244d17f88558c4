"""Resonator readout: participation, frequency shift, baseline, the Kerr
(Duffing) steady state and drive-induced local heating.

Frequencies are Hz externally; the Duffing algebra works in angular units and
in a dimensionless photon scale so the cubic stays well conditioned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import MaterialConfig, ResonatorConfig
from .constants import HBAR
from .errors import ShiftRangeError
from .film import MORPH_CONFORMAL, MORPH_TRENCH, PHASE_LIQUID, PHASE_NONE, PHASE_SOLID


def kappa_tot(cfg: ResonatorConfig) -> float:
    """Total linewidth in rad/s."""
    return 2.0 * math.pi * cfg.f0 / cfg.Q_loaded


def kappa_ext(cfg: ResonatorConfig) -> float:
    return cfg.coupling_fraction * kappa_tot(cfg)


def fwhm_hz(cfg: ResonatorConfig) -> float:
    return cfg.f0 / cfg.Q_loaded


def participation(d: float, morphology: str, cfg: ResonatorConfig) -> float:
    """Dielectric participation of a film of thickness d.

    conformal: p_inf * (1 - exp(-d/lambda)).
    in_trench: linear fill of the trench first, then the conformal law
    continued from the crossover (continuous and monotone).
    """
    if d < 0:
        raise ValueError(f"negative thickness {d}")
    if morphology == MORPH_CONFORMAL:
        return cfg.p_inf * -math.expm1(-d / cfg.lambda_field)
    if morphology == MORPH_TRENCH:
        p_edge = cfg.kappa_trench * cfg.trench_depth
        if d <= cfg.trench_depth:
            return cfg.kappa_trench * d
        tail = -math.expm1(-(d - cfg.trench_depth) / cfg.lambda_field)
        return p_edge + (cfg.p_inf - p_edge) * tail
    raise ValueError(f"unknown morphology {morphology!r}")


def _epsilon(phase: str, material: MaterialConfig) -> float:
    if phase == PHASE_SOLID:
        return material.eps_solid
    if phase == PHASE_LIQUID:
        return material.eps_liquid
    raise ValueError(f"no permittivity for phase {phase!r}")


def fractional_shift(d: float, phase: str, morphology: str,
                     material: MaterialConfig, cfg: ResonatorConfig) -> float:
    """Relative frequency shift -(eps-1)/2 * p(d); zero for an absent film."""
    if phase == PHASE_NONE or d <= 0.0:
        return 0.0
    return -0.5 * (_epsilon(phase, material) - 1.0) * participation(d, morphology, cfg)


def max_fractional_shift(phase: str, morphology: str, material: MaterialConfig,
                         cfg: ResonatorConfig) -> float:
    """Asymptotic (most negative) shift for thick films; inversion bound."""
    return -0.5 * (_epsilon(phase, material) - 1.0) * cfg.p_inf


def baseline_frequency(T: float, cfg: ResonatorConfig) -> float:
    """Bare resonance vs temperature: f0 plus the cubic baseline polynomial."""
    c0, c1, c2, c3 = cfg.baseline
    return cfg.f0 + c0 + T * (c1 + T * (c2 + T * c3))


# --- drive, Kerr steady state ---------------------------------------------


def drive_power_watts(P_dbm: float, cfg: ResonatorConfig) -> float:
    """Power reaching the feedline after the configured attenuation."""
    return 1e-3 * 10.0 ** ((P_dbm - cfg.attenuation_db) / 10.0)


def photon_flux(P_dbm: float, cfg: ResonatorConfig) -> float:
    """Drive photon flux (1/s) at the feedline."""
    return drive_power_watts(P_dbm, cfg) / (HBAR * 2.0 * math.pi * cfg.f0)


def kerr_rad(cfg: ResonatorConfig) -> float:
    return 2.0 * math.pi * cfg.kerr_hz_per_photon


def duffing_photon_roots(delta_rad: float, P_dbm: float,
                         cfg: ResonatorConfig) -> list[float]:
    """Real nonnegative photon-number roots of the steady-state cubic.

    n * ((delta - K n)^2 + (kappa/2)^2) = kappa_ext * flux, solved in the
    dimensionless variable x = n |K| / kappa and polished by Newton so the
    scaled residual is below 1e-12.
    """
    kt = kappa_tot(cfg)
    ke = kappa_ext(cfg)
    flux = photon_flux(P_dbm, cfg)
    K = kerr_rad(cfg)
    rhs = ke * flux
    if rhs == 0.0:
        return [0.0]
    if K == 0.0:
        return [rhs / (delta_rad**2 + 0.25 * kt**2)]
    s = 1.0 if K > 0 else -1.0
    d = delta_rad / kt
    F = rhs * abs(K) / kt**3
    # x^3 - 2 s d x^2 + (d^2 + 1/4) x - F = 0
    roots = np.roots([1.0, -2.0 * s * d, d * d + 0.25, -F])
    out: list[float] = []
    for z in roots:
        if abs(z.imag) > 1e-7 * max(1.0, abs(z.real)):
            continue
        x = float(z.real)
        if x <= 0.0:
            continue
        # Newton polish on g(x) = x((d - s x)^2 + 1/4) - F
        for _ in range(60):
            u = d - s * x
            g = x * (u * u + 0.25) - F
            if abs(g) <= 1e-12 * F:
                break
            dg = u * u + 0.25 - 2.0 * s * x * u
            if dg == 0.0:
                break
            x -= g / dg
        if x > 0.0:
            out.append(x * kt / abs(K))
    out.sort()
    # collapse near-duplicates (double roots polish to the same point)
    dedup: list[float] = []
    for n in out:
        if not dedup or abs(n - dedup[-1]) > 1e-6 * max(n, dedup[-1]):
            dedup.append(n)
    return dedup


def duffing_sweep(f_grid: np.ndarray, P_dbm: float, f_res_lin: float,
                  direction: str, cfg: ResonatorConfig) -> np.ndarray:
    """Photon number along a frequency sweep with branch continuity.

    direction 'up' sweeps increasing frequency, 'down' decreasing. The
    occupied branch is followed until it folds, then the response jumps to
    the nearest remaining root — which is what produces drive hysteresis.
    """
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be up or down, got {direction!r}")
    order = np.argsort(f_grid)
    if direction == "down":
        order = order[::-1]
    n_out = np.empty(len(f_grid))
    n_prev: float | None = None
    for idx in order:
        delta = 2.0 * math.pi * (float(f_grid[idx]) - f_res_lin)
        roots = duffing_photon_roots(delta, P_dbm, cfg)
        if n_prev is None or len(roots) == 1:
            # far from resonance the physical branch is the small solution
            pick = roots[0] if n_prev is None else min(roots, key=lambda r: abs(r - n_prev))
        else:
            pick = min(roots, key=lambda r: abs(r - n_prev))
        n_out[idx] = pick
        n_prev = pick
    return n_out


def s21_trace(f_grid: np.ndarray, P_dbm: float, f_res_lin: float,
              direction: str, cfg: ResonatorConfig,
              amplitude: float = 1.0,
              noise_rng: np.random.Generator | None = None) -> np.ndarray:
    """Synthesized |S21|^2 over f_grid including the Kerr-pulled peak."""
    n = duffing_sweep(f_grid, P_dbm, f_res_lin, direction, cfg)
    hw = 0.5 * fwhm_hz(cfg)
    f_obs = f_res_lin + cfg.kerr_hz_per_photon * n
    trace = amplitude * hw**2 / ((f_grid - f_obs) ** 2 + hw**2)
    if noise_rng is not None and cfg.noise_amp > 0:
        trace = trace + cfg.noise_amp * noise_rng.standard_normal(len(f_grid))
    return trace


def peak_photon_number(P_dbm: float, cfg: ResonatorConfig) -> float:
    """Photon number with the drive tracking the (pulled) resonance peak."""
    kt = kappa_tot(cfg)
    return 4.0 * kappa_ext(cfg) * photon_flux(P_dbm, cfg) / kt**2


def circulating_power_watts(n_photons: float, cfg: ResonatorConfig) -> float:
    """Power cycling through the resonator for a given occupation."""
    return n_photons * HBAR * 2.0 * math.pi * cfg.f0 * kappa_tot(cfg) / 2.0


def local_heating_step(dT: float, P_circ_W: float, cfg: ResonatorConfig,
                       dt: float) -> float:
    """One step of d(dT)/dt = (eta*P_circ - dT)/tau_th, integrated exactly."""
    target = cfg.eta_K_per_W * P_circ_W
    return target + (dT - target) * math.exp(-dt / cfg.tau_th)


def critical_power_dbm(cfg: ResonatorConfig) -> float:
    """Source power at which the response first bifurcates (analytic)."""
    K = abs(kerr_rad(cfg))
    if K == 0.0:
        raise ShiftRangeError("linear resonator has no critical power")
    kt = kappa_tot(cfg)
    flux_c = kt**3 / (3.0 * math.sqrt(3.0) * K * kappa_ext(cfg))
    watts = flux_c * HBAR * 2.0 * math.pi * cfg.f0
    return 10.0 * math.log10(watts / 1e-3) + cfg.attenuation_db


def calibrate_kerr(P_crit_dbm: float, cfg: ResonatorConfig) -> float:
    """Kerr coefficient (Hz/photon, negative) placing the bifurcation at
    P_crit_dbm source power for the configured coupling and attenuation."""
    kt = kappa_tot(cfg)
    watts = 1e-3 * 10.0 ** ((P_crit_dbm - cfg.attenuation_db) / 10.0)
    flux_c = watts / (HBAR * 2.0 * math.pi * cfg.f0)
    K = kt**3 / (3.0 * math.sqrt(3.0) * flux_c * kappa_ext(cfg))
    return -K / (2.0 * math.pi)


# --- line-shape diagnostics -------------------------------------------------


@dataclass(frozen=True)
class LineShape:
    f_peak: float
    fwhm: float
    skew: float  # (peak - half-max midpoint) / fwhm


def line_shape(f_grid: np.ndarray, trace: np.ndarray) -> LineShape:
    """Peak position, width and asymmetry from half-maximum crossings.

    Skew is the offset of the peak from the midpoint of the two half-max
    crossings, normalized by the width: exactly zero for any symmetric line.
    """
    i_pk = int(np.argmax(trace))
    top = float(trace[i_pk])
    floor = float(np.min(trace))
    half = floor + 0.5 * (top - floor)

    def crossing(side: int) -> float:
        idx = i_pk
        while 0 < idx < len(trace) - 1:
            j = idx + side
            if trace[j] <= half:
                # linear interpolation between idx and j
                t = (half - trace[idx]) / (trace[j] - trace[idx])
                return float(f_grid[idx] + t * (f_grid[j] - f_grid[idx]))
            idx = j
        raise ShiftRangeError("half-maximum crossing outside the grid")

    f_lo = crossing(-1)
    f_hi = crossing(+1)
    width = f_hi - f_lo
    mid = 0.5 * (f_lo + f_hi)
    return LineShape(float(f_grid[i_pk]), width, (float(f_grid[i_pk]) - mid) / width)
