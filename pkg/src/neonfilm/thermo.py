"""Neon thermodynamics: coexistence curve, two-volume gas accounting and the
lumped thermal model of the sample cell.

The coexistence curve is a single-term Clausius-Clapeyron branch on each side
of the triple point. All gas bookkeeping treats the manifold (room
temperature) and the cell (cold) as two ideal-gas volumes at a common
pressure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import DiagramConfig, GeometryConfig, ThermalConfig
from .constants import R_GAS
from .errors import BranchDomainError, CalibrationError

LIQUID = "liquid"
SOLID = "solid"


def saturation_pressure(T: float, branch: str, diagram: DiagramConfig) -> float:
    """Coexistence pressure on the requested branch.

    The liquid branch is valid for T >= T_triple - hysteresis (supercooled
    liquid is allowed within the tolerance), the solid branch for
    T <= T_triple + hysteresis. Outside that, BranchDomainError.
    """
    if T <= 0:
        raise BranchDomainError(f"nonpositive temperature {T}")
    Tt = diagram.T_triple
    eps = diagram.hysteresis
    if branch == LIQUID:
        if T < Tt - eps:
            raise BranchDomainError(f"liquid branch invalid at {T:.3f} K")
        L = diagram.L_vap
    elif branch == SOLID:
        if T > Tt + eps:
            raise BranchDomainError(f"solid branch invalid at {T:.3f} K")
        L = diagram.L_sub
    else:
        raise BranchDomainError(f"unknown branch {branch!r}")
    return diagram.P_triple * math.exp(-(L / R_GAS) * (1.0 / T - 1.0 / Tt))


def coexistence_branch(T: float, diagram: DiagramConfig) -> str:
    """Equilibrium branch at temperature T (liquid above the triple point)."""
    return LIQUID if T >= diagram.T_triple else SOLID


def gas_capacity(T_cell: float, geometry: GeometryConfig) -> float:
    """Moles of gas held per pascal: V_warm/(R T_warm) + V_cold/(R T_cell)."""
    if T_cell <= 0:
        raise BranchDomainError(f"nonpositive cell temperature {T_cell}")
    return (geometry.V_warm / (R_GAS * geometry.T_warm)
            + geometry.V_cold / (R_GAS * T_cell))


def gas_pressure(n_gas: float, T_cell: float, geometry: GeometryConfig) -> float:
    """Pressure of n_gas moles distributed over the two volumes."""
    if n_gas < 0:
        raise BranchDomainError(f"negative gas amount {n_gas}")
    return n_gas / gas_capacity(T_cell, geometry)


@dataclass(frozen=True)
class Partition:
    n_gas: float
    n_condensed: float
    P: float
    saturated: bool
    branch: str


def equilibrium_partition(n_total: float, T_cell: float, branch: str,
                          diagram: DiagramConfig,
                          geometry: GeometryConfig) -> Partition:
    """Split the total inventory into gas and condensate at equilibrium.

    If the inventory fits below saturation everything stays gaseous;
    otherwise the gas holds exactly the saturation load and the rest is
    condensed. Idempotent in n_total and T.
    """
    if n_total < 0:
        raise BranchDomainError(f"negative inventory {n_total}")
    psat = saturation_pressure(T_cell, branch, diagram)
    capacity = gas_capacity(T_cell, geometry)
    n_sat = psat * capacity
    if n_total <= n_sat:
        return Partition(n_total, 0.0, n_total / capacity, False, branch)
    return Partition(n_sat, n_total - n_sat, psat, True, branch)


def onset_temperature(n_total: float, branch: str, diagram: DiagramConfig,
                      geometry: GeometryConfig,
                      T_lo: float = 5.0, T_hi: float = 60.0) -> float:
    """Temperature at which n_total moles first saturate on the given branch.

    Solved by bisection on n_sat(T) - n_total, which is monotone increasing
    in T (pressure rises much faster than the cold capacity falls).
    """
    def excess(T: float) -> float:
        return saturation_pressure(T, branch, diagram) * gas_capacity(T, geometry) - n_total

    lo, hi = T_lo, T_hi
    if branch == LIQUID:
        lo = max(lo, diagram.T_triple - diagram.hysteresis)
    if branch == SOLID:
        hi = min(hi, diagram.T_triple + diagram.hysteresis)
    if excess(lo) > 0 or excess(hi) < 0:
        raise CalibrationError(
            f"no onset for {n_total} mol on the {branch} branch in [{lo}, {hi}] K")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def calibrate_volumes(n1: float, T1: float, branch1: str,
                      n2: float, T2: float, branch2: str,
                      diagram: DiagramConfig, T_warm: float) -> tuple[float, float]:
    """Solve for (V_warm, V_cold) from two observed condensation onsets.

    At an onset the full inventory is still gaseous at saturation pressure:
    n_i = P_sat(T_i) * (V_warm/(R T_warm) + V_cold/(R T_i)), a 2x2 linear
    system in the volumes. Raises CalibrationError if either volume comes out
    negative (the onsets are then inconsistent with the configured diagram).
    """
    if T1 == T2:
        raise CalibrationError("onset temperatures must differ")
    a1 = n1 / saturation_pressure(T1, branch1, diagram)  # capacity at T1
    a2 = n2 / saturation_pressure(T2, branch2, diagram)
    # a_i = x + y / T_i with x = V_warm/(R T_warm), y = V_cold/R
    y = (a2 - a1) / (1.0 / T2 - 1.0 / T1)
    x = a1 - y / T1
    V_warm = x * R_GAS * T_warm
    V_cold = y * R_GAS
    if V_warm < -1e-12 or V_cold <= 0:
        raise CalibrationError(
            f"onset pair inconsistent with the diagram: V_warm={V_warm:.3e}, "
            f"V_cold={V_cold:.3e}")
    return max(V_warm, 0.0), V_cold


def thermal_step(T: float, T_set: float, heat_W: float,
                 model: ThermalConfig, dt: float) -> float:
    """Advance the cell temperature by dt.

    C dT/dt = -gain*(T - T_set) + heat_W. Integrated exactly for the linear
    part over substeps no larger than max_step_K would allow; the closed-form
    update keeps the step robust when dt is coarse.
    """
    if dt <= 0:
        return T
    tau = model.C_cell / model.gain
    T_inf = T_set + heat_W / model.gain
    # Substep so a single update never moves more than the configured guard.
    n_sub = 1
    estimate = abs(T_inf - T) * (1.0 - math.exp(-dt / tau))
    if estimate > model.max_step_K:
        n_sub = int(math.ceil(estimate / model.max_step_K))
    h = dt / n_sub
    decay = math.exp(-h / tau)
    for _ in range(n_sub):
        T = T_inf + (T - T_inf) * decay
    return T


def phase_boundary_points(diagram: DiagramConfig, T_min: float = 18.0,
                          T_max: float = 30.0, n: int = 121) -> dict:
    """Sampled coexistence curve for plotting/overlay clients."""
    Tt = diagram.T_triple
    Ts = [T_min + (T_max - T_min) * i / (n - 1) for i in range(n)]
    points = []
    for T in Ts:
        branch = coexistence_branch(T, diagram)
        points.append({"T_K": T, "P_Pa": saturation_pressure(T, branch, diagram),
                       "branch": branch})
    return {"triple": {"T_K": Tt, "P_Pa": diagram.P_triple}, "points": points}
