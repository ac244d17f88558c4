"""Coexistence curve, gas accounting and the thermal loop.

Expected values are frozen from independent hand evaluations of the
closed-form expressions, not from running the module.
"""

import math

import pytest
from hypothesis import given, strategies as st

from neonfilm import default_config
from neonfilm.constants import R_GAS
from neonfilm.errors import BranchDomainError, CalibrationError
from neonfilm import thermo
from neonfilm.thermo import LIQUID, SOLID

CFG = default_config()
DIA = CFG.diagram
GEO = CFG.geometry


# P = P_t * exp(-(L/R)(1/T - 1/T_t)), evaluated by hand for both branches.
SATURATION_CASES = [
    (26.0, LIQUID, 79897.55580385085),
    (25.0, LIQUID, 52688.36814933871),
    (24.7, LIQUID, 46197.03378912305),
    (23.8, SOLID, 28968.275311206417),
    (24.0, SOLID, 32300.001960560156),
    (22.0, SOLID, 9947.636168097206),
]


@pytest.mark.parametrize("T, branch, expected", SATURATION_CASES)
def test_saturation_pressure_matches_closed_form(T, branch, expected):
    assert thermo.saturation_pressure(T, branch, DIA) == pytest.approx(expected, rel=1e-12)


def test_saturation_pressure_continuous_at_triple():
    p_liq = thermo.saturation_pressure(DIA.T_triple, LIQUID, DIA)
    p_sol = thermo.saturation_pressure(DIA.T_triple, SOLID, DIA)
    assert p_liq == pytest.approx(DIA.P_triple, rel=1e-12)
    assert p_sol == pytest.approx(DIA.P_triple, rel=1e-12)


def test_saturation_pressure_rejects_branch_outside_validity():
    # Liquid far below and solid far above the triple point are out of domain.
    with pytest.raises(BranchDomainError):
        thermo.saturation_pressure(20.0, LIQUID, DIA)
    with pytest.raises(BranchDomainError):
        thermo.saturation_pressure(30.0, SOLID, DIA)


def test_sublimation_steeper_than_evaporation():
    # L_sub > L_vap, so the solid branch falls away faster below the triple.
    T = DIA.T_triple - DIA.hysteresis
    assert thermo.saturation_pressure(T, SOLID, DIA) < thermo.saturation_pressure(T, LIQUID, DIA)


def test_coexistence_branch_switches_at_triple():
    assert thermo.coexistence_branch(DIA.T_triple + 0.01, DIA) == LIQUID
    assert thermo.coexistence_branch(DIA.T_triple - 0.01, DIA) == SOLID


def test_gas_capacity_two_volume_form():
    T = 24.0
    expected = GEO.V_warm / (R_GAS * GEO.T_warm) + GEO.V_cold / (R_GAS * T)
    assert thermo.gas_capacity(T, GEO) == pytest.approx(expected, rel=1e-15)


def test_gas_pressure_inverts_capacity():
    n = 2.5e-3
    T = 25.0
    P = thermo.gas_pressure(n, T, GEO)
    assert P * thermo.gas_capacity(T, GEO) == pytest.approx(n, rel=1e-15)


def test_partition_below_saturation_is_all_gas():
    part = thermo.equilibrium_partition(1e-4, 26.0, LIQUID, DIA, GEO)
    assert not part.saturated
    assert part.n_condensed == 0.0
    assert part.n_gas == 1e-4


def test_partition_above_saturation_pins_pressure():
    part = thermo.equilibrium_partition(0.008, 24.7, LIQUID, DIA, GEO)
    assert part.saturated
    assert part.P == pytest.approx(46197.03378912305, rel=1e-12)
    assert part.n_gas + part.n_condensed == pytest.approx(0.008, abs=1e-18)


def test_partition_rejects_negative_inventory():
    with pytest.raises(BranchDomainError):
        thermo.equilibrium_partition(-1e-6, 24.7, LIQUID, DIA, GEO)


@given(n=st.floats(min_value=0.0, max_value=0.05),
       T=st.floats(min_value=20.0, max_value=24.4))
def test_partition_conserves_and_never_negative(n, T):
    part = thermo.equilibrium_partition(n, T, SOLID, DIA, GEO)
    assert part.n_gas >= 0.0 and part.n_condensed >= 0.0
    assert part.n_gas + part.n_condensed == pytest.approx(n, abs=1e-15)


def test_onset_temperatures_match_calibration_anchors():
    # The volumes were solved from exactly these two onsets.
    T_liq = thermo.onset_temperature(0.008, LIQUID, DIA, GEO)
    T_sol = thermo.onset_temperature(0.003, SOLID, DIA, GEO)
    assert T_liq == pytest.approx(26.0, abs=1e-6)
    assert T_sol == pytest.approx(23.8, abs=1e-6)


def test_onset_out_of_range_raises():
    with pytest.raises(CalibrationError):
        thermo.onset_temperature(10.0, LIQUID, DIA, GEO)


def test_calibrate_volumes_round_trip():
    V_warm, V_cold = thermo.calibrate_volumes(
        0.008, 26.0, LIQUID, 0.003, 23.8, SOLID, DIA, GEO.T_warm)
    assert V_warm == pytest.approx(GEO.V_warm, rel=1e-9)
    assert V_cold == pytest.approx(GEO.V_cold, rel=1e-9)


def test_calibrate_volumes_rejects_degenerate_anchors():
    with pytest.raises(CalibrationError):
        thermo.calibrate_volumes(0.008, 26.0, LIQUID, 0.008, 26.0, LIQUID,
                                 DIA, GEO.T_warm)


def test_thermal_step_exact_exponential_update():
    # One substep: T' = T_set + (T - T_set) * exp(-gain*dt/C).
    decay = math.exp(-CFG.thermal.gain * 1.0 / CFG.thermal.C_cell)
    assert decay == pytest.approx(0.9671999803479994, rel=1e-15)
    T1 = thermo.thermal_step(25.0, 24.0, 0.0, CFG.thermal, 1.0)
    assert T1 == pytest.approx(24.0 + 1.0 * decay, rel=1e-14)


def test_thermal_step_heat_shifts_fixed_point():
    # Constant load settles at T_set + heat/gain.
    T = 24.0
    for _ in range(4000):
        T = thermo.thermal_step(T, 24.0, 0.01, CFG.thermal, 1.0)
    assert T == pytest.approx(24.0 + 0.01 / CFG.thermal.gain, rel=1e-9)


def test_thermal_step_substepping_matches_small_steps():
    # A coarse step that trips the guard must agree with many fine steps.
    coarse = thermo.thermal_step(40.0, 20.0, 0.0, CFG.thermal, 10.0)
    fine = 40.0
    for _ in range(10000):
        fine = thermo.thermal_step(fine, 20.0, 0.0, CFG.thermal, 1e-3)
    assert coarse == pytest.approx(fine, abs=1e-9)


def test_phase_boundary_points_shape_and_branches():
    out = thermo.phase_boundary_points(DIA)
    assert out["triple"] == {"T_K": DIA.T_triple, "P_Pa": DIA.P_triple}
    assert len(out["points"]) == 121
    for pt in out["points"]:
        expect = SOLID if pt["T_K"] < DIA.T_triple else LIQUID
        assert pt["branch"] == expect
        assert pt["P_Pa"] > 0
