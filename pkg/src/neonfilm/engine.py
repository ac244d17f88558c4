"""Fixed-step simulation engine.

Step order: commands -> setpoint/injection -> thermal -> equilibrium
partition -> film routing -> collapse transient -> drive heating ->
observables -> telemetry. dt is fixed (default 0.1 s); the quasi-static
partition makes trajectories insensitive to it.

Randomness: every stochastic draw comes from a counter-based (Philox) stream
keyed by derive_seed(run_seed, event_index), so replays are bitwise
reproducible, campaign events are independent of scheduling, and halving dt
does not shift any draw.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from . import film as film_mod
from . import resonator as res_mod
from . import thermo
from .config import ModelConfig, apply_overrides, default_config
from .errors import CommandError, ScenarioError

_MASK64 = (1 << 64) - 1

# stream indices within one run (offsets into derive_seed)
_STREAM_SOLIDIFY = 1 << 20


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def derive_seed(master_seed: int, index: int) -> int:
    """Counter-based seed splitting: independent stream per (master, index).

    Pure 64-bit arithmetic (splitmix64 over the mixed pair), so results are
    stable across platforms and library versions.
    """
    return _splitmix64(_splitmix64(master_seed & _MASK64) ^ (index & _MASK64))


def stream_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=derive_seed(master_seed, index)))


# --- scenario description ----------------------------------------------------

COMMAND_RANGES = {
    "rate_K_per_min": (0.0, 10.0),   # exclusive lower bound
    "target_K": (4.0, 40.0),
    "power_dbm": (-80.0, 20.0),
    "flow_sccm": (0.0, 100.0),       # exclusive lower bound
    "moles": (0.0, 0.1),             # exclusive lower bound
}


@dataclass(frozen=True)
class Command:
    t_s: float
    kind: str
    args: dict[str, float]


def validate_command(kind: str, args: dict[str, Any], where: str = "command") -> dict[str, float]:
    """Check a command against the allowed kinds/ranges; returns clean args."""
    specs = {
        "set_ramp": ("rate_K_per_min", "target_K"),
        "set_power": ("power_dbm",),
        "inject": ("moles", "flow_sccm"),
        "hold": (),
    }
    if kind not in specs:
        raise CommandError(f"{where}.kind: unknown command {kind!r}")
    required = specs[kind]
    unknown = set(args) - set(required)
    if unknown:
        raise CommandError(f"{where}.{sorted(unknown)[0]}: not a parameter of {kind}")
    clean: dict[str, float] = {}
    for name in required:
        if name not in args:
            raise CommandError(f"{where}.{name}: required for {kind}")
        # bool is an int subclass; JSON true/false and numeric strings must
        # not pass as numbers
        if isinstance(args[name], bool) or not isinstance(args[name], (int, float)):
            raise CommandError(f"{where}.{name}: not a number")
        value = float(args[name])
        lo, hi = COMMAND_RANGES[name]
        exclusive_lo = name in ("rate_K_per_min", "flow_sccm", "moles")
        if not math.isfinite(value) or value > hi or value < lo or (exclusive_lo and value <= lo):
            bound = "(" if exclusive_lo else "["
            raise CommandError(f"{where}.{name}: {value} outside {bound}{lo}, {hi}]")
        clean[name] = value
    return clean


@dataclass(frozen=True)
class Scenario:
    name: str
    seed: int
    duration_s: float
    dt: float
    stride_s: float
    T_start: float
    n_mol: float
    power_dbm: float
    commands: tuple[Command, ...]
    overrides: dict[str, Any] = field(default_factory=dict)

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "Scenario":
        def need(key, kind, where="scenario"):
            if key not in data:
                raise ScenarioError(f"{where}.{key}", "missing")
            value = data[key]
            if kind is float:
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise ScenarioError(f"{where}.{key}", "expected a number")
                return float(value)
            if kind is int:
                if not isinstance(value, int) or isinstance(value, bool):
                    raise ScenarioError(f"{where}.{key}", "expected an integer")
            elif not isinstance(value, kind):
                raise ScenarioError(f"{where}.{key}", f"expected {kind.__name__}")
            return value

        known = {"name", "seed", "duration_s", "dt", "stride_s", "initial",
                 "commands", "overrides"}
        for key in data:
            if key not in known:
                raise ScenarioError(f"scenario.{key}", "unknown field")
        initial = need("initial", dict)
        for key in initial:
            if key not in ("T_K", "n_mol", "power_dbm"):
                raise ScenarioError(f"scenario.initial.{key}", "unknown field")
        T_start = float(initial.get("T_K", 29.5))
        if not 4.0 <= T_start <= 60.0:
            raise ScenarioError("scenario.initial.T_K", f"{T_start} outside [4, 60]")
        n_mol = float(initial.get("n_mol", 0.0))
        if not 0.0 <= n_mol <= 0.1:
            raise ScenarioError("scenario.initial.n_mol", f"{n_mol} outside [0, 0.1]")
        duration = need("duration_s", float)
        if duration <= 0:
            raise ScenarioError("scenario.duration_s", "must be positive")
        dt = float(data.get("dt", 0.1))
        if not 0.0 < dt <= 10.0:
            raise ScenarioError("scenario.dt", f"{dt} outside (0, 10]")
        commands = []
        raw_cmds = data.get("commands", [])
        if not isinstance(raw_cmds, list):
            raise ScenarioError("scenario.commands", "expected a list")
        for i, raw in enumerate(raw_cmds):
            where = f"scenario.commands[{i}]"
            if not isinstance(raw, dict):
                raise ScenarioError(where, "expected a mapping")
            if "t_s" not in raw or "kind" not in raw:
                raise ScenarioError(where, "needs t_s and kind")
            t_cmd = raw["t_s"]
            if not isinstance(t_cmd, (int, float)) or isinstance(t_cmd, bool) or t_cmd < 0:
                raise ScenarioError(f"{where}.t_s", "expected a nonnegative number")
            args = {k: v for k, v in raw.items() if k not in ("t_s", "kind")}
            try:
                clean = validate_command(str(raw["kind"]), args, where)
            except CommandError as exc:
                raise ScenarioError(str(exc).split(":")[0], str(exc)) from None
            commands.append(Command(float(t_cmd), str(raw["kind"]), clean))
        commands.sort(key=lambda c: c.t_s)
        overrides = data.get("overrides", {})
        if not isinstance(overrides, dict):
            raise ScenarioError("scenario.overrides", "expected a mapping")
        return Scenario(
            name=str(need("name", str)),
            seed=int(need("seed", int)),
            duration_s=duration,
            dt=dt,
            stride_s=float(data.get("stride_s", 1.0)),
            T_start=T_start,
            n_mol=n_mol,
            power_dbm=float(initial.get("power_dbm", -35.0)),
            commands=tuple(commands),
            overrides=overrides,
        )


def load_scenario(path: str) -> Scenario:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}:{exc.lineno}", exc.msg) from None
    if not isinstance(data, dict):
        raise ScenarioError(path, "scenario file must hold a JSON object")
    return Scenario.from_dict(data)


# --- telemetry ----------------------------------------------------------------

CSV_COLUMNS = ["t_s", "T_cell_K", "P_Pa", "f_res_Hz", "df_corr_Hz",
               "power_dBm", "d_local_m", "phase", "flags"]


@dataclass(frozen=True)
class TelemetryRecord:
    t_s: float
    T_cell_K: float
    T_set_K: float
    P_Pa: float
    f_res_Hz: float
    df_corr_Hz: float
    power_dBm: float
    d_local_m: float
    phase: str
    n_gas_mol: float
    n_liquid_mol: float
    n_solid_mol: float
    dT_local_K: float
    flags: tuple[str, ...]

    def as_dict(self) -> dict[str, Any]:
        d = self.__dict__.copy()
        d["flags"] = list(self.flags)
        return d

    def csv_row(self) -> str:
        return ",".join([
            repr(self.t_s), repr(self.T_cell_K), repr(self.P_Pa),
            repr(self.f_res_Hz), repr(self.df_corr_Hz), repr(self.power_dBm),
            repr(self.d_local_m), self.phase, ";".join(self.flags),
        ])


# --- engine -------------------------------------------------------------------


class Engine:
    """Single-run simulator. Construct, then step() or run()."""

    def __init__(self, scenario: Scenario, cfg: ModelConfig | None = None,
                 keep_records: bool = True):
        base = cfg if cfg is not None else default_config()
        self.cfg = apply_overrides(base, scenario.overrides)
        self.scenario = scenario
        self.keep_records = keep_records

        self.t = 0.0
        self.T_cell = scenario.T_start
        self.T_set = scenario.T_start
        self.ramp_rate = 0.0       # K/s, magnitude
        self.ramp_target = scenario.T_start
        self.n_total = scenario.n_mol
        self.power_dbm = scenario.power_dbm
        self.dT_local = 0.0
        self.film = film_mod.FilmState()
        self.P = thermo.gas_pressure(self.n_total, self.T_cell, self.cfg.geometry)
        self._kerr_pull_hz = self.cfg.resonator.kerr_hz_per_photon * \
            res_mod.peak_photon_number(self.power_dbm, self.cfg.resonator)
        self._equilibrate_initial()

        self._cmd_idx = 0
        self._commands = list(scenario.commands)
        self._inject_rate = 0.0    # mol/s
        self._inject_left = 0.0
        self._latent_W = 0.0
        self._pending_fusion_J = 0.0
        self._crossings = 0
        self._prev_T = self.T_cell
        self._step_count = 0
        self._record_every = max(1, int(round(scenario.stride_s / scenario.dt)))
        self._pending_flags: list[str] = []

        self.records: list[TelemetryRecord] = []
        self.events: list[dict[str, Any]] = []
        if keep_records:
            self._record()

    def _equilibrate_initial(self) -> None:
        """Start scenarios above saturation with the film already formed.

        Without this, the first step would condense the whole excess at once
        and its latent heat would kick the cell by an unphysical spike.
        """
        cfg = self.cfg
        branch = thermo.LIQUID if self.T_cell >= cfg.diagram.T_triple \
            else thermo.SOLID
        part = thermo.equilibrium_partition(self.n_total, self.T_cell, branch,
                                            cfg.diagram, cfg.geometry)
        self.P = part.P
        if part.n_condensed <= 0.0:
            return
        film = self.film
        if branch == thermo.LIQUID:
            film_mod.apply_liquid_equilibrium(film, part.n_condensed, 0.0,
                                              cfg.film)
        else:
            d = film_mod.deposited_local_thickness(
                0.0, part.n_condensed, cfg.film.wall_uptake_mol,
                cfg.geometry, cfg.material)
            n_local = film_mod.thickness_to_moles(d, cfg.geometry.A_res,
                                                  film_mod.PHASE_SOLID,
                                                  cfg.material)
            film.phase = film_mod.PHASE_SOLID
            film.morphology = film_mod.MORPH_CONFORMAL
            film.n_local = min(n_local, part.n_condensed)
            film.n_remote = part.n_condensed - film.n_local

    # -- command handling

    def submit(self, kind: str, args: dict[str, Any]) -> None:
        """Queue a live command for the next step (used by the gateway)."""
        clean = validate_command(kind, args)
        self._commands.append(Command(self.t, kind, clean))

    def _apply_command(self, cmd: Command) -> None:
        if cmd.kind == "set_ramp":
            self.ramp_rate = cmd.args["rate_K_per_min"] / 60.0
            self.ramp_target = cmd.args["target_K"]
        elif cmd.kind == "hold":
            self.ramp_rate = 0.0
            self.ramp_target = self.T_set
        elif cmd.kind == "set_power":
            self.power_dbm = cmd.args["power_dbm"]
        elif cmd.kind == "inject":
            from .constants import SCCM_TO_MOL_PER_S
            self._inject_rate = cmd.args["flow_sccm"] * SCCM_TO_MOL_PER_S
            self._inject_left += cmd.args["moles"]
        self._event(cmd.kind, **cmd.args)

    def _event(self, kind: str, **payload: float) -> None:
        entry = {"t_s": self.t, "kind": kind}
        entry.update(payload)
        self.events.append(entry)
        self._pending_flags.append(kind)

    # -- stepping

    def step(self) -> None:
        dt = self.scenario.dt
        cfg = self.cfg
        dia = cfg.diagram

        # 1. due commands (sorted at build; live submissions land at the tail)
        while self._cmd_idx < len(self._commands) and \
                self._commands[self._cmd_idx].t_s <= self.t + 1e-9:
            self._apply_command(self._commands[self._cmd_idx])
            self._cmd_idx += 1

        # 2. setpoint ramp and injection
        if self.ramp_rate > 0.0 and self.T_set != self.ramp_target:
            move = self.ramp_rate * dt
            gap = self.ramp_target - self.T_set
            self.T_set += math.copysign(min(move, abs(gap)), gap)
        if self._inject_left > 0.0:
            dn = min(self._inject_rate * dt, self._inject_left)
            self.n_total += dn
            self._inject_left -= dn
            if self._inject_left <= 0.0:
                self._event("inject_done")

        # 3. thermal step; latent heat of the previous step's condensation
        # plus the spread-out fusion release drive the cell.
        fusion_W = 0.0
        if self._pending_fusion_J != 0.0:
            release = self._pending_fusion_J * -math.expm1(-dt / cfg.film.tau_wet)
            self._pending_fusion_J -= release
            fusion_W = release / dt
            if abs(self._pending_fusion_J) < 1e-12:
                self._pending_fusion_J = 0.0
        self.T_cell = thermo.thermal_step(self.T_cell, self.T_set,
                                          self._latent_W + fusion_W,
                                          cfg.thermal, dt)

        # 4. branch selection with supercooling hysteresis
        film = self.film
        if self.T_cell >= dia.T_triple:
            branch = thermo.LIQUID
        elif film.phase == film_mod.PHASE_LIQUID and \
                self.T_cell >= dia.T_triple - dia.hysteresis:
            branch = thermo.LIQUID
        else:
            branch = thermo.SOLID

        part = thermo.equilibrium_partition(self.n_total, self.T_cell, branch,
                                            dia, cfg.geometry)
        self.P = part.P

        # 5. film routing
        n_cond_prev = film.n_condensed
        dn = part.n_condensed - n_cond_prev
        latent = 0.0
        if branch == thermo.LIQUID:
            if film.phase == film_mod.PHASE_SOLID:
                self._event("melt", n_mol=film.n_condensed)
                self._pending_fusion_J -= film.n_condensed * dia.L_fus
                film.target_n_local = None
            if part.n_condensed > 0.0 or film.phase != film_mod.PHASE_NONE:
                if n_cond_prev == 0.0 and part.n_condensed > 0.0:
                    self._event("liquid_onset", T_K=self.T_cell, P_Pa=part.P)
                film_mod.apply_liquid_equilibrium(film, part.n_condensed,
                                                  self.dT_local, cfg.film)
            latent = dn * dia.L_vap / dt
        else:
            if film.phase == film_mod.PHASE_LIQUID:
                # downward crossing out of the hysteresis window
                d_liq = film.thickness(cfg.geometry, cfg.material)
                rng = stream_rng(self.scenario.seed,
                                 _STREAM_SOLIDIFY + self._crossings)
                self._crossings += 1
                d_target = film_mod.sample_solid_outcome(
                    d_liq, self.power_dbm, rng, cfg.solidify, cfg.film.d_wetting)
                self._pending_fusion_J += film.n_condensed * dia.L_fus
                film_mod.begin_solidify(film, d_target, cfg.geometry, cfg.material)
                self._event("collapse", d_liquid_m=d_liq, d_target_m=d_target)
            if dn >= 0.0:
                if dn > 0.0:
                    if n_cond_prev == 0.0:
                        self._event("solid_onset", T_K=self.T_cell, P_Pa=part.P)
                    share = film_mod.solid_local_share(film.n_remote, self.dT_local,
                                                       cfg.film, cfg.geometry)
                    film_mod.deposit_solid(film, dn, share)
                latent = dn * dia.L_sub / dt
            else:
                film_mod.remove_condensate(film, -dn)
                latent = dn * dia.L_sub / dt
        self._latent_W = latent

        # 6. collapse transient
        film_mod.step_collapse(film, dt, cfg.film.tau_wet)

        # 7. drive heating (probe assumed tracking the pulled peak)
        n_peak = res_mod.peak_photon_number(self.power_dbm, cfg.resonator)
        p_circ = res_mod.circulating_power_watts(n_peak, cfg.resonator)
        self.dT_local = res_mod.local_heating_step(self.dT_local, p_circ,
                                                   cfg.resonator, dt)
        self._kerr_pull_hz = cfg.resonator.kerr_hz_per_photon * n_peak

        # 8. triple-crossing flag (temperature passes the triple point)
        if (self._prev_T - dia.T_triple) * (self.T_cell - dia.T_triple) < 0.0:
            self._event("triple_crossing", T_K=self.T_cell)
        self._prev_T = self.T_cell

        # Single rounding keeps stride times exact (n*dt, not accumulated).
        self._step_count += 1
        self.t = self._step_count * dt
        if self.keep_records and self._step_count % self._record_every == 0:
            self._record()

    # -- observables

    def observables(self) -> tuple[float, float, float, str]:
        cfg = self.cfg
        d = self.film.thickness(cfg.geometry, cfg.material)
        phase = self.film.reported_phase(cfg.geometry, cfg.material)
        shift = res_mod.fractional_shift(d, self.film.phase, self.film.morphology,
                                         cfg.material, cfg.resonator) \
            if self.film.phase != film_mod.PHASE_NONE else 0.0
        base = res_mod.baseline_frequency(self.T_cell, cfg.resonator)
        f_obs = base + cfg.resonator.f0 * shift + self._kerr_pull_hz
        return d, f_obs, f_obs - base, phase

    def _record(self) -> None:
        d, f_obs, df, phase = self.observables()
        n_cond = self.film.n_condensed
        is_liq = self.film.phase == film_mod.PHASE_LIQUID
        rec = TelemetryRecord(
            t_s=self.t, T_cell_K=self.T_cell, T_set_K=self.T_set, P_Pa=self.P,
            f_res_Hz=f_obs, df_corr_Hz=df, power_dBm=self.power_dbm,
            d_local_m=d, phase=phase,
            n_gas_mol=self.n_total - n_cond,
            n_liquid_mol=n_cond if is_liq else 0.0,
            n_solid_mol=0.0 if is_liq else n_cond,
            dT_local_K=self.dT_local,
            flags=tuple(self._pending_flags),
        )
        self._pending_flags.clear()
        self.records.append(rec)

    def run(self) -> "RunResult":
        n_steps = int(round(self.scenario.duration_s / self.scenario.dt))
        for _ in range(n_steps):
            self.step()
        return RunResult(self.scenario, self.records, self.events, self.summary())

    def state_dict(self) -> dict[str, Any]:
        d, f_obs, df, phase = self.observables()
        return {
            "t_s": self.t, "T_cell_K": self.T_cell, "T_set_K": self.T_set,
            "P_Pa": self.P, "f_res_Hz": f_obs, "df_corr_Hz": df,
            "power_dBm": self.power_dbm, "d_local_m": d, "phase": phase,
            "n_total_mol": self.n_total, "dT_local_K": self.dT_local,
            "scenario": self.scenario.name,
        }

    def summary(self) -> dict[str, Any]:
        def first_event(kind: str) -> dict[str, Any] | None:
            for e in self.events:
                if e["kind"] == kind:
                    return e
            return None

        d_final, f_final, df_final, phase = self.observables()
        peak_liquid = max((r.d_local_m for r in self.records
                           if r.phase == film_mod.PHASE_LIQUID), default=0.0)
        out = {
            "scenario": self.scenario.name,
            "seed": self.scenario.seed,
            "duration_s": self.t,
            "final": {"T_cell_K": self.T_cell, "P_Pa": self.P,
                      "d_local_m": d_final, "phase": phase,
                      "f_res_Hz": f_final, "df_corr_Hz": df_final},
            "peak_liquid_m": peak_liquid,
            "events": self.events,
        }
        for kind in ("liquid_onset", "solid_onset", "collapse", "melt",
                     "triple_crossing"):
            ev = first_event(kind)
            if ev is not None:
                out[kind] = ev
        return out


@dataclass
class RunResult:
    scenario: Scenario
    records: list[TelemetryRecord]
    events: list[dict[str, Any]]
    summary: dict[str, Any]


def run_scenario(scenario: Scenario, cfg: ModelConfig | None = None) -> RunResult:
    return Engine(scenario, cfg).run()


# --- persisted artifacts --------------------------------------------------------


def write_csv(records: Iterable[TelemetryRecord], path: str) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for rec in records:
            fh.write(rec.csv_row() + "\n")


def write_jsonl(records: Iterable[TelemetryRecord], path: str) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec.as_dict(), sort_keys=True) + "\n")


def write_summary(summary: dict[str, Any], path: str) -> None:
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- campaigns ------------------------------------------------------------------


@dataclass(frozen=True)
class Campaign:
    name: str
    master_seed: int
    volumes_mol: tuple[float, ...]
    rates_K_per_min: tuple[float, ...]
    powers_dbm: tuple[float, ...]
    cycles: int
    T_start: float
    T_floor: float
    hold_s: float
    read_liquid_at_K: float
    dt: float
    overrides: dict[str, Any] = field(default_factory=dict)

    @property
    def n_events(self) -> int:
        return (len(self.volumes_mol) * len(self.rates_K_per_min)
                * len(self.powers_dbm) * self.cycles)

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "Campaign":
        known = {"name", "master_seed", "volumes_mol", "rates_K_per_min",
                 "powers_dbm", "cycles", "T_start_K", "T_floor_K", "hold_s",
                 "read_liquid_at_K", "dt", "overrides"}
        for key in data:
            if key not in known:
                raise ScenarioError(f"campaign.{key}", "unknown field")
        for key in ("name", "master_seed", "volumes_mol", "rates_K_per_min", "cycles"):
            if key not in data:
                raise ScenarioError(f"campaign.{key}", "missing")
        for key in ("volumes_mol", "rates_K_per_min", "powers_dbm"):
            if key == "powers_dbm" and key not in data:
                continue
            seq = data.get(key)
            if not isinstance(seq, list) or not seq or \
                    not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                            for v in seq):
                raise ScenarioError(f"campaign.{key}", "expected a nonempty number list")
        cycles = data["cycles"]
        if not isinstance(cycles, int) or isinstance(cycles, bool) or cycles < 1:
            raise ScenarioError("campaign.cycles", "expected a positive integer")
        for rate in data["rates_K_per_min"]:
            if not 0.0 < rate <= 10.0:
                raise ScenarioError("campaign.rates_K_per_min", f"{rate} outside (0, 10]")
        return Campaign(
            name=str(data["name"]),
            master_seed=int(data["master_seed"]),
            volumes_mol=tuple(float(v) for v in data["volumes_mol"]),
            rates_K_per_min=tuple(float(v) for v in data["rates_K_per_min"]),
            powers_dbm=tuple(float(v) for v in data.get("powers_dbm", [-35.0])),
            cycles=cycles,
            T_start=float(data.get("T_start_K", 29.0)),
            T_floor=float(data.get("T_floor_K", 23.8)),
            hold_s=float(data.get("hold_s", 240.0)),
            read_liquid_at_K=float(data.get("read_liquid_at_K", 24.7)),
            dt=float(data.get("dt", 0.5)),
            overrides=dict(data.get("overrides", {})),
        )


def load_campaign(path: str) -> Campaign:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}:{exc.lineno}", exc.msg) from None
    return Campaign.from_dict(data)


@dataclass(frozen=True)
class CampaignEvent:
    event_id: int
    n_mol: float
    rate_K_per_min: float
    power_dBm: float
    d_liquid_m: float
    d_solid_m: float
    seed: int

    def csv_row(self) -> str:
        return ",".join([
            str(self.event_id), repr(self.n_mol), repr(self.rate_K_per_min),
            repr(self.power_dBm), repr(self.d_liquid_m), repr(self.d_solid_m),
            str(self.seed),
        ])


CAMPAIGN_CSV_COLUMNS = ["event_id", "n_mol", "rate_K_per_min", "power_dBm",
                        "d_liquid_m", "d_solid_m", "seed"]


def event_parameters(campaign: Campaign) -> list[tuple[int, float, float, float]]:
    """Deterministic event enumeration: volumes x rates x powers x cycles."""
    out = []
    idx = 0
    for v in campaign.volumes_mol:
        for r in campaign.rates_K_per_min:
            for p in campaign.powers_dbm:
                for _ in range(campaign.cycles):
                    out.append((idx, v, r, p))
                    idx += 1
    return out


def _run_event(packed: tuple[Campaign, ModelConfig, int, float, float, float]) -> CampaignEvent:
    campaign, cfg, idx, volume, rate, power = packed
    seed = derive_seed(campaign.master_seed, idx)
    duration = (campaign.T_start - campaign.T_floor) / (rate / 60.0) + campaign.hold_s
    scenario = Scenario(
        name=f"{campaign.name}[{idx}]", seed=seed, duration_s=duration,
        dt=campaign.dt, stride_s=campaign.dt, T_start=campaign.T_start,
        n_mol=volume, power_dbm=power,
        commands=(Command(0.0, "set_ramp",
                          {"rate_K_per_min": rate, "target_K": campaign.T_floor}),),
        overrides=campaign.overrides,
    )
    eng = Engine(scenario, cfg, keep_records=False)
    d_liquid = 0.0
    read_liquid = False
    n_steps = int(round(duration / campaign.dt))
    for _ in range(n_steps):
        eng.step()
        if not read_liquid and eng.T_cell <= campaign.read_liquid_at_K:
            d_liquid = eng.film.thickness(cfg.geometry, cfg.material)
            read_liquid = True
    d_solid = eng.film.thickness(cfg.geometry, cfg.material)
    return CampaignEvent(idx, volume, rate, power, d_liquid, d_solid, seed)


def run_campaign(campaign: Campaign, cfg: ModelConfig | None = None,
                 jobs: int = 1) -> list[CampaignEvent]:
    """Run all events; results are ordered by event id regardless of jobs."""
    base = cfg if cfg is not None else default_config()
    base = apply_overrides(base, campaign.overrides)
    work = [(campaign, base, idx, v, r, p)
            for idx, v, r, p in event_parameters(campaign)]
    if jobs <= 1:
        return [_run_event(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_event, work, chunksize=4))


def write_campaign_csv(events: Iterable[CampaignEvent], path: str) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(CAMPAIGN_CSV_COLUMNS) + "\n")
        for ev in events:
            fh.write(ev.csv_row() + "\n")
