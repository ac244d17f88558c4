// Wire types. Field names mirror the gateway JSON exactly, including the
// mixed-case power key, so frames pass through JSON.parse untouched.

export interface TelemetryFrame {
    t_s: number;
    T_cell_K: number;
    T_set_K: number;
    P_Pa: number;
    f_res_Hz: number;
    df_corr_Hz: number;
    power_dBm: number;
    d_local_m: number;
    phase: string;
    n_gas_mol: number;
    n_liquid_mol: number;
    n_solid_mol: number;
    dT_local_K: number;
    flags: string[];
}

export interface RunState {
    t_s: number;
    T_cell_K: number;
    T_set_K: number;
    P_Pa: number;
    f_res_Hz: number;
    df_corr_Hz: number;
    power_dBm: number;
    d_local_m: number;
    phase: string;
    n_total_mol: number;
    dT_local_K: number;
    scenario: string;
    status: "running" | "done";
    pacing: number;
}

export interface CommandAck {
    seq: number;
    accepted: boolean;
    kind: string;
    sim_t_s: number;
}

export interface BoundaryPoint {
    T_K: number;
    P_Pa: number;
    branch: string;
}

export interface PhaseBoundary {
    triple: { T_K: number; P_Pa: number };
    points: BoundaryPoint[];
}

export interface ScenarioCommand {
    t_s: number;
    kind: string;
    [arg: string]: number | string;
}

export interface ScenarioInfo {
    name: string;
    seed: number;
    duration_s: number;
    dt: number;
    stride_s: number;
    initial: { T_K: number; n_mol: number; power_dbm: number };
    commands: ScenarioCommand[];
    csv_columns: string[];
    config: Record<string, unknown>;
    phase_boundary: PhaseBoundary;
}
