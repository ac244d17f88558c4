// Console entry point: wires the gateway client, the session store and
// the canvas charts to the static page. All numbers shown here come from
// the gateway; the console never recomputes physics.

import { CommandRejected, Gateway } from "./api.js";
import { PhaseChart, StripChart } from "./charts.js";
import { ConnState, Session, pump } from "./session.js";
import { TelemetryFrame } from "./types.js";

const POWER_PRESETS_DBM = [-54, -35, -20, -10, -5, 0, 5];

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

function logLine(text: string): void {
    const log = el<HTMLPreElement>("log");
    log.textContent += text + "\n";
    log.scrollTop = log.scrollHeight;
}

function fmtT(t: number): string {
    return t >= 3600 ? `${(t / 3600).toFixed(2)} h` : `${t.toFixed(0)} s`;
}

async function start(): Promise<void> {
    const apiBase = new URLSearchParams(location.search).get("api")
        ?? "http://127.0.0.1:8777";
    const gw = new Gateway(apiBase);
    const info = await gw.scenario();

    el("scenario-name").textContent =
        `${info.name}  (seed ${info.seed}, dt ${info.dt} s, ${info.duration_s} s)`;

    const session = new Session();
    const thickness = new StripChart(
        el<HTMLCanvasElement>("chart-thickness"), "local film thickness", "nm");
    thickness.addSeries({
        label: "d_local", color: "#49c078",
        pick: () => session.series(f => f.d_local_m * 1e9),
    });
    const temperature = new StripChart(
        el<HTMLCanvasElement>("chart-temperature"), "cell temperature", "K");
    temperature.addSeries({
        label: "T_cell", color: "#e8a13c",
        pick: () => session.series(f => f.T_cell_K),
    });
    temperature.addSeries({
        label: "T_set", color: "#6b7a94",
        pick: () => session.series(f => f.T_set_K),
    });
    const shift = new StripChart(
        el<HTMLCanvasElement>("chart-shift"), "corrected frequency shift", "kHz");
    shift.addSeries({
        label: "df_corr", color: "#5a9fd4",
        pick: () => session.series(f => f.df_corr_Hz / 1e3),
    });
    const phase = new PhaseChart(
        el<HTMLCanvasElement>("chart-phase"),
        info.phase_boundary.points, info.phase_boundary.triple);

    let redrawQueued = false;
    const redraw = () => {
        redrawQueued = false;
        thickness.draw();
        temperature.draw();
        shift.draw();
        phase.draw();
    };
    const queueRedraw = () => {
        if (!redrawQueued) {
            redrawQueued = true;
            requestAnimationFrame(redraw);
        }
    };
    window.addEventListener("resize", queueRedraw);

    session.onFrame((f: TelemetryFrame) => {
        phase.push({ T_K: f.T_cell_K, P_Pa: f.P_Pa });
        el("status-t").textContent = fmtT(f.t_s);
        el("status-phase").textContent = f.phase;
        el("status-power").textContent = `${f.power_dBm.toFixed(1)} dBm`;
        el("status-d").textContent = `${(f.d_local_m * 1e9).toFixed(1)} nm`;
        for (const flag of f.flags) {
            logLine(`[t=${f.t_s.toFixed(1)} s] event ${flag}`);
        }
        queueRedraw();
    });

    const send = async (kind: string, args: Record<string, number>) => {
        try {
            const ack = await gw.command(kind, args);
            const argText = Object.entries(args)
                .map(([k, v]) => `${k}=${v}`).join(" ");
            logLine(`[ack #${ack.seq}] ${ack.kind} ${argText} @ sim t=${ack.sim_t_s.toFixed(1)} s`);
        } catch (err) {
            if (err instanceof CommandRejected) logLine(`[rejected] ${err.detail}`);
            else logLine(`[error] ${String(err)}`);
        }
    };

    const presetBox = el("power-presets");
    for (const dbm of POWER_PRESETS_DBM) {
        const btn = document.createElement("button");
        btn.textContent = `${dbm} dBm`;
        btn.onclick = () => void send("set_power", { power_dbm: dbm });
        presetBox.appendChild(btn);
    }
    el<HTMLButtonElement>("power-send").onclick = () => {
        const v = parseFloat(el<HTMLInputElement>("power-custom").value);
        if (Number.isFinite(v)) void send("set_power", { power_dbm: v });
    };
    el<HTMLButtonElement>("ramp-send").onclick = () => {
        const rate = parseFloat(el<HTMLInputElement>("ramp-rate").value);
        const target = parseFloat(el<HTMLInputElement>("ramp-target").value);
        if (Number.isFinite(rate) && Number.isFinite(target)) {
            void send("set_ramp", { rate_K_per_min: rate, target_K: target });
        }
    };
    el<HTMLButtonElement>("hold-send").onclick = () => void send("hold", {});
    el<HTMLButtonElement>("inject-send").onclick = () => {
        const moles = parseFloat(el<HTMLInputElement>("inject-moles").value);
        const flow = parseFloat(el<HTMLInputElement>("inject-flow").value);
        if (Number.isFinite(moles) && Number.isFinite(flow)) {
            void send("inject", { moles, flow_sccm: flow });
        }
    };

    const connChip = el("status-conn");
    const onState = (s: ConnState) => {
        connChip.textContent = s;
        connChip.className = `chip conn-${s}`;
        if (s === "done") {
            logLine(`[run complete] ${session.frames.length} frames`);
            queueRedraw();
        }
    };

    await pump(gw, session, { strideS: info.stride_s, onState });
}

start().catch(err => {
    logLine(`[fatal] ${String(err)}`);
    const chip = document.getElementById("status-conn");
    if (chip) chip.textContent = "unreachable";
});
