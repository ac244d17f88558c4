// Canvas strip charts. No chart library: the panels are simple enough
// (one or two series against time, fixed-format axes) that hand-rolled
// drawing keeps the console dependency-free. The scaling math lives in
// exported helpers so it can be tested without a DOM.

export interface Range {
    min: number;
    max: number;
}

/** Padded data range; degenerate and empty inputs get a unit window. */
export function dataRange(values: Iterable<number>, padFrac = 0.08): Range {
    let min = Infinity;
    let max = -Infinity;
    for (const v of values) {
        if (!Number.isFinite(v)) continue;
        if (v < min) min = v;
        if (v > max) max = v;
    }
    if (min > max) return { min: 0, max: 1 };
    if (min === max) {
        const pad = Math.abs(min) > 0 ? Math.abs(min) * padFrac : 0.5;
        return { min: min - pad, max: max + pad };
    }
    const pad = (max - min) * padFrac;
    return { min: min - pad, max: max + pad };
}

/** Map a value into pixel space (y axes pass pix0 > pix1 to flip). */
export function scale(v: number, r: Range, pix0: number, pix1: number): number {
    const f = (v - r.min) / (r.max - r.min);
    return pix0 + f * (pix1 - pix0);
}

/** Round tick positions covering the range, at most n+1 of them. */
export function niceTicks(r: Range, n = 5): number[] {
    const span = r.max - r.min;
    if (!(span > 0) || !Number.isFinite(span)) return [r.min];
    const raw = span / n;
    const mag = Math.pow(10, Math.floor(Math.log10(raw)));
    const norm = raw / mag;
    // Round to the nearest of 1/2/5 rather than up, or sparse spans like
    // 0..11 end up with only a couple of gridlines.
    const step = (norm < 1.5 ? 1 : norm < 3 ? 2 : norm < 7 ? 5 : 10) * mag;
    const first = Math.ceil(r.min / step) * step;
    const ticks: number[] = [];
    for (let v = first; v <= r.max + step * 1e-9; v += step) {
        ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return ticks;
}

export function formatTick(v: number): string {
    const a = Math.abs(v);
    if (a >= 1e5 || (a > 0 && a < 1e-3)) return v.toExponential(1);
    return parseFloat(v.toPrecision(6)).toString();
}

const AXIS = "#3a4456";
const GRID = "#232a38";
const TEXT = "#8b98ad";
const MARGIN = { left: 64, right: 12, top: 10, bottom: 22 };

interface SeriesSpec {
    label: string;
    color: string;
    pick: () => { t: number[]; y: number[] };
}

export class StripChart {
    private series: SeriesSpec[] = [];

    constructor(private canvas: HTMLCanvasElement,
                private title: string,
                private unit: string,
                private logY = false) {}

    addSeries(spec: SeriesSpec): void {
        this.series.push(spec);
    }

    draw(): void {
        const dpr = window.devicePixelRatio || 1;
        const w = this.canvas.clientWidth;
        const h = this.canvas.clientHeight;
        if (this.canvas.width !== w * dpr) this.canvas.width = w * dpr;
        if (this.canvas.height !== h * dpr) this.canvas.height = h * dpr;
        const ctx = this.canvas.getContext("2d");
        if (!ctx) return;
        ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
        ctx.clearRect(0, 0, w, h);

        const data = this.series.map(s => {
            const { t, y } = s.pick();
            const ys = this.logY ? y.map(v => (v > 0 ? Math.log10(v) : NaN)) : y;
            return { spec: s, t, ys };
        });
        const allT: number[] = [];
        const allY: number[] = [];
        for (const d of data) {
            allT.push(...(d.t.length > 1 ? [d.t[0], d.t[d.t.length - 1]] : d.t));
            for (const v of d.ys) if (Number.isFinite(v)) allY.push(v);
        }
        const rx = dataRange(allT, 0);
        const ry = dataRange(allY);
        const x0 = MARGIN.left, x1 = w - MARGIN.right;
        const y0 = h - MARGIN.bottom, y1 = MARGIN.top;

        ctx.strokeStyle = GRID;
        ctx.fillStyle = TEXT;
        ctx.font = "11px ui-monospace, monospace";
        ctx.lineWidth = 1;
        for (const tick of niceTicks(ry, 4)) {
            const py = scale(tick, ry, y0, y1);
            ctx.beginPath();
            ctx.moveTo(x0, py);
            ctx.lineTo(x1, py);
            ctx.stroke();
            const label = this.logY ? `1e${formatTick(tick)}` : formatTick(tick);
            ctx.fillText(label, 4, py + 3);
        }
        for (const tick of niceTicks(rx, 6)) {
            const px = scale(tick, rx, x0, x1);
            ctx.beginPath();
            ctx.moveTo(px, y0);
            ctx.lineTo(px, y1);
            ctx.stroke();
            ctx.fillText(formatTick(tick), px + 2, h - 8);
        }
        ctx.strokeStyle = AXIS;
        ctx.strokeRect(x0, y1, x1 - x0, y0 - y1);
        ctx.fillText(`${this.title} [${this.unit}]`, x0 + 6, y1 + 12);

        for (const d of data) {
            ctx.strokeStyle = d.spec.color;
            ctx.lineWidth = 1.5;
            ctx.beginPath();
            let started = false;
            for (let i = 0; i < d.t.length; i++) {
                const v = d.ys[i];
                if (!Number.isFinite(v)) { started = false; continue; }
                const px = scale(d.t[i], rx, x0, x1);
                const py = scale(v, ry, y0, y1);
                if (started) ctx.lineTo(px, py);
                else { ctx.moveTo(px, py); started = true; }
            }
            ctx.stroke();
        }
    }
}

export interface PhasePoint {
    T_K: number;
    P_Pa: number;
}

export class PhaseChart {
    private trajectory: PhasePoint[] = [];

    constructor(private canvas: HTMLCanvasElement,
                private boundary: PhasePoint[],
                private triple: PhasePoint) {}

    push(p: PhasePoint): void {
        this.trajectory.push(p);
    }

    setTrajectory(points: PhasePoint[]): void {
        this.trajectory = points;
    }

    draw(): void {
        const dpr = window.devicePixelRatio || 1;
        const w = this.canvas.clientWidth;
        const h = this.canvas.clientHeight;
        if (this.canvas.width !== w * dpr) this.canvas.width = w * dpr;
        if (this.canvas.height !== h * dpr) this.canvas.height = h * dpr;
        const ctx = this.canvas.getContext("2d");
        if (!ctx) return;
        ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
        ctx.clearRect(0, 0, w, h);

        // Pressure on a log axis; clamp to 1 Pa so the empty cell still plots.
        const logP = (p: number) => Math.log10(Math.max(p, 1));
        const rx = dataRange(this.boundary.map(b => b.T_K), 0.02);
        const ry = dataRange(this.boundary.map(b => logP(b.P_Pa)), 0.05);
        const x0 = MARGIN.left, x1 = w - MARGIN.right;
        const y0 = h - MARGIN.bottom, y1 = MARGIN.top;

        ctx.strokeStyle = GRID;
        ctx.fillStyle = TEXT;
        ctx.font = "11px ui-monospace, monospace";
        for (const tick of niceTicks(ry, 4)) {
            const py = scale(tick, ry, y0, y1);
            ctx.beginPath(); ctx.moveTo(x0, py); ctx.lineTo(x1, py); ctx.stroke();
            ctx.fillText(`1e${formatTick(tick)}`, 4, py + 3);
        }
        for (const tick of niceTicks(rx, 6)) {
            const px = scale(tick, rx, x0, x1);
            ctx.beginPath(); ctx.moveTo(px, y0); ctx.lineTo(px, y1); ctx.stroke();
            ctx.fillText(formatTick(tick), px + 2, h - 8);
        }
        ctx.strokeStyle = AXIS;
        ctx.strokeRect(x0, y1, x1 - x0, y0 - y1);
        ctx.fillText("coexistence P(T) [Pa]", x0 + 6, y1 + 12);

        ctx.strokeStyle = "#5a7fbf";
        ctx.lineWidth = 1.5;
        ctx.beginPath();
        this.boundary.forEach((b, i) => {
            const px = scale(b.T_K, rx, x0, x1);
            const py = scale(logP(b.P_Pa), ry, y0, y1);
            if (i) ctx.lineTo(px, py); else ctx.moveTo(px, py);
        });
        ctx.stroke();

        const tx = scale(this.triple.T_K, rx, x0, x1);
        const ty = scale(logP(this.triple.P_Pa), ry, y0, y1);
        ctx.fillStyle = "#c9a227";
        ctx.beginPath(); ctx.arc(tx, ty, 3, 0, 2 * Math.PI); ctx.fill();

        ctx.strokeStyle = "#49c078";
        ctx.lineWidth = 1.2;
        ctx.beginPath();
        let started = false;
        for (const p of this.trajectory) {
            if (p.T_K < rx.min || p.T_K > rx.max) { started = false; continue; }
            const px = scale(p.T_K, rx, x0, x1);
            const py = scale(logP(p.P_Pa), ry, y0, y1);
            if (started) ctx.lineTo(px, py);
            else { ctx.moveTo(px, py); started = true; }
        }
        ctx.stroke();

        const last = this.trajectory[this.trajectory.length - 1];
        if (last && last.T_K >= rx.min && last.T_K <= rx.max) {
            const px = scale(last.T_K, rx, x0, x1);
            const py = scale(logP(last.P_Pa), ry, y0, y1);
            ctx.fillStyle = "#e8eef7";
            ctx.beginPath(); ctx.arc(px, py, 3.5, 0, 2 * Math.PI); ctx.fill();
        }
    }
}
