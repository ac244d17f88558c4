// Client-side run reconstruction. Frames arrive from the live stream and
// from /history backfills; the session keeps one strictly time-ordered
// copy of each so a client that dropped and rejoined ends up with the
// same sequence as one that never disconnected. No physics happens here,
// the frames are displayed as served.

import { RunState, TelemetryFrame } from "./types.js";

export interface GatewayLike {
    history(fromT?: number): Promise<TelemetryFrame[]>;
    state(): Promise<RunState>;
    stream(signal?: AbortSignal): Promise<AsyncIterable<TelemetryFrame>>;
}

export type ConnState = "connecting" | "live" | "reconnecting" | "done";

export class Session {
    readonly frames: TelemetryFrame[] = [];
    private listeners: Array<(f: TelemetryFrame) => void> = [];

    onFrame(cb: (f: TelemetryFrame) => void): void {
        this.listeners.push(cb);
    }

    lastT(): number {
        const n = this.frames.length;
        return n ? this.frames[n - 1].t_s : -Infinity;
    }

    /** Append if newer than everything held; duplicates from overlapping
     *  history/stream windows are dropped by timestamp. */
    ingest(frame: TelemetryFrame): boolean {
        if (!(frame.t_s > this.lastT())) return false;
        this.frames.push(frame);
        for (const cb of this.listeners) cb(frame);
        return true;
    }

    ingestAll(batch: TelemetryFrame[]): number {
        let added = 0;
        for (const f of batch) if (this.ingest(f)) added++;
        return added;
    }

    /** Column extraction for the charts. */
    series(pick: (f: TelemetryFrame) => number): { t: number[]; y: number[] } {
        const t: number[] = [];
        const y: number[] = [];
        for (const f of this.frames) {
            t.push(f.t_s);
            y.push(pick(f));
        }
        return { t, y };
    }
}

export interface PumpOptions {
    strideS: number;
    retryMs?: number;
    signal?: AbortSignal;
    onState?: (s: ConnState) => void;
    sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>(r => setTimeout(r, ms));

/**
 * Drive a session until the run completes. Subscribes to the stream first,
 * then backfills history, so no frame published in between is lost; after
 * any disconnect it backfills from half a stride past the last held frame
 * (the server filter is >=, so a whole-stride cursor would refetch it).
 */
export async function pump(gw: GatewayLike, session: Session, opts: PumpOptions): Promise<void> {
    const retryMs = opts.retryMs ?? 1000;
    const sleep = opts.sleep ?? defaultSleep;
    const setState = opts.onState ?? (() => {});
    const backfill = async () => {
        const from = session.frames.length ? session.lastT() + opts.strideS / 2 : 0;
        session.ingestAll(await gw.history(from));
    };

    setState("connecting");
    while (!opts.signal?.aborted) {
        try {
            const live = await gw.stream(opts.signal);
            await backfill();
            setState("live");
            for await (const frame of live) {
                if (frame.t_s > session.lastT() + 1.5 * opts.strideS) {
                    // Gap: the server dropped us from the queue faster than
                    // the stream closed. Fill it before going on.
                    await backfill();
                }
                session.ingest(frame);
            }
        } catch {
            // transport error; fall through to the status probe
        }
        try {
            const st = await gw.state();
            if (st.status === "done") {
                await backfill();
                setState("done");
                return;
            }
        } catch {
            // gateway unreachable, retry below
        }
        setState("reconnecting");
        await sleep(retryMs);
    }
}
