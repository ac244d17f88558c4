// Shared test plumbing: fixture loading, a scriptable GatewayLike for
// session tests, and a fake fetch endpoint for exercising the real
// Gateway client over canned HTTP traffic.
//
// Fixtures are regenerated by scripts/export_console_fixtures.py in the
// repo root and are byte-identical to what the gateway serves.

import { readFileSync } from "node:fs";

import { FetchLike } from "../src/api.js";
import { GatewayLike } from "../src/session.js";
import { CommandAck, RunState, TelemetryFrame } from "../src/types.js";

export function fixtureText(name: string): string {
    return readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8");
}

export function fixtureLines(name: string): string[] {
    return fixtureText(name).split("\n").filter(l => l.length > 0);
}

export function fixtureFrames(name: string): TelemetryFrame[] {
    return fixtureLines(name).map(l => JSON.parse(l) as TelemetryFrame);
}

export function byteStream(text: string, chunkSize: number): ReadableStream<Uint8Array> {
    const bytes = new TextEncoder().encode(text);
    let offset = 0;
    return new ReadableStream<Uint8Array>({
        pull(controller) {
            if (offset >= bytes.length) {
                controller.close();
                return;
            }
            controller.enqueue(bytes.slice(offset, offset + chunkSize));
            offset += chunkSize;
        },
    });
}

function stateFor(frame: TelemetryFrame, status: "running" | "done"): RunState {
    return {
        t_s: frame.t_s, T_cell_K: frame.T_cell_K, T_set_K: frame.T_set_K,
        P_Pa: frame.P_Pa, f_res_Hz: frame.f_res_Hz, df_corr_Hz: frame.df_corr_Hz,
        power_dBm: frame.power_dBm, d_local_m: frame.d_local_m, phase: frame.phase,
        n_total_mol: frame.n_gas_mol + frame.n_liquid_mol + frame.n_solid_mol,
        dT_local_K: frame.dT_local_K, scenario: "fixture", status, pacing: 0,
    };
}

export interface StreamSegment {
    /** Frames to deliver on this connection. */
    serve: number;
    /** End the connection with an error instead of a clean close. */
    fail?: boolean;
    /** Frames published while the client is away (history-only). */
    skipAfter?: number;
}

/**
 * Replays fixture frames with the gateway's visibility rules: the stream
 * hands out frames as they are published, history returns everything
 * published so far at or after from_t.
 */
export class MockGateway implements GatewayLike {
    published: number;
    historyCalls: number[] = [];
    streamCalls = 0;
    private segmentIndex = 0;

    constructor(private frames: TelemetryFrame[],
                private segments: StreamSegment[],
                publishedAtStart = 1) {
        this.published = publishedAtStart;
    }

    private finished(): boolean {
        return this.segmentIndex >= this.segments.length;
    }

    async history(fromT = 0): Promise<TelemetryFrame[]> {
        this.historyCalls.push(fromT);
        return this.frames.slice(0, this.published).filter(f => f.t_s >= fromT);
    }

    async state(): Promise<RunState> {
        const idx = Math.max(0, this.published - 1);
        return stateFor(this.frames[idx], this.finished() ? "done" : "running");
    }

    async stream(): Promise<AsyncIterable<TelemetryFrame>> {
        this.streamCalls++;
        if (this.finished()) {
            return (async function* () {})();
        }
        const segment = this.segments[this.segmentIndex++];
        const self = this;
        return (async function* () {
            const end = Math.min(self.published + segment.serve, self.frames.length);
            while (self.published < end) {
                yield self.frames[self.published++];
            }
            if (segment.skipAfter) {
                self.published = Math.min(self.published + segment.skipAfter,
                                          self.frames.length);
            }
            if (segment.fail) throw new Error("connection lost");
        })();
    }
}

export interface FakeServerOptions {
    /** Chunk size for the stream body, to shake out line reassembly. */
    chunkSize?: number;
    /** Reject this many /command fetches with a network error first. */
    commandNetworkFailures?: number;
    /** Respond 400 with this detail for every /command. */
    rejectCommandsWith?: string;
}

/** Canned HTTP surface matching the gateway routes, driven through fetch. */
export class FakeServer {
    commandBodies: string[] = [];
    private acks = new Map<number, CommandAck>();
    private streamsServed = 0;

    constructor(private frames: TelemetryFrame[],
                private lines: string[],
                private opts: FakeServerOptions = {}) {}

    fetch: FetchLike = async (url, init) => {
        const path = new URL(url).pathname;
        const query = new URL(url).searchParams;
        switch (path) {
            case "/state": {
                const status = this.streamsServed > 0 ? "done" : "running";
                const last = this.frames[this.frames.length - 1];
                return Response.json(stateFor(last, status));
            }
            case "/history": {
                const fromT = parseFloat(query.get("from_t") ?? "0");
                const records = this.frames.filter(f => f.t_s >= fromT);
                return Response.json({ count: records.length, records });
            }
            case "/stream": {
                this.streamsServed++;
                const text = this.lines.join("\n") + "\n";
                return new Response(byteStream(text, this.opts.chunkSize ?? 1024),
                                    { headers: { "content-type": "application/x-ndjson" } });
            }
            case "/command": {
                if ((this.opts.commandNetworkFailures ?? 0) > 0) {
                    this.opts.commandNetworkFailures!--;
                    throw new TypeError("fetch failed");
                }
                if (this.opts.rejectCommandsWith) {
                    return Response.json({ detail: this.opts.rejectCommandsWith },
                                         { status: 400 });
                }
                const body = String(init?.body);
                this.commandBodies.push(body);
                const cmd = JSON.parse(body) as
                    { seq: number; kind: string; args: Record<string, number> };
                const cached = this.acks.get(cmd.seq);
                if (cached) return Response.json(cached);
                const ack: CommandAck = {
                    seq: cmd.seq, accepted: true, kind: cmd.kind,
                    sim_t_s: this.frames[this.frames.length - 1].t_s,
                };
                this.acks.set(cmd.seq, ack);
                return Response.json(ack);
            }
            default:
                return new Response("not found", { status: 404 });
        }
    };
}
