// Gateway client. Plain fetch against the five HTTP endpoints; the
// transport is injectable so tests can replay canned traffic.

import { CommandAck, RunState, ScenarioInfo, TelemetryFrame } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Server-side rejection (bad command arguments). Not retryable. */
export class CommandRejected extends Error {
    constructor(readonly detail: string) {
        super(`command rejected: ${detail}`);
    }
}

/** Split an NDJSON body into parsed objects, tolerating arbitrary chunking. */
export async function* ndjson(body: ReadableStream<Uint8Array>): AsyncGenerator<unknown> {
    const reader = body.getReader();
    const decoder = new TextDecoder();
    let buf = "";
    try {
        while (true) {
            const { done, value } = await reader.read();
            if (done) break;
            buf += decoder.decode(value, { stream: true });
            let nl;
            while ((nl = buf.indexOf("\n")) >= 0) {
                const line = buf.slice(0, nl).trim();
                buf = buf.slice(nl + 1);
                if (line) yield JSON.parse(line);
            }
        }
        buf += decoder.decode();
        if (buf.trim()) yield JSON.parse(buf);
    } finally {
        reader.releaseLock();
    }
}

export class Gateway {
    private nextSeq = 1;

    constructor(readonly base: string,
                private fetchFn: FetchLike = (url, init) => fetch(url, init)) {}

    private async getJson<T>(path: string): Promise<T> {
        const res = await this.fetchFn(this.base + path);
        if (!res.ok) throw new Error(`GET ${path}: HTTP ${res.status}`);
        return res.json() as Promise<T>;
    }

    state(): Promise<RunState> {
        return this.getJson<RunState>("/state");
    }

    scenario(): Promise<ScenarioInfo> {
        return this.getJson<ScenarioInfo>("/scenario");
    }

    async history(fromT = 0): Promise<TelemetryFrame[]> {
        const path = `/history?from_t=${encodeURIComponent(fromT)}`;
        const out = await this.getJson<{ count: number; records: TelemetryFrame[] }>(path);
        return out.records;
    }

    /**
     * Send a control command. The sequence number is assigned here and the
     * exact body is retried once on transport failure; the server treats a
     * repeated seq as already applied and returns the original ack, so a
     * retry can never double-fire the command.
     */
    async command(kind: string, args: Record<string, number> = {}): Promise<CommandAck> {
        const body = JSON.stringify({ seq: this.nextSeq++, kind, args });
        for (let attempt = 0; ; attempt++) {
            try {
                const res = await this.fetchFn(this.base + "/command", {
                    method: "POST",
                    headers: { "content-type": "application/json" },
                    body,
                });
                if (res.status === 400) {
                    const payload = await res.json() as { detail?: string };
                    throw new CommandRejected(payload.detail ?? "invalid command");
                }
                if (!res.ok) throw new Error(`POST /command: HTTP ${res.status}`);
                return await res.json() as CommandAck;
            } catch (err) {
                if (err instanceof CommandRejected || attempt >= 1) throw err;
            }
        }
    }

    /**
     * Open the NDJSON stream. The request (and so the server-side
     * subscription) happens before this resolves; callers backfill history
     * afterwards knowing nothing published in between can be missed.
     */
    async stream(signal?: AbortSignal): Promise<AsyncGenerator<TelemetryFrame>> {
        const res = await this.fetchFn(this.base + "/stream", { signal });
        if (!res.ok) throw new Error(`GET /stream: HTTP ${res.status}`);
        const body = res.body;
        if (!body) throw new Error("GET /stream: empty body");
        return (async function* () {
            for await (const item of ndjson(body)) {
                yield item as TelemetryFrame;
            }
        })();
    }
}
