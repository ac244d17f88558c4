import { describe, expect, it } from "vitest";

import { Session, pump } from "../src/session.js";
import { MockGateway, fixtureFrames, fixtureLines } from "./helpers.js";

const FRAMES = fixtureFrames("quench_stream.ndjson");
const FRAMES_SERVED = fixtureLines("quench_stream.ndjson").length;

const instant = async () => {};

function chartKey(session: Session): string {
    return JSON.stringify(session.frames.map(
        f => [f.t_s, f.d_local_m, f.T_cell_K, f.df_corr_Hz]));
}

describe("Session", () => {
    it("keeps frames strictly ordered and drops duplicates", () => {
        const s = new Session();
        expect(s.ingest(FRAMES[0])).toBe(true);
        expect(s.ingest(FRAMES[1])).toBe(true);
        expect(s.ingest(FRAMES[1])).toBe(false);
        expect(s.ingest(FRAMES[0])).toBe(false);
        expect(s.ingestAll(FRAMES.slice(0, 5))).toBe(3);
        expect(s.frames.map(f => f.t_s)).toEqual([0, 1, 2, 3, 4]);
    });

    it("notifies listeners once per accepted frame", () => {
        const s = new Session();
        const seen: number[] = [];
        s.onFrame(f => seen.push(f.t_s));
        s.ingestAll(FRAMES.slice(0, 3));
        s.ingestAll(FRAMES.slice(0, 6));
        expect(seen).toEqual([0, 1, 2, 3, 4, 5]);
    });
});

describe("quench replay", () => {
    it("live stream yields one chart point per frame served, thickness monotone", async () => {
        const gw = new MockGateway(FRAMES, [{ serve: FRAMES.length }]);
        const session = new Session();
        await pump(gw, session, { strideS: 1.0, retryMs: 0, sleep: instant });

        const { t, y } = session.series(f => f.d_local_m * 1e9);
        expect(t.length).toBe(FRAMES_SERVED);
        for (let i = 1; i < y.length; i++) {
            expect(y[i]).toBeGreaterThanOrEqual(y[i - 1]);
        }
        expect(y[0]).toBe(0);
        expect(y[y.length - 1]).toBeGreaterThan(1);
    });

    it("joining a finished run backfills every frame from history", async () => {
        const gw = new MockGateway(FRAMES, [], FRAMES.length);
        const session = new Session();
        const states: string[] = [];
        await pump(gw, session, {
            strideS: 1.0, retryMs: 0, sleep: instant, onState: s => states.push(s),
        });
        expect(session.frames.length).toBe(FRAMES_SERVED);
        expect(states[states.length - 1]).toBe("done");
    });
});

describe("reconnect", () => {
    it("drop and rejoin reconstructs the charts point-for-point", async () => {
        const uninterrupted = new Session();
        await pump(new MockGateway(FRAMES, [{ serve: FRAMES.length }]),
                   uninterrupted, { strideS: 1.0, retryMs: 0, sleep: instant });

        // 300 frames, a dropped connection, 40 frames published while the
        // client is away, then a stream that serves out the rest.
        const gw = new MockGateway(FRAMES, [
            { serve: 300, fail: true, skipAfter: 40 },
            { serve: FRAMES.length },
        ]);
        const rejoined = new Session();
        const states: string[] = [];
        await pump(gw, rejoined, {
            strideS: 1.0, retryMs: 0, sleep: instant, onState: s => states.push(s),
        });

        expect(states).toContain("reconnecting");
        expect(gw.streamCalls).toBe(2);
        expect(rejoined.frames.length).toBe(uninterrupted.frames.length);
        expect(chartKey(rejoined)).toBe(chartKey(uninterrupted));
    });

    it("mid-stream gaps trigger a backfill instead of a hole", async () => {
        // Serve 10, silently lose 25 (queue overflow path), then resume in
        // the same run: the pump notices the jump and fills from history.
        const gw = new MockGateway(FRAMES, [
            { serve: 10, skipAfter: 25 },
            { serve: FRAMES.length },
        ]);
        const session = new Session();
        await pump(gw, session, { strideS: 1.0, retryMs: 0, sleep: instant });
        expect(session.frames.length).toBe(FRAMES_SERVED);
        expect(session.frames.map(f => f.t_s))
            .toEqual(FRAMES.map(f => f.t_s));
    });

    it("keeps retrying while the gateway is unreachable", async () => {
        const gw = new MockGateway(FRAMES, [
            { serve: 50, fail: true },
            { serve: 0, fail: true },
            { serve: FRAMES.length },
        ]);
        const session = new Session();
        await pump(gw, session, { strideS: 1.0, retryMs: 0, sleep: instant });
        expect(gw.streamCalls).toBe(3);
        expect(session.frames.length).toBe(FRAMES_SERVED);
    });
});
