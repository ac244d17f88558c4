// The drive-power workflow against recorded gateway traffic: a liquid
// film held at 24.7 K with the drive stepped to 5 dBm at t=60 s. The
// frames come from the real simulator, so the thinning the chart shows
// is the served physics, not anything computed here.

import { describe, expect, it } from "vitest";

import { Gateway } from "../src/api.js";
import { Session, pump } from "../src/session.js";
import { FakeServer, fixtureFrames, fixtureLines } from "./helpers.js";

const FRAMES = fixtureFrames("relaxation_stream.ndjson");
const LINES = fixtureLines("relaxation_stream.ndjson");

describe("set_power during a liquid hold", () => {
    it("acks match the sent command and the chart shows the thinning", async () => {
        const server = new FakeServer(FRAMES, LINES, { chunkSize: 256 });
        const gw = new Gateway("http://gw", server.fetch);
        const session = new Session();

        // Replay the run through the production client path.
        await pump(gw, session, { strideS: 1.0, retryMs: 0, sleep: async () => {} });
        expect(session.frames.length).toBe(LINES.length);

        // Operator raises the drive; the ack mirrors seq and kind.
        const ack = await gw.command("set_power", { power_dbm: 5.0 });
        expect(ack.seq).toBe(1);
        expect(ack.kind).toBe("set_power");
        expect(ack.accepted).toBe(true);
        const sent = JSON.parse(server.commandBodies[0]);
        expect(sent.seq).toBe(ack.seq);
        expect(sent.args).toEqual({ power_dbm: 5.0 });

        // The frames record the power step landing at t=60 s.
        const at = new Map(session.frames.map(f => [f.t_s, f]));
        expect(at.get(59.0)!.power_dBm).toBe(-35.0);
        expect(at.get(61.0)!.power_dBm).toBe(5.0);

        // Thickness chart: flat liquid level before the step, a clear
        // thinning transient after it (beyond any single-frame jitter).
        const { t, y } = session.series(f => f.d_local_m);
        const before = y.filter((_, i) => t[i] >= 30 && t[i] < 60);
        const after = y.filter((_, i) => t[i] >= 60);
        const level = before[before.length - 1];
        const beforeSpread = Math.max(...before) - Math.min(...before);
        const dip = level - Math.min(...after);
        expect(dip).toBeGreaterThan(0.005 * level);
        expect(dip).toBeGreaterThan(20 * beforeSpread);
        // The film settles toward a thinner hot-spot level, monotonically.
        for (let i = 1; i < after.length; i++) {
            expect(after[i]).toBeLessThanOrEqual(after[i - 1] + 1e-15);
        }
    });

    it("repeated seq returns the cached ack without a second application", async () => {
        const server = new FakeServer(FRAMES, LINES);
        const gw = new Gateway("http://gw", server.fetch);
        const first = await gw.command("set_power", { power_dbm: 5.0 });

        // A second client retrying the same body must get the same ack.
        const replay = await server.fetch("http://gw/command", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ seq: first.seq, kind: "set_power",
                                   args: { power_dbm: 5.0 } }),
        });
        expect(await replay.json()).toEqual(first);
    });
});
