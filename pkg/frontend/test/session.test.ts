/**
 * Scripted end-to-end session against the real HTTP service: a 2-deal
 * session is driven through the UI client code (SessionClient +
 * SessionFlow), covering all 16 play-throughs with blindness
 * assertions on every response, then the summary reveal.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, SessionClient } from "../src/api.js";
import type { PlayView } from "../src/api.js";
import { SessionFlow } from "../src/flow.js";
import { PASS, buildPalette } from "../src/table.js";

const PORT = 8930 + (process.pid % 50);
const BASE = `http://127.0.0.1:${PORT}`;

const PLAY_VIEW_KEYS = [
  "session", "play", "deal_index", "seat", "hand", "history", "version",
  "to_act", "legal_calls", "complete", "ns_score",
].sort();

let server: ChildProcess;

async function waitForServer(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const res = await fetch(`${BASE}/sessions/nonexistent`);
      if (res.status === 404) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      throw new Error("service did not come up in time");
    }
    await new Promise((resolve) => setTimeout(resolve, 500));
  }
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-c", `from bidkit.service import serve; serve(port=${PORT})`],
    { stdio: "ignore" },
  );
  // First import compiles the solver kernels, which takes a while.
  await waitForServer(300_000);
}, 330_000);

afterAll(() => {
  server?.kill();
});

/** Assert that a play view leaks nothing: constant field shape, only
 * the human's own 13 cards, and no partner-identity vocabulary
 * anywhere in the payload. */
function assertBlind(view: PlayView): void {
  expect(Object.keys(view).sort()).toEqual(PLAY_VIEW_KEYS);
  expect(view.hand).toHaveLength(13);
  const raw = JSON.stringify(view).toLowerCase();
  for (const word of ["agent", "baseline", "partner", "heuristic"]) {
    expect(raw).not.toContain(word);
  }
}

describe("scripted 2-deal session", () => {
  const client = new SessionClient(BASE);

  it(
    "runs 16 blind play-throughs and then reveals the summary",
    { timeout: 600_000 },
    async () => {
      const session = await client.createSession({ deal_count: 2, seed: 5 });
      expect(session.plays).toBe(16);
      expect(session.state).toBe("active");
      const flow = new SessionFlow(client, session.session);

      // Summary is refused while any play-through remains.
      await expect(client.getSummary(session.session)).rejects.toSatisfy(
        (err: unknown) =>
          err instanceof ApiError &&
          err.status === 409 &&
          Array.isArray((err.detail as { remaining_plays: number[] })
            .remaining_plays),
      );

      // Play-throughs must run in order.
      await expect(
        client.postCall(session.session, 7, PASS),
      ).rejects.toSatisfy(
        (err: unknown) => err instanceof ApiError && err.tableMovedOn,
      );

      const seatByPlay = new Map<number, string>();
      let checkedRejections = false;
      await flow.runScripted(
        (view) => {
          // Every enabled palette button is a call the server listed as
          // legal; everything else is disabled.
          const palette = buildPalette(view.legal_calls);
          const enabled = [palette.pass, palette.double, palette.redouble,
                           ...palette.ladder]
            .filter((b) => b.enabled)
            .map((b) => b.call)
            .sort((a, b) => a - b);
          expect(enabled).toEqual([...view.legal_calls].sort((a, b) => a - b));
          // Open 1C when dealing, else pass.
          if (view.history.length === 0 && view.legal_calls.includes(3)) {
            return 3;
          }
          return PASS;
        },
        (view) => {
          assertBlind(view);
          seatByPlay.set(view.play, view.seat);
          if (view.complete) {
            expect(typeof view.ns_score).toBe("number");
          }
        },
      );

      // Stale-version and illegal-call rejections, checked on a fresh
      // session so the main one stays untouched.
      {
        const extra = await client.createSession({ deal_count: 1, seed: 9 });
        const eflow = new SessionFlow(client, extra.session);
        const view = await eflow.waitForTurn(0);
        const stale = await eflow.submitCall(
          { ...view, version: view.version + 3 },
          PASS,
        );
        expect(stale.tableMovedOn).toBe(true);
        assertBlind(stale.view);
        const illegalBid = stale.view.legal_calls.includes(3) ? 2 : 3;
        const refused = await eflow.submitCall(stale.view, illegalBid);
        expect(refused.tableMovedOn).toBe(false);
        expect(refused.legalCalls).toEqual(stale.view.legal_calls);
        checkedRejections = true;
      }

      // All 16 play-throughs completed; each seat was played 4 times
      // (twice per deal — once with each hidden partner, order unknown).
      const done = await client.getSession(session.session);
      expect(done.state).toBe("complete");
      expect(done.completed).toBe(16);
      expect(seatByPlay.size).toBe(16);
      const seats = [...seatByPlay.values()];
      for (const seat of ["N", "E", "S", "W"]) {
        expect(seats.filter((s) => s === seat)).toHaveLength(4);
      }
      expect(checkedRejections).toBe(true);

      // The summary finally reveals assignments and a finite mean/SEM.
      const summary = await client.getSummary(session.session);
      expect(summary.deals).toHaveLength(2);
      for (const deal of summary.deals) {
        expect(deal.plays).toHaveLength(8);
        const partners = deal.plays.map((p) => p.partner);
        expect(partners.filter((p) => p === "agent")).toHaveLength(4);
        expect(partners.filter((p) => p === "baseline")).toHaveLength(4);
        expect(Number.isFinite(deal.imp)).toBe(true);
      }
      expect(Number.isFinite(summary.mean_imp)).toBe(true);
      expect(Number.isFinite(summary.sem)).toBe(true);
      expect(summary.n).toBe(2);
    },
  );
});
