import { describe, expect, it } from "vitest";

import { RunServiceClient } from "../src/api.js";
import type { RunView } from "../src/model.js";
import { RunPoller } from "../src/poller.js";
import { entry, eventsPage, jsonResponse, record, scriptedFetch } from "./helpers.js";

function poller(
  script: Parameters<typeof scriptedFetch>[0],
): { poller: RunPoller; updates: RunView[]; errors: unknown[] } {
  const { fetch } = scriptedFetch(script);
  const updates: RunView[] = [];
  const errors: unknown[] = [];
  const p = new RunPoller(
    new RunServiceClient("", fetch),
    "run-1",
    { onUpdate: (v) => updates.push(v), onError: (e) => errors.push(e) },
    100000, // ticks are driven manually in tests
  );
  return { poller: p, updates, errors };
}

describe("RunPoller", () => {
  it("seeds from the run record, then merges event pages", async () => {
    let tickCount = 0;
    const pages = [
      eventsPage([entry({ iteration: 0 })], "running"),
      eventsPage([entry({ iteration: 0 }), entry({ iteration: 1 })], "finished"),
    ];
    const { poller: p, updates } = poller([
      [/\/events/, () => jsonResponse(pages[tickCount++])],
      [/\/runs\/run-1$/, () => jsonResponse(record([], "running"))],
    ]);
    await p.start();
    await p.tick();
    await p.tick();
    p.stop();
    expect(updates.map((v) => v.entries.length)).toEqual([0, 1, 2]);
    expect(updates[updates.length - 1]?.status).toBe("finished");
  });

  it("picks up a rejection flag flipped on an already-seen entry", async () => {
    let tickCount = 0;
    const pages = [
      eventsPage([entry({ iteration: 0, rejected: false })], "running"),
      eventsPage([entry({ iteration: 0, rejected: true })], "running"),
    ];
    const { poller: p, updates } = poller([
      [/\/events/, () => jsonResponse(pages[tickCount++])],
      [/\/runs\/run-1$/, () => jsonResponse(record([], "running"))],
    ]);
    await p.start();
    await p.tick();
    await p.tick();
    p.stop();
    expect(updates[updates.length - 2]?.entries[0].rejected).toBe(false);
    expect(updates[updates.length - 1]?.entries[0].rejected).toBe(true);
  });

  it("reports fetch failures without dying", async () => {
    let fail = true;
    const { poller: p, updates, errors } = poller([
      [
        /\/events/,
        () => {
          if (fail) throw new Error("connection refused");
          return jsonResponse(eventsPage([entry()], "finished"));
        },
      ],
      [/\/runs\/run-1$/, () => jsonResponse(record([], "running"))],
    ]);
    await p.start();
    await p.tick();
    expect(errors).toHaveLength(1);
    fail = false;
    await p.tick();
    p.stop();
    expect(updates[updates.length - 1]?.entries).toHaveLength(1);
  });
});
