import type { EventsPage, IterationEntry, RunRecord } from "../src/api.js";

export function entry(overrides: Partial<IterationEntry> = {}): IterationEntry {
  return {
    iteration: 0,
    genome: "[0, (0,1)]",
    raw_value: -1.0,
    gate_count: 9,
    epochs: 12,
    normalized: 0.0,
    rejected: false,
    best_params: [0.1, 0.2],
    ...overrides,
  };
}

export function record(
  entries: IterationEntry[],
  status = "running",
  feedbackNotes: [number, string][] = [],
): RunRecord {
  return {
    run_id: "run-1",
    created_at: 0,
    status,
    problem: {},
    proposer: "random",
    seed: 0,
    report: {
      config: {
        n_qubits: 2,
        n_blocks: 2,
        max_iterations: 4,
        task_description: "t",
      },
      status,
      history: { entries, feedback_notes: feedbackNotes },
      skipped: [],
      timestamps: [],
      prompt_trail: [],
      best: null,
    },
  };
}

export function eventsPage(
  entries: IterationEntry[],
  status = "running",
  feedbackNotes: [number, string][] = [],
): EventsPage {
  return {
    status,
    entries,
    next: entries.length,
    best: null,
    feedback_notes: feedbackNotes,
  };
}

export interface RecordedRequest {
  url: string;
  init?: RequestInit;
}

/** Scripted fetch: answers each URL pattern with a queued response factory. */
export function scriptedFetch(
  script: [RegExp, () => Response][],
): { fetch: (url: string, init?: RequestInit) => Promise<Response>; calls: RecordedRequest[] } {
  const calls: RecordedRequest[] = [];
  return {
    calls,
    fetch: async (url, init) => {
      calls.push({ url, init });
      for (const [pattern, make] of script) {
        if (pattern.test(url)) return make();
      }
      throw new Error(`no scripted response for ${url}`);
    },
  };
}

export function jsonResponse(doc: unknown, status = 200): Response {
  return new Response(JSON.stringify(doc), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
