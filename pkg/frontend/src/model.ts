/**
 * View-model for one run: a faithful mirror of the service state plus the
 * few pure projections the dashboard needs (chart series, best marker).
 */

import type { EventsPage, IterationEntry, RunRecord } from "./api.js";

export interface RunView {
  runId: string;
  status: string;
  entries: IterationEntry[];
  feedbackNotes: [number, string][];
}

export function viewFromRecord(record: RunRecord): RunView {
  const history = record.report?.history;
  return {
    runId: record.run_id,
    status: record.status,
    entries: history ? [...history.entries] : [],
    feedbackNotes: history ? [...history.feedback_notes] : [],
  };
}

/** Merge a polled events page into the view. Entries the server re-sends
 * (e.g. after a rejection flipped a flag) replace the stale copies. */
export function applyEvents(view: RunView, page: EventsPage, since: number): RunView {
  const entries = view.entries.slice(0, since).concat(page.entries);
  return {
    runId: view.runId,
    status: page.status,
    entries,
    feedbackNotes: [...page.feedback_notes],
  };
}

/** Server ranking, mirrored exactly: raw value ascending, then gate count
 * ascending; rejected entries never win. */
export function bestEntry(view: RunView): IterationEntry | null {
  let best: IterationEntry | null = null;
  for (const entry of view.entries) {
    if (entry.rejected) continue;
    if (
      best === null ||
      entry.raw_value < best.raw_value ||
      (entry.raw_value === best.raw_value && entry.gate_count < best.gate_count)
    ) {
      best = entry;
    }
  }
  return best;
}

export interface ChartPoint {
  iteration: number;
  value: number;
  rejected: boolean;
}

/** The two aligned per-iteration series (value and gate count). Values are
 * the service's numbers verbatim — no rounding, no scaling. */
export function chartSeries(view: RunView): {
  values: ChartPoint[];
  gates: ChartPoint[];
} {
  const values = view.entries.map((e) => ({
    iteration: e.iteration,
    value: e.raw_value,
    rejected: e.rejected,
  }));
  const gates = view.entries.map((e) => ({
    iteration: e.iteration,
    value: e.gate_count,
    rejected: e.rejected,
  }));
  return { values, gates };
}

export function isRunning(view: RunView): boolean {
  return view.status === "running";
}

export function isTerminal(status: string): boolean {
  return status === "finished" || status === "aborted" || status === "no-candidate";
}

/** Display formatting only; underlying data stays exact. */
export function formatValue(value: number): string {
  return Number.isInteger(value) ? value.toString() : value.toPrecision(8);
}
