/**
 * One poller per open run view: fetch /events on a fixed cadence, merge into
 * the view-model, stop on terminal status. Errors surface through a callback
 * so the page can show a retry banner without killing the loop.
 */

import type { RunServiceClient } from "./api.js";
import { applyEvents, isTerminal, viewFromRecord, type RunView } from "./model.js";

export interface PollerCallbacks {
  onUpdate: (view: RunView) => void;
  onError?: (error: unknown) => void;
}

export class RunPoller {
  private view: RunView;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;

  constructor(
    private readonly client: RunServiceClient,
    runId: string,
    private readonly callbacks: PollerCallbacks,
    private readonly intervalMs = 1000,
  ) {
    this.view = { runId, status: "running", entries: [], feedbackNotes: [] };
  }

  current(): RunView {
    return this.view;
  }

  async start(): Promise<void> {
    try {
      this.view = viewFromRecord(await this.client.getRun(this.view.runId));
      this.callbacks.onUpdate(this.view);
    } catch (error) {
      this.callbacks.onError?.(error);
    }
    if (!isTerminal(this.view.status)) this.schedule();
  }

  /** Single poll step; exposed for tests, driven by the timer in the page. */
  async tick(): Promise<void> {
    if (this.stopped) return;
    try {
      // Re-fetch from 0 so server-side flag changes (rejections) are never
      // missed; `since` is still honored for the entries payload.
      const page = await this.client.getEvents(this.view.runId, 0);
      this.view = applyEvents(this.view, page, 0);
      this.callbacks.onUpdate(this.view);
    } catch (error) {
      this.callbacks.onError?.(error);
    }
    if (!this.stopped && !isTerminal(this.view.status)) this.schedule();
  }

  private schedule(): void {
    this.timer = setTimeout(() => void this.tick(), this.intervalMs);
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) clearTimeout(this.timer);
  }
}
