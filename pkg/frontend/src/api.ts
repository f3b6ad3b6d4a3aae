/**
 * Typed client for the ansatz-forge run service.
 *
 * Every number shown in the UI comes from these responses unchanged; the
 * client never recomputes energies, gate counts, or rankings server-side
 * state already provides.
 */

export interface RunSummary {
  run_id: string;
  created_at: number | null;
  status: string;
}

export interface IterationEntry {
  iteration: number;
  genome: string;
  raw_value: number;
  gate_count: number;
  epochs: number;
  normalized: number;
  rejected: boolean;
  best_params: number[];
}

export interface ReportHistory {
  entries: IterationEntry[];
  feedback_notes: [number, string][];
}

export interface SearchReportDoc {
  config: {
    n_qubits: number;
    n_blocks: number;
    max_iterations: number;
    task_description: string;
  };
  status: string;
  history: ReportHistory;
  skipped: { iteration: number; error: string }[];
  timestamps: number[];
  prompt_trail: string[];
  best: IterationEntry | null;
}

export interface RunRecord {
  run_id: string;
  created_at: number;
  status: string;
  problem: unknown;
  proposer: string;
  seed: number;
  report: SearchReportDoc | null;
}

export interface EventsPage {
  status: string;
  entries: IterationEntry[];
  next: number;
  best: IterationEntry | null;
  feedback_notes: [number, string][];
}

/** Raised for non-2xx responses; `conflict` marks 409 (run not running). */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }

  get conflict(): boolean {
    return this.status === 409;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class RunServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!resp.ok) {
      const body = await resp.text();
      throw new ApiError(resp.status, body || `HTTP ${resp.status}`);
    }
    return resp;
  }

  async listRuns(): Promise<RunSummary[]> {
    const resp = await this.request("/runs");
    return (await resp.json()).runs;
  }

  async getRun(runId: string): Promise<RunRecord> {
    const resp = await this.request(`/runs/${runId}`);
    return await resp.json();
  }

  async getEvents(runId: string, since = 0): Promise<EventsPage> {
    const resp = await this.request(`/runs/${runId}/events?since=${since}`);
    return await resp.json();
  }

  /** Raw OpenQASM text for one iteration, passed through byte-for-byte. */
  async getQasm(runId: string, iteration: number): Promise<string> {
    const resp = await this.request(`/runs/${runId}/iterations/${iteration}/qasm`);
    return await resp.text();
  }

  async postFeedback(runId: string, text: string): Promise<void> {
    await this.request(`/runs/${runId}/feedback`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  async postDecision(
    runId: string,
    iteration: number,
    decision: "accept" | "reject",
  ): Promise<void> {
    await this.request(`/runs/${runId}/decision`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ iteration, decision }),
    });
  }
}
