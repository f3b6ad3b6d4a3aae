/**
 * Dashboard page wiring: run list, per-run charts, QASM pane, and the
 * steering controls (feedback box, accept/reject per iteration).
 */

import { ApiError, RunServiceClient } from "./api.js";
import { renderLineChart } from "./charts.js";
import { bestEntry, chartSeries, formatValue, isRunning, type RunView } from "./model.js";
import { RunPoller } from "./poller.js";

const client = new RunServiceClient("");
let poller: RunPoller | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showBanner(message: string | null): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = message ?? "";
  banner.hidden = message === null;
}

async function refreshRunList(): Promise<void> {
  try {
    const runs = await client.listRuns();
    showBanner(null);
    const list = el<HTMLUListElement>("run-list");
    list.replaceChildren(
      ...runs.map((run) => {
        const item = document.createElement("li");
        const link = document.createElement("a");
        link.href = "#";
        link.textContent = `${run.run_id} — ${run.status}`;
        link.addEventListener("click", (event) => {
          event.preventDefault();
          void openRun(run.run_id);
        });
        item.append(link);
        return item;
      }),
    );
  } catch (error) {
    showBanner(`service unreachable: ${String(error)} — retrying`);
  }
}

function renderRun(view: RunView): void {
  el<HTMLHeadingElement>("run-title").textContent =
    `run ${view.runId} (${view.status})`;
  const { values, gates } = chartSeries(view);
  el<HTMLDivElement>("value-chart").innerHTML = renderLineChart(values, {
    width: 560,
    height: 220,
    label: "value per iteration",
  });
  el<HTMLDivElement>("gates-chart").innerHTML = renderLineChart(gates, {
    width: 560,
    height: 220,
    label: "gate count per iteration",
  });

  const best = bestEntry(view);
  el<HTMLDivElement>("best-box").textContent = best
    ? `best: iteration ${best.iteration} — ${best.genome} — value ${formatValue(
        best.raw_value,
      )}, ${best.gate_count} gates`
    : "best: none yet";
  if (best) void showQasm(view.runId, best.iteration);

  const table = el<HTMLTableSectionElement>("iteration-rows");
  table.replaceChildren(
    ...view.entries.map((entry) => {
      const row = document.createElement("tr");
      if (entry.rejected) row.classList.add("rejected");
      row.innerHTML =
        `<td>${entry.iteration}</td><td>${entry.genome}</td>` +
        `<td>${formatValue(entry.raw_value)}</td><td>${entry.gate_count}</td>` +
        `<td>${entry.epochs}</td><td>${formatValue(entry.normalized)}</td>`;
      const cell = document.createElement("td");
      for (const decision of ["accept", "reject"] as const) {
        const button = document.createElement("button");
        button.textContent = decision;
        button.disabled = !isRunning(view);
        button.addEventListener("click", () =>
          void steer(view.runId, entry.iteration, decision),
        );
        cell.append(button);
      }
      row.append(cell);
      return row;
    }),
  );

  el<HTMLUListElement>("feedback-log").replaceChildren(
    ...view.feedbackNotes.map(([iteration, text]) => {
      const item = document.createElement("li");
      item.textContent = `@${iteration}: ${text}`;
      return item;
    }),
  );

  const controlsDisabled = !isRunning(view);
  el<HTMLButtonElement>("feedback-send").disabled = controlsDisabled;
  el<HTMLTextAreaElement>("feedback-text").disabled = controlsDisabled;
  el<HTMLParagraphElement>("controls-note").hidden = !controlsDisabled;
}

async function showQasm(runId: string, iteration: number): Promise<void> {
  try {
    // Passthrough: the pane shows the endpoint body byte-for-byte.
    el<HTMLPreElement>("qasm-pane").textContent = await client.getQasm(
      runId,
      iteration,
    );
  } catch (error) {
    el<HTMLPreElement>("qasm-pane").textContent = `QASM unavailable: ${String(error)}`;
  }
}

async function steer(
  runId: string,
  iteration: number,
  decision: "accept" | "reject",
): Promise<void> {
  try {
    await client.postDecision(runId, iteration, decision);
    showBanner(null);
  } catch (error) {
    if (error instanceof ApiError && error.conflict) {
      showBanner("run already finished — steering controls are disabled");
    } else {
      showBanner(`decision failed: ${String(error)}`);
    }
  }
}

async function openRun(runId: string): Promise<void> {
  poller?.stop();
  poller = new RunPoller(client, runId, {
    onUpdate: renderRun,
    onError: (error) =>
      showBanner(`service unreachable: ${String(error)} — retrying`),
  });
  await poller.start();
}

function wireFeedbackForm(): void {
  el<HTMLButtonElement>("feedback-send").addEventListener("click", () => {
    const box = el<HTMLTextAreaElement>("feedback-text");
    const runId = poller?.current().runId;
    if (!runId || !box.value.trim()) return;
    void client
      .postFeedback(runId, box.value.trim())
      .then(() => {
        box.value = "";
        showBanner(null);
      })
      .catch((error) => {
        if (error instanceof ApiError && error.conflict) {
          showBanner("run already finished — feedback is closed");
        } else {
          showBanner(`feedback failed: ${String(error)}`);
        }
      });
  });
}

export function init(): void {
  wireFeedbackForm();
  void refreshRunList();
  setInterval(() => void refreshRunList(), 5000);
}

if (typeof document !== "undefined" && document.getElementById("run-list")) {
  init();
}
