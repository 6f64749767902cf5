// Dashboard entry point: variable table + live charts + heatmap + toasts.

import { GatewayApi } from "./api.js";
import { ChartWindow } from "./charts.js";
import { drawHeatmap, drawSeries } from "./render.js";
import { MetricsStream } from "./stream.js";
import type { EpisodePayload, MetricEvent } from "./types.js";
import { VarPanel, Toast } from "./varPanel.js";

const POLL_INTERVAL_MS = 2000;

const api = new GatewayApi();
const chart = new ChartWindow();

const varsBody = document.getElementById("vars-body") as HTMLTableSectionElement;
const toastBox = document.getElementById("toasts") as HTMLDivElement;
const statusBadge = document.getElementById("stream-status") as HTMLSpanElement;
const fitnessCanvas = document.getElementById("fitness-chart") as HTMLCanvasElement;
const returnCanvas = document.getElementById("return-chart") as HTMLCanvasElement;
const heatmapCanvas = document.getElementById("heatmap") as HTMLCanvasElement;

function showToast(toast: Toast): void {
  const node = document.createElement("div");
  node.className = `toast toast-${toast.level}`;
  node.textContent = toast.message;
  toastBox.appendChild(node);
  setTimeout(() => node.remove(), 6000);
}

const panel = new VarPanel(api, () => chart.noteWrite(), showToast);

function renderTable(): void {
  varsBody.innerHTML = "";
  for (const tag of panel.tags()) {
    const row = panel.rows.get(tag)!;
    const tr = document.createElement("tr");

    const nameCell = document.createElement("td");
    nameCell.textContent = tag;
    const typeCell = document.createElement("td");
    typeCell.textContent = row.info.type;
    const valueCell = document.createElement("td");
    valueCell.textContent = String(row.info.value);

    const editCell = document.createElement("td");
    if (row.info.type === "trigger") {
      const button = document.createElement("button");
      button.textContent = "fire";
      button.onclick = async () => {
        await panel.fire(tag);
        renderTable();
      };
      editCell.appendChild(button);
    } else {
      const input = document.createElement("input");
      input.placeholder = String(row.info.value);
      input.onkeydown = async (event) => {
        if (event.key !== "Enter") return;
        await panel.commit(tag, input.value);
        input.value = "";
        renderTable();
      };
      editCell.appendChild(input);
    }

    const statusCell = document.createElement("td");
    statusCell.className = `status status-${row.status}`;
    statusCell.textContent = row.message;

    tr.append(nameCell, typeCell, valueCell, editCell, statusCell);
    varsBody.appendChild(tr);
  }
}

async function pollVars(): Promise<void> {
  try {
    panel.syncVars(await api.listVars());
    renderTable();
  } catch {
    // gateway briefly unreachable; next poll retries
  }
}

function redraw(): void {
  drawSeries(fitnessCanvas, chart, {
    label: "fitness (steps not hungry)",
    color: "#2980b9",
    pick: (point) => point.fitness,
    fixedRange: [0, 200],
  });
  drawSeries(returnCanvas, chart, {
    label: "discounted return",
    color: "#27ae60",
    pick: (point) => point.discountedReturn,
  });
  drawHeatmap(heatmapCanvas, chart);
}

function onEvent(event: MetricEvent): void {
  if (event.kind === "episode") {
    if (chart.addEpisode(event.payload as EpisodePayload)) redraw();
  } else if (event.kind === "warning") {
    panel.absorbEvent(event);
    renderTable();
  }
}

const stream = new MetricsStream(
  "/api/metrics/stream",
  onEvent,
  // MessageEvent satisfies the structural { data: string } contract
  (url) => new EventSource(url) as unknown as import("./stream.js").EventSourceLike,
  (connected) => {
    statusBadge.textContent = connected ? "live" : "reconnecting…";
    statusBadge.className = connected ? "live" : "stale";
  },
);

pollVars();
setInterval(pollVars, POLL_INTERVAL_MS);
stream.start();
redraw();
