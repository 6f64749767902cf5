// Canvas painters for the fitness/return charts and the visit heatmap.

import { ChartWindow, normalizeHeatmap } from "./charts.js";

const GRID = 4;

interface Series {
  label: string;
  color: string;
  pick: (point: { fitness: number; discountedReturn: number }) => number;
  fixedRange?: [number, number];
}

export function drawSeries(
  canvas: HTMLCanvasElement,
  chart: ChartWindow,
  series: Series,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.font = "11px system-ui";

  const points = chart.points;
  if (points.length === 0) {
    ctx.fillStyle = "#888";
    ctx.fillText("waiting for episodes…", 10, 20);
    return;
  }

  const left = 46;
  const bottom = height - 22;
  const top = 12;
  const right = width - 8;

  const values = points.map(series.pick);
  let [low, high] = series.fixedRange ?? [Math.min(...values), Math.max(...values)];
  if (low === high) {
    low -= 1;
    high += 1;
  }
  const firstEp = points[0].episode;
  const lastEp = points[points.length - 1].episode;
  const epSpan = Math.max(lastEp - firstEp, 1);

  const xOf = (episode: number) => left + ((episode - firstEp) / epSpan) * (right - left);
  const yOf = (value: number) => bottom - ((value - low) / (high - low)) * (bottom - top);

  // axes
  ctx.strokeStyle = "#ccc";
  ctx.beginPath();
  ctx.moveTo(left, top);
  ctx.lineTo(left, bottom);
  ctx.lineTo(right, bottom);
  ctx.stroke();
  ctx.fillStyle = "#666";
  ctx.fillText(high.toFixed(1), 4, top + 8);
  ctx.fillText(low.toFixed(1), 4, bottom);
  ctx.fillText(String(firstEp), left, height - 8);
  ctx.fillText(String(lastEp), right - 30, height - 8);

  // write markers: vertical lines where a change first took effect
  ctx.strokeStyle = "#e67e22";
  for (const episode of chart.markers) {
    if (episode < firstEp || episode > lastEp) continue;
    const x = xOf(episode);
    ctx.beginPath();
    ctx.moveTo(x, top);
    ctx.lineTo(x, bottom);
    ctx.stroke();
  }

  // the series itself
  ctx.strokeStyle = series.color;
  ctx.beginPath();
  points.forEach((point, index) => {
    const x = xOf(point.episode);
    const y = yOf(series.pick(point));
    if (index === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
  ctx.fillStyle = series.color;
  ctx.fillText(series.label, left + 6, top + 10);
}

export function drawHeatmap(canvas: HTMLCanvasElement, chart: ChartWindow): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const intensity = normalizeHeatmap(chart.heatmap);
  const cellW = width / GRID;
  const cellH = height / GRID;
  for (let y = 0; y < GRID; y += 1) {
    for (let x = 0; x < GRID; x += 1) {
      const cell = intensity[y * GRID + x];
      const shade = Math.round(255 - cell * 200);
      ctx.fillStyle = `rgb(${shade}, ${shade}, 255)`;
      ctx.fillRect(x * cellW, y * cellH, cellW - 1, cellH - 1);
      ctx.fillStyle = "#333";
      ctx.font = "11px system-ui";
      ctx.fillText(String(chart.heatmap[y * GRID + x]), x * cellW + 4, y * cellH + 14);
    }
  }
}
