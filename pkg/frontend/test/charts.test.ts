import { describe, expect, it } from "vitest";

import { ChartWindow, WINDOW, normalizeHeatmap } from "../src/charts.js";
import type { EpisodePayload } from "../src/types.js";

function episode(index: number, fitness = 10): EpisodePayload {
  return {
    episode: index,
    fitness,
    discounted_return: -index,
    visit_counts: new Array(16).fill(0).map((_, cell) => (cell === 0 ? 200 : 0)),
    rewards: { R1: 1, R2: -0.1, R3: 0.3, R4: -1 },
    alpha: 0.1,
    gamma: 0.99,
    epsilon: 0.3,
  };
}

describe("ChartWindow", () => {
  it("accepts new episodes and keeps them sorted", () => {
    const chart = new ChartWindow();
    expect(chart.addEpisode(episode(1))).toBe(true);
    expect(chart.addEpisode(episode(0))).toBe(true);
    expect(chart.points.map((p) => p.episode)).toEqual([0, 1]);
  });

  it("deduplicates replayed episodes", () => {
    const chart = new ChartWindow();
    for (let i = 0; i < 5; i += 1) chart.addEpisode(episode(i));
    // a reconnect replays the same events
    for (let i = 0; i < 5; i += 1) expect(chart.addEpisode(episode(i))).toBe(false);
    expect(chart.points).toHaveLength(5);
  });

  it("bounds the window to 500 points", () => {
    const chart = new ChartWindow();
    for (let i = 0; i < WINDOW + 50; i += 1) chart.addEpisode(episode(i));
    expect(chart.points).toHaveLength(WINDOW);
    expect(chart.points[0].episode).toBe(50);
  });

  it("marks the first episode after a write", () => {
    const chart = new ChartWindow();
    chart.addEpisode(episode(0));
    chart.noteWrite();
    chart.addEpisode(episode(1));
    chart.addEpisode(episode(2));
    expect(chart.markers).toEqual([1]);
  });

  it("collapses several writes between episodes into one marker", () => {
    const chart = new ChartWindow();
    chart.addEpisode(episode(0));
    chart.noteWrite();
    chart.noteWrite();
    chart.noteWrite();
    chart.addEpisode(episode(1));
    expect(chart.markers).toEqual([1]);
  });

  it("keeps the heatmap at the newest episode", () => {
    const chart = new ChartWindow();
    chart.addEpisode(episode(3));
    const older = episode(2);
    older.visit_counts = new Array(16).fill(99);
    chart.addEpisode(older);
    expect(chart.heatmapEpisode).toBe(3);
    expect(chart.heatmap[0]).toBe(200);
  });

  it("heatmap counts sum to the episode step count before normalization", () => {
    const chart = new ChartWindow();
    chart.addEpisode(episode(0));
    const total = chart.heatmap.reduce((a, b) => a + b, 0);
    expect(total).toBe(200);
    const normalized = normalizeHeatmap(chart.heatmap);
    expect(Math.max(...normalized)).toBe(1);
    expect(Math.min(...normalized)).toBe(0);
  });
});
