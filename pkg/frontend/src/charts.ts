// Rolling chart state fed by the metric stream. Pure logic lives here so it
// is unit-testable; canvas painting is in render.ts.

import type { EpisodePayload } from "./types.js";

export const WINDOW = 500;

export interface ChartPoint {
  episode: number;
  fitness: number;
  discountedReturn: number;
}

export class ChartWindow {
  readonly points: ChartPoint[] = [];
  readonly markers: number[] = [];
  heatmap: number[] = new Array(16).fill(0);
  heatmapEpisode = -1;
  private readonly seen = new Set<number>();
  private pendingWrites = 0;

  /** Record that a variable write succeeded; the next new episode gets a marker. */
  noteWrite(): void {
    this.pendingWrites += 1;
  }

  /** Returns false for replayed duplicates (reconnects must not double-plot). */
  addEpisode(payload: EpisodePayload): boolean {
    if (this.seen.has(payload.episode)) return false;
    this.seen.add(payload.episode);

    this.points.push({
      episode: payload.episode,
      fitness: payload.fitness,
      discountedReturn: payload.discounted_return,
    });
    this.points.sort((a, b) => a.episode - b.episode);
    while (this.points.length > WINDOW) {
      const dropped = this.points.shift()!;
      this.seen.delete(dropped.episode);
    }

    if (this.pendingWrites > 0) {
      // All writes since the last episode collapse into one marker at the
      // first episode that could reflect them.
      this.markers.push(payload.episode);
      this.pendingWrites = 0;
    }
    while (this.markers.length > 0 && this.points.length > 0
           && this.markers[0] < this.points[0].episode) {
      this.markers.shift();
    }

    if (payload.episode > this.heatmapEpisode) {
      this.heatmap = payload.visit_counts.slice();
      this.heatmapEpisode = payload.episode;
    }
    return true;
  }
}

/** Per-cell intensities in [0, 1]; counts sum to the episode's step count. */
export function normalizeHeatmap(counts: number[]): number[] {
  const max = Math.max(...counts, 1);
  return counts.map((count) => count / max);
}
