// Server-sent events consumer with reconnect and backoff. The EventSource
// implementation is injectable so the reconnect logic is testable in node.

import type { MetricEvent } from "./types.js";

export interface EventSourceLike {
  onmessage: ((event: { data: string }) => void) | null;
  onerror: ((event: unknown) => void) | null;
  close(): void;
}

export type EventSourceFactory = (url: string) => EventSourceLike;

const INITIAL_BACKOFF_MS = 500;
const MAX_BACKOFF_MS = 15_000;

export class MetricsStream {
  private source: EventSourceLike | null = null;
  private backoffMs = INITIAL_BACKOFF_MS;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;
  reconnects = 0;

  constructor(
    private readonly url: string,
    private readonly onEvent: (event: MetricEvent) => void,
    private readonly factory: EventSourceFactory,
    private readonly onStateChange?: (connected: boolean) => void,
  ) {}

  start(): void {
    this.stopped = false;
    this.connect();
  }

  private connect(): void {
    if (this.stopped) return;
    this.source = this.factory(this.url);
    this.source.onmessage = (message) => {
      this.backoffMs = INITIAL_BACKOFF_MS; // healthy again
      this.onStateChange?.(true);
      let parsed: MetricEvent;
      try {
        parsed = JSON.parse(message.data) as MetricEvent;
      } catch {
        return; // heartbeats and partial lines are not events
      }
      this.onEvent(parsed);
    };
    this.source.onerror = () => {
      this.onStateChange?.(false);
      this.source?.close();
      this.source = null;
      if (this.stopped) return;
      this.reconnects += 1;
      this.timer = setTimeout(() => this.connect(), this.backoffMs);
      this.backoffMs = Math.min(this.backoffMs * 2, MAX_BACKOFF_MS);
    };
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.source?.close();
    this.source = null;
  }
}
