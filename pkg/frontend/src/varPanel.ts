// Variable table state machine: pending edits validated client-side, writes
// proxied through the gateway, outcomes surfaced per row and as toasts.

import type { GatewayApi } from "./api.js";
import type { MetricEvent, VarInfo, WarningPayload, WriteStatus } from "./types.js";
import { validateRaw } from "./validate.js";

export interface RowState {
  info: VarInfo;
  status: WriteStatus;
  message: string;
}

export interface Toast {
  level: "warning" | "error" | "ok";
  message: string;
}

export class VarPanel {
  readonly rows = new Map<string, RowState>();

  constructor(
    private readonly api: GatewayApi,
    private readonly onWrite: () => void = () => {},
    private readonly onToast: (toast: Toast) => void = () => {},
  ) {}

  /** Merge a fresh /api/vars listing; write statuses survive the poll. */
  syncVars(vars: VarInfo[]): void {
    const listed = new Set<string>();
    for (const info of vars) {
      listed.add(info.tag);
      const existing = this.rows.get(info.tag);
      if (existing) {
        existing.info = info;
      } else {
        this.rows.set(info.tag, { info, status: "idle", message: "" });
      }
    }
    for (const tag of [...this.rows.keys()]) {
      if (!listed.has(tag)) this.rows.delete(tag);
    }
  }

  tags(): string[] {
    return [...this.rows.keys()].sort();
  }

  /** Commit a raw edit. Invalid input never produces a request. */
  async commit(tag: string, raw: string): Promise<RowState> {
    const row = this.rows.get(tag);
    if (!row) throw new Error(`unknown row: ${tag}`);
    const checked = validateRaw(raw, row.info.type);
    if (!checked.ok) {
      row.status = "error";
      row.message = checked.error ?? "invalid";
      return row;
    }
    row.status = "pending";
    row.message = "";
    const result = await this.api.putVar(tag, checked.value!);
    if (result.ok) {
      row.status = "ok";
      row.message = "written";
      row.info = { ...row.info, value: checked.value! };
      this.onWrite();
    } else {
      row.status = "error";
      row.message = result.error ?? `http ${result.status}`;
      this.onToast({ level: "error", message: `${tag}: ${row.message}` });
    }
    return row;
  }

  async fire(tag: string): Promise<RowState> {
    const row = this.rows.get(tag);
    if (!row) throw new Error(`unknown row: ${tag}`);
    const result = await this.api.fireTrigger(tag);
    row.status = result.ok ? "ok" : "error";
    row.message = result.ok ? "fired" : `http ${result.status}`;
    if (result.ok) this.onWrite();
    return row;
  }

  /** Warning events (e.g. the trainer clamped an out-of-range write) become toasts. */
  absorbEvent(event: MetricEvent): void {
    if (event.kind !== "warning") return;
    const payload = event.payload as WarningPayload;
    this.onToast({ level: "warning", message: payload.message });
    if (payload.tag && this.rows.has(payload.tag)) {
      const row = this.rows.get(payload.tag)!;
      row.status = "ok";
      row.message = payload.clamped !== undefined ? `clamped to ${payload.clamped}` : row.message;
    }
  }
}
