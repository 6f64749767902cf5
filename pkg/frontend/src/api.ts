// Thin client over the gateway's HTTP surface. fetch is injectable so the
// panel logic is testable without a server.

import type { VarInfo } from "./types.js";

export type FetchLike = typeof fetch;

export interface PutResult {
  status: number;
  ok: boolean;
  error?: string;
}

export class GatewayApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  async listVars(): Promise<VarInfo[]> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/vars`);
    if (!resp.ok) throw new Error(`list failed: ${resp.status}`);
    return (await resp.json()) as VarInfo[];
  }

  async putVar(tag: string, value: number | string | boolean): Promise<PutResult> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/vars/${encodeURIComponent(tag)}`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ value }),
    });
    if (resp.ok) return { status: resp.status, ok: true };
    let error = `http ${resp.status}`;
    try {
      const body = (await resp.json()) as { error?: string };
      if (body.error) error = body.error;
    } catch {
      // non-JSON error body; keep the status text
    }
    return { status: resp.status, ok: false, error };
  }

  async fireTrigger(tag: string): Promise<PutResult> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/api/triggers/${encodeURIComponent(tag)}`,
      { method: "POST" },
    );
    return { status: resp.status, ok: resp.ok };
  }
}
