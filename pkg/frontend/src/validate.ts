// Client-side validation mirroring the control plane's raw-value parsing:
// a value that fails here is never sent.

import type { VarType } from "./types.js";

const INT_RE = /^[+-]?\d+$/;
const FLOAT_RE = /^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$/;

export interface Validation {
  ok: boolean;
  value?: number | string | boolean;
  error?: string;
}

export function validateRaw(raw: string, type: VarType): Validation {
  const trimmed = raw.trim();
  switch (type) {
    case "int":
      if (!INT_RE.test(trimmed)) return { ok: false, error: "not an integer" };
      return { ok: true, value: parseInt(trimmed, 10) };
    case "float": {
      if (!FLOAT_RE.test(trimmed)) return { ok: false, error: "not a number" };
      const parsed = parseFloat(trimmed);
      if (!Number.isFinite(parsed)) return { ok: false, error: "not finite" };
      return { ok: true, value: parsed };
    }
    case "bool":
      if (trimmed === "true") return { ok: true, value: true };
      if (trimmed === "false") return { ok: true, value: false };
      return { ok: false, error: "expected true or false" };
    case "str":
      return { ok: true, value: raw };
    case "trigger":
      return { ok: false, error: "triggers are fired, not set" };
  }
}
