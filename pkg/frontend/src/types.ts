// Shapes shared with the gateway's HTTP surface.

export type VarType = "int" | "float" | "bool" | "str" | "trigger";

export interface VarInfo {
  tag: string;
  type: VarType;
  value: number | string | boolean | null;
  port: number;
}

export interface EpisodePayload {
  episode: number;
  fitness: number;
  discounted_return: number;
  visit_counts: number[]; // 16 cells, row-major
  rewards: { R1: number; R2: number; R3: number; R4: number };
  alpha: number;
  gamma: number;
  epsilon: number;
}

export interface WarningPayload {
  message: string;
  tag?: string;
  value?: number | string | boolean;
  clamped?: number;
}

export interface DescentPayload {
  iteration: number;
  x: number;
  y: number;
  f: number;
  learning_rate: number;
}

export interface MetricEvent {
  kind: "episode" | "descent" | "warning";
  payload: EpisodePayload | WarningPayload | DescentPayload;
  wall_time: number;
}

export type WriteStatus = "idle" | "pending" | "ok" | "error";
