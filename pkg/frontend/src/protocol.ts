// Wire protocol: JSON messages with a `type` discriminator, exactly as the
// simulation server speaks them. The client validates just enough to stay
// type-safe; unknown message types are dropped, not crashed on.

export type DoorState = "open" | "closed";
export type FacingName = "N" | "E" | "S" | "W";
export type Tile = [number, number]; // [row, col]

export interface BeliefEntry {
  state: DoorState;
  observed_tick: number | null;
}

export interface PlanSummary {
  goal: Tile;
  route_doors: string[];
  steps?: [string, number][];
  target_area?: number;
  start_area?: number;
  path_cost?: number;
  action?: string | null;
  path?: Tile[];
}

export interface NpcPose {
  position: Tile;
  facing: FacingName;
}

export interface SnapshotMessage {
  type: "snapshot";
  tick: number;
  width: number;
  height: number;
  tiles: [number, string][];
  doors: Record<string, DoorState>;
  npcs: Record<string, NpcPose>;
  beliefs: Record<string, Record<string, BeliefEntry> | null>;
  plans: Record<string, PlanSummary | null>;
  visible: Record<string, Tile[]>;
}

export interface HelloMessage {
  type: "hello";
  tick: number;
  width: number;
  height: number;
  tiles: [number, string][];
  doors: string[];
  pois: Record<string, Tile>;
  npcs: string[];
  tick_rate: number;
  paused: boolean;
}

export interface TraceMessage {
  type: "trace";
  event: {
    tick: number;
    kind: string;
    npc: string | null;
    data: Record<string, unknown>;
  };
}

export interface AckMessage {
  type: "ack";
  cmd: string;
}

export interface RejectMessage {
  type: "reject";
  cmd: string;
  reason: string;
}

export interface HeartbeatMessage {
  type: "heartbeat";
  tick: number;
  paused: boolean;
}

export type ServerMessage =
  | SnapshotMessage
  | HelloMessage
  | TraceMessage
  | AckMessage
  | RejectMessage
  | HeartbeatMessage;

export type ClientCommand =
  | { type: "cmd.toggle_door"; door: string }
  | { type: "cmd.move_to"; npc: string; target: Tile }
  | { type: "cmd.pause" }
  | { type: "cmd.resume" }
  | { type: "cmd.tick_rate"; hz: number };

const SERVER_TYPES = new Set([
  "snapshot",
  "hello",
  "trace",
  "ack",
  "reject",
  "heartbeat",
]);

export function parseServerMessage(raw: string): ServerMessage | null {
  let value: unknown;
  try {
    value = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof value !== "object" || value === null) return null;
  const type = (value as { type?: unknown }).type;
  if (typeof type !== "string" || !SERVER_TYPES.has(type)) return null;
  return value as ServerMessage;
}

export function rleDecode(runs: [number, string][]): string {
  let out = "";
  for (const [count, glyph] of runs) out += glyph.repeat(count);
  return out;
}

// Decoded row-major glyph grid with tile lookups.
export class GlyphGrid {
  readonly width: number;
  readonly height: number;
  private readonly glyphs: string;

  constructor(runs: [number, string][], width: number, height: number) {
    this.width = width;
    this.height = height;
    this.glyphs = rleDecode(runs);
  }

  at(row: number, col: number): string | null {
    if (row < 0 || row >= this.height || col < 0 || col >= this.width) return null;
    return this.glyphs[row * this.width + col];
  }

  isWall(row: number, col: number): boolean {
    return this.at(row, col) === "#";
  }

  isFloor(row: number, col: number): boolean {
    return this.at(row, col) === ".";
  }

  doorAt(row: number, col: number): string | null {
    const glyph = this.at(row, col);
    return glyph !== null && glyph >= "a" && glyph <= "z" ? glyph : null;
  }
}
