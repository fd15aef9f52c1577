// The client holds no simulation state of its own: rendering reads only
// the latest snapshot, so a page reload plus reconnect reproduces the
// same display as soon as the next snapshot arrives.

import type {
  DoorState,
  HelloMessage,
  ServerMessage,
  SnapshotMessage,
  Tile,
} from "./protocol";
import { GlyphGrid } from "./protocol";

export type OverlayMode = "truth" | "belief" | "side_by_side";
export type Connection = "connecting" | "connected" | "disconnected";

export interface ViewModel {
  connection: Connection;
  hello: HelloMessage | null;
  snapshot: SnapshotMessage | null;
  mode: OverlayMode;
  selectedNpc: string | null;
  paused: boolean;
  toasts: string[];
  shake: Tile | null;
}

export function initialView(): ViewModel {
  return {
    connection: "connecting",
    hello: null,
    snapshot: null,
    mode: "side_by_side",
    selectedNpc: null,
    paused: false,
    toasts: [],
    shake: null,
  };
}

export function applyMessage(view: ViewModel, message: ServerMessage): ViewModel {
  switch (message.type) {
    case "hello":
      return {
        ...view,
        connection: "connected",
        hello: message,
        paused: message.paused,
        selectedNpc: view.selectedNpc ?? message.npcs[0] ?? null,
      };
    case "snapshot":
      return { ...view, connection: "connected", snapshot: message, shake: null };
    case "reject":
      return { ...view, toasts: [...view.toasts, `${message.cmd}: ${message.reason}`] };
    case "heartbeat":
      return { ...view, paused: message.paused };
    case "ack":
    case "trace":
      return view;
  }
}

export function setConnection(view: ViewModel, connection: Connection): ViewModel {
  return { ...view, connection };
}

export function setMode(view: ViewModel, mode: OverlayMode): ViewModel {
  return { ...view, mode };
}

export function selectNpc(view: ViewModel, npc: string): ViewModel {
  return { ...view, selectedNpc: npc };
}

export function setShake(view: ViewModel, tile: Tile): ViewModel {
  return { ...view, shake: tile };
}

export function grid(view: ViewModel): GlyphGrid | null {
  const snap = view.snapshot;
  if (!snap) return null;
  return new GlyphGrid(snap.tiles, snap.width, snap.height);
}

// Door state as one panel sees it: ground truth, or the selected NPC's
// belief table. Null when the panel has nothing to say (no snapshot,
// or a deliberator without beliefs).
export function doorStateFor(
  view: ViewModel,
  source: "truth" | "belief",
  door: string,
): DoorState | null {
  const snap = view.snapshot;
  if (!snap) return null;
  if (source === "truth") return snap.doors[door] ?? null;
  const npc = view.selectedNpc;
  if (!npc) return null;
  const table = snap.beliefs[npc];
  return table?.[door]?.state ?? null;
}

export function unobservedDoors(view: ViewModel, npc: string | null): string[] {
  const snap = view.snapshot;
  if (!snap || !npc) return [];
  const table = snap.beliefs[npc];
  if (!table) return [];
  return Object.keys(table)
    .filter((door) => table[door].observed_tick === null)
    .sort();
}

export function panelsDisagree(view: ViewModel): string[] {
  const snap = view.snapshot;
  if (!snap) return [];
  return Object.keys(snap.doors)
    .filter((door) => {
      const belief = doorStateFor(view, "belief", door);
      return belief !== null && belief !== snap.doors[door];
    })
    .sort();
}
