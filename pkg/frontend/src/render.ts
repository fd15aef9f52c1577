// Rendering as data: a panel renders to a list of draw ops that a canvas
// backend executes. Keeps every display decision testable headless.

import type { Tile } from "./protocol";
import {
  doorStateFor,
  grid,
  unobservedDoors,
  type ViewModel,
} from "./viewmodel";

export type DrawOp =
  | { op: "fill"; row: number; col: number; color: string }
  | { op: "mark"; row: number; col: number; glyph: string; color: string }
  | { op: "shade"; row: number; col: number; color: string }
  | { op: "path"; points: Tile[]; color: string }
  | { op: "banner"; text: string };

export const COLORS = {
  wall: "#3a3f4b",
  floor: "#efe9dc",
  doorOpen: "#7fbf7f",
  doorClosed: "#c96b6b",
  doorUnknown: "#b8b2a6",
  cone: "rgba(255, 215, 80, 0.35)",
  npc: "#2b5fad",
  plan: "#2b5fad",
  poi: "#8a5fad",
  shake: "#e0b030",
} as const;

export type PanelSource = "truth" | "belief";

export interface Panel {
  source: PanelSource;
  title: string;
  ops: DrawOp[];
}

export function renderPanel(view: ViewModel, source: PanelSource): DrawOp[] {
  if (view.connection !== "connected" || !view.snapshot) {
    return [{ op: "banner", text: "disconnected - waiting for the server" }];
  }
  const snap = view.snapshot;
  const g = grid(view)!;
  const ops: DrawOp[] = [];
  const unobserved = new Set(
    source === "belief" ? unobservedDoors(view, view.selectedNpc) : [],
  );

  for (let row = 0; row < snap.height; row++) {
    for (let col = 0; col < snap.width; col++) {
      const door = g.doorAt(row, col);
      if (door !== null) {
        const state = doorStateFor(view, source, door);
        const color =
          state === "open"
            ? COLORS.doorOpen
            : state === "closed"
              ? COLORS.doorClosed
              : COLORS.doorUnknown;
        ops.push({ op: "fill", row, col, color });
        ops.push({ op: "mark", row, col, glyph: door, color: "#222" });
        if (unobserved.has(door)) {
          ops.push({ op: "mark", row, col, glyph: "?", color: "#222" });
        }
      } else {
        ops.push({
          op: "fill",
          row,
          col,
          color: g.isWall(row, col) ? COLORS.wall : COLORS.floor,
        });
      }
    }
  }

  for (const [name, [row, col]] of Object.entries(view.hello?.pois ?? {})) {
    ops.push({ op: "mark", row, col, glyph: name, color: COLORS.poi });
  }

  const npc = view.selectedNpc;
  if (npc && snap.visible[npc]) {
    for (const [row, col] of snap.visible[npc]) {
      ops.push({ op: "shade", row, col, color: COLORS.cone });
    }
  }

  if (source === "belief" && npc) {
    const plan = snap.plans[npc];
    if (plan?.path && plan.path.length > 1) {
      ops.push({ op: "path", points: plan.path, color: COLORS.plan });
    }
    if (plan) {
      ops.push({
        op: "mark",
        row: plan.goal[0],
        col: plan.goal[1],
        glyph: "x",
        color: COLORS.plan,
      });
    }
  }

  for (const [name, pose] of Object.entries(snap.npcs)) {
    const [row, col] = pose.position;
    const arrow = { N: "^", E: ">", S: "v", W: "<" }[pose.facing];
    ops.push({ op: "mark", row, col, glyph: arrow, color: COLORS.npc });
    if (name === npc) {
      ops.push({ op: "shade", row, col, color: "rgba(43, 95, 173, 0.25)" });
    }
  }

  if (view.shake) {
    ops.push({ op: "shade", row: view.shake[0], col: view.shake[1], color: COLORS.shake });
  }
  return ops;
}

export function renderView(view: ViewModel): Panel[] {
  const truth: Panel = {
    source: "truth",
    title: "ground truth",
    ops: renderPanel(view, "truth"),
  };
  const belief: Panel = {
    source: "belief",
    title: `belief (${view.selectedNpc ?? "-"})`,
    ops: renderPanel(view, "belief"),
  };
  if (view.mode === "truth") return [truth];
  if (view.mode === "belief") return [belief];
  return [truth, belief];
}

// Test helper: the fill color a panel gives one tile.
export function fillAt(ops: DrawOp[], row: number, col: number): string | null {
  for (const op of ops) {
    if (op.op === "fill" && op.row === row && op.col === col) return op.color;
  }
  return null;
}
