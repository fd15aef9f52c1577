// Click handling: every pointer gesture maps to exactly one wire command
// or to none (walls shake instead). The mapping is pure so it can be
// tested without a canvas.

import type { ClientCommand, Tile } from "./protocol";
import { grid, type ViewModel } from "./viewmodel";

export interface GridGeometry {
  originX: number;
  originY: number;
  tileSize: number;
}

export function tileAtPixel(
  geometry: GridGeometry,
  width: number,
  height: number,
  px: number,
  py: number,
): Tile | null {
  const col = Math.floor((px - geometry.originX) / geometry.tileSize);
  const row = Math.floor((py - geometry.originY) / geometry.tileSize);
  if (row < 0 || row >= height || col < 0 || col >= width) return null;
  return [row, col];
}

export interface ClickResult {
  command: ClientCommand | null;
  shake: Tile | null;
}

export function commandForClick(view: ViewModel, tile: Tile): ClickResult {
  const g = grid(view);
  if (!g || view.connection !== "connected") return { command: null, shake: null };
  const [row, col] = tile;
  const door = g.doorAt(row, col);
  if (door !== null) {
    return { command: { type: "cmd.toggle_door", door }, shake: null };
  }
  if (g.isFloor(row, col)) {
    if (!view.selectedNpc) return { command: null, shake: null };
    return {
      command: { type: "cmd.move_to", npc: view.selectedNpc, target: [row, col] },
      shake: null,
    };
  }
  return { command: null, shake: tile };
}
