// Browser entry: canvas backend for the draw ops plus the control strip.

import { GridClient } from "./client";
import { tileAtPixel } from "./input";
import { renderView, type DrawOp, type Panel, type PanelSource } from "./render";
import type { ViewModel, OverlayMode } from "./viewmodel";

const TILE = 36;
const MARGIN = 8;

const host = document.getElementById("panels") as HTMLDivElement;
const toastBox = document.getElementById("toasts") as HTMLDivElement;
const status = document.getElementById("status") as HTMLSpanElement;
const npcSelect = document.getElementById("npc") as HTMLSelectElement;

const canvases = new Map<PanelSource, HTMLCanvasElement>();

function canvasFor(panel: Panel, view: ViewModel): HTMLCanvasElement {
  let canvas = canvases.get(panel.source);
  if (!canvas) {
    const wrap = document.createElement("div");
    wrap.className = "panel";
    const title = document.createElement("div");
    title.className = "panel-title";
    title.id = `title-${panel.source}`;
    canvas = document.createElement("canvas");
    canvas.dataset.source = panel.source;
    wrap.append(title, canvas);
    host.append(wrap);
    canvases.set(panel.source, canvas);
    canvas.addEventListener("click", (event) => {
      const snap = client.view.snapshot;
      if (!snap) return;
      const rect = canvas!.getBoundingClientRect();
      const tile = tileAtPixel(
        { originX: MARGIN, originY: MARGIN, tileSize: TILE },
        snap.width,
        snap.height,
        event.clientX - rect.left,
        event.clientY - rect.top,
      );
      if (tile) client.handleClick(tile);
    });
  }
  const snap = view.snapshot;
  const width = (snap?.width ?? 12) * TILE + 2 * MARGIN;
  const height = (snap?.height ?? 8) * TILE + 2 * MARGIN;
  if (canvas.width !== width || canvas.height !== height) {
    canvas.width = width;
    canvas.height = height;
  }
  const title = document.getElementById(`title-${panel.source}`);
  if (title) title.textContent = panel.title;
  return canvas;
}

function execute(ctx: CanvasRenderingContext2D, ops: DrawOp[]): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.font = `${TILE * 0.6}px monospace`;
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  for (const op of ops) {
    if (op.op === "banner") {
      ctx.fillStyle = "#999";
      ctx.fillText(op.text, ctx.canvas.width / 2, ctx.canvas.height / 2);
      continue;
    }
    if (op.op === "path") {
      ctx.strokeStyle = op.color;
      ctx.lineWidth = 3;
      ctx.beginPath();
      op.points.forEach(([row, col], i) => {
        const x = MARGIN + col * TILE + TILE / 2;
        const y = MARGIN + row * TILE + TILE / 2;
        if (i === 0) ctx.moveTo(x, y);
        else ctx.lineTo(x, y);
      });
      ctx.stroke();
      continue;
    }
    const x = MARGIN + op.col * TILE;
    const y = MARGIN + op.row * TILE;
    if (op.op === "fill" || op.op === "shade") {
      ctx.fillStyle = op.color;
      ctx.fillRect(x, y, TILE - 1, TILE - 1);
    } else {
      ctx.fillStyle = op.color;
      ctx.fillText(op.glyph, x + TILE / 2, y + TILE / 2);
    }
  }
}

function redraw(view: ViewModel): void {
  status.textContent = `${view.connection} | tick ${view.snapshot?.tick ?? "-"}${
    view.paused ? " | paused" : ""
  }`;
  for (const panel of renderView(view)) {
    const canvas = canvasFor(panel, view);
    canvas.parentElement!.style.display = "";
    execute(canvas.getContext("2d")!, panel.ops);
  }
  const shown = new Set(renderView(view).map((p) => p.source));
  for (const [source, canvas] of canvases) {
    if (!shown.has(source)) canvas.parentElement!.style.display = "none";
  }
  while (npcSelect.options.length < (view.hello?.npcs.length ?? 0)) {
    const option = document.createElement("option");
    option.value = option.textContent = view.hello!.npcs[npcSelect.options.length];
    npcSelect.append(option);
  }
  toastBox.textContent = view.toasts.slice(-3).join("  |  ");
}

const url = `ws://${location.host}/ws`;
const client = new GridClient(url, (u) => new WebSocket(u) as never, redraw);

(document.getElementById("pause") as HTMLButtonElement).onclick = () => client.pause();
(document.getElementById("resume") as HTMLButtonElement).onclick = () => client.resume();
(document.getElementById("step") as HTMLButtonElement).onclick = () => client.step();
(document.getElementById("mode") as HTMLSelectElement).onchange = (event) =>
  client.setMode((event.target as HTMLSelectElement).value as OverlayMode);
npcSelect.onchange = () => client.selectNpc(npcSelect.value);

client.connect();
redraw(client.view);
