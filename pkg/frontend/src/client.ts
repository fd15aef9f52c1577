// Socket client: owns the view model, feeds it server messages, and sends
// exactly one wire command per user gesture. The socket is injected so
// tests can drive the whole pipeline with a scripted fake.

import type { ClientCommand, Tile } from "./protocol";
import { parseServerMessage } from "./protocol";
import { commandForClick } from "./input";
import {
  applyMessage,
  initialView,
  selectNpc,
  setConnection,
  setMode,
  setShake,
  type OverlayMode,
  type ViewModel,
} from "./viewmodel";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export class GridClient {
  view: ViewModel = initialView();
  private socket: SocketLike | null = null;
  private pendingStepPause = false;

  constructor(
    private readonly url: string,
    private readonly factory: SocketFactory,
    private readonly onChange: (view: ViewModel) => void = () => {},
  ) {}

  connect(): void {
    this.update(setConnection(this.view, "connecting"));
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => this.update(setConnection(this.view, "connected"));
    socket.onclose = () => this.update(setConnection(this.view, "disconnected"));
    socket.onmessage = (event) => {
      const message = parseServerMessage(event.data);
      if (!message) return;
      this.update(applyMessage(this.view, message));
      if (message.type === "snapshot" && this.pendingStepPause) {
        this.pendingStepPause = false;
        this.send({ type: "cmd.pause" });
      }
    };
  }

  send(command: ClientCommand): void {
    this.socket?.send(JSON.stringify(command));
  }

  // Returns the command sent for the click, if any.
  handleClick(tile: Tile): ClientCommand | null {
    const { command, shake } = commandForClick(this.view, tile);
    if (command) this.send(command);
    if (shake) this.update(setShake(this.view, shake));
    return command;
  }

  setMode(mode: OverlayMode): void {
    this.update(setMode(this.view, mode));
  }

  selectNpc(npc: string): void {
    this.update(selectNpc(this.view, npc));
  }

  pause(): void {
    this.send({ type: "cmd.pause" });
  }

  resume(): void {
    this.send({ type: "cmd.resume" });
  }

  // Single-tick stepping is a composite control: resume now, pause again
  // when the next snapshot lands.
  step(): void {
    this.pendingStepPause = true;
    this.send({ type: "cmd.resume" });
  }

  setTickRate(hz: number): void {
    this.send({ type: "cmd.tick_rate", hz });
  }

  private update(view: ViewModel): void {
    this.view = view;
    this.onChange(view);
  }
}
