import { describe, expect, it } from "vitest";

import type { ServerMessage, SnapshotMessage } from "../src/protocol";
import {
  applyMessage,
  doorStateFor,
  initialView,
  panelsDisagree,
  setConnection,
  unobservedDoors,
} from "../src/viewmodel";
import fixture from "./fixtures/walkthrough.json";

const messages = (fixture as unknown as Record<string, unknown>[]).filter(
  (m) => !("_client" in m),
) as unknown as ServerMessage[];
const snapshots = messages.filter((m) => m.type === "snapshot") as SnapshotMessage[];

function connectedView() {
  let view = initialView();
  for (const message of messages) {
    view = applyMessage(view, message);
    if (view.snapshot) break;
  }
  return view;
}

describe("applyMessage", () => {
  it("hello selects the first npc and marks connected", () => {
    const view = applyMessage(initialView(), messages[0]);
    expect(view.connection).toBe("connected");
    expect(view.selectedNpc).toBe("npc0");
  });

  it("keeps only the latest snapshot", () => {
    let view = initialView();
    for (const message of messages) view = applyMessage(view, message);
    expect(view.snapshot).toBe(snapshots[snapshots.length - 1]);
  });

  it("rejects become toasts", () => {
    const view = applyMessage(initialView(), {
      type: "reject",
      cmd: "cmd.move_to",
      reason: "impassable target",
    });
    expect(view.toasts).toEqual(["cmd.move_to: impassable target"]);
  });
});

describe("statelessness", () => {
  it("a fresh view fed one snapshot equals a long-lived view at that snapshot", () => {
    let longLived = initialView();
    for (const message of messages) longLived = applyMessage(longLived, message);
    let reloaded = initialView();
    reloaded = applyMessage(reloaded, messages[0]); // hello
    reloaded = applyMessage(reloaded, longLived.snapshot!);
    expect(doorStateFor(reloaded, "truth", "a")).toBe(doorStateFor(longLived, "truth", "a"));
    expect(doorStateFor(reloaded, "belief", "a")).toBe(doorStateFor(longLived, "belief", "a"));
    expect(panelsDisagree(reloaded)).toEqual(panelsDisagree(longLived));
  });
});

describe("belief bookkeeping", () => {
  it("tracks unobserved doors from observed_tick", () => {
    const view = connectedView();
    expect(unobservedDoors(view, "npc0")).toEqual(["a", "b", "c"]);
  });

  it("truth and belief diverge mid-fixture and agree at the end", () => {
    let view = initialView();
    const disagreements: string[][] = [];
    for (const message of messages) {
      view = applyMessage(view, message);
      if (message.type === "snapshot") disagreements.push(panelsDisagree(view));
    }
    expect(disagreements.some((doors) => doors.includes("a"))).toBe(true);
    expect(disagreements[disagreements.length - 1]).toEqual([]);
  });

  it("disconnect keeps the mode but reports the status", () => {
    const view = setConnection(connectedView(), "disconnected");
    expect(view.connection).toBe("disconnected");
    expect(view.mode).toBe("side_by_side");
  });
});
