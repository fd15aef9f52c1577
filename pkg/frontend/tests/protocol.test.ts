import { describe, expect, it } from "vitest";

import { GlyphGrid, parseServerMessage, rleDecode } from "../src/protocol";
import fixture from "./fixtures/walkthrough.json";

const messages = fixture as unknown as Record<string, unknown>[];
const hello = messages.find((m) => m.type === "hello") as never as import("../src/protocol").HelloMessage;
const snapshot = messages.find((m) => m.type === "snapshot") as never as import("../src/protocol").SnapshotMessage;

describe("rleDecode", () => {
  it("expands runs", () => {
    expect(rleDecode([[3, "#"], [1, "."], [2, "a"]])).toBe("###.aa");
  });

  it("round-trips the fixture tile grid", () => {
    const glyphs = rleDecode(hello.tiles);
    expect(glyphs.length).toBe(hello.width * hello.height);
    expect(glyphs.startsWith("###########")).toBe(true);
  });
});

describe("parseServerMessage", () => {
  it("accepts every recorded server message", () => {
    for (const message of messages) {
      if ("_client" in message) continue;
      expect(parseServerMessage(JSON.stringify(message))).not.toBeNull();
    }
  });

  it("drops unknown types and garbage", () => {
    expect(parseServerMessage('{"type":"cmd.warp"}')).toBeNull();
    expect(parseServerMessage("not json")).toBeNull();
    expect(parseServerMessage("42")).toBeNull();
  });
});

describe("GlyphGrid", () => {
  const grid = new GlyphGrid(snapshot.tiles, snapshot.width, snapshot.height);

  it("classifies tiles from the wire grid", () => {
    expect(grid.isWall(0, 0)).toBe(true);
    expect(grid.isFloor(2, 1)).toBe(true);
    expect(grid.doorAt(2, 5)).toBe("a");
    expect(grid.doorAt(2, 1)).toBeNull();
  });

  it("answers null outside the grid", () => {
    expect(grid.at(-1, 0)).toBeNull();
    expect(grid.at(0, 99)).toBeNull();
  });
});
