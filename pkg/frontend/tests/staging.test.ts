import { describe, expect, it } from "vitest";
import { StagingGate } from "../src/staging";

const TWO_STAGE = [["avatar", "gm"], ["fine"]];

describe("StagingGate", () => {
  it("unlocks only the first stage initially", () => {
    const gate = new StagingGate(TWO_STAGE);
    expect(gate.unlocked("gm")).toBe(true);
    expect(gate.unlocked("avatar")).toBe(true);
    expect(gate.unlocked("fine")).toBe(false);
    expect(gate.fullyOpen).toBe(false);
  });

  it("unlocks the next stage after a completed pass", () => {
    const gate = new StagingGate(TWO_STAGE);
    expect(gate.completePass()).toBe(true);
    expect(gate.unlocked("fine")).toBe(true);
    expect(gate.fullyOpen).toBe(true);
  });

  it("reports no new unlock once fully open", () => {
    const gate = new StagingGate(TWO_STAGE);
    gate.completePass();
    expect(gate.completePass()).toBe(false);
    expect(gate.completePass()).toBe(false);
    expect(gate.fullyOpen).toBe(true);
  });

  it("treats a single-stage document as fully open from the start", () => {
    const gate = new StagingGate([["avatar", "gm"]]);
    expect(gate.fullyOpen).toBe(true);
    expect(gate.unlocked("gm")).toBe(true);
    expect(gate.completePass()).toBe(false);
  });

  it("leaves unstaged layers free", () => {
    const gate = new StagingGate([["gm"], ["fine"]]);
    expect(gate.unlocked("avatar")).toBe(true);
  });

  it("filters intended layers down to the unlocked ones", () => {
    const gate = new StagingGate(TWO_STAGE);
    const intent = new Set(["gm", "avatar", "fine"]);
    expect(gate.gatedVisible(intent)).toEqual(new Set(["gm", "avatar"]));
    gate.completePass();
    expect(gate.gatedVisible(intent)).toEqual(new Set(["gm", "avatar", "fine"]));
  });

  it("respects intent: unlocked but untoggled layers stay hidden", () => {
    const gate = new StagingGate(TWO_STAGE);
    gate.completePass();
    expect(gate.gatedVisible(new Set(["fine"]))).toEqual(new Set(["fine"]));
    expect(gate.gatedVisible(new Set())).toEqual(new Set());
  });

  it("walks a three-stage sequence one pass at a time", () => {
    const gate = new StagingGate([["gm"], ["avatar"], ["fine"]]);
    expect(gate.gatedVisible(new Set(["gm", "avatar", "fine"]))).toEqual(new Set(["gm"]));
    gate.completePass();
    expect(gate.unlocked("avatar")).toBe(true);
    expect(gate.unlocked("fine")).toBe(false);
    gate.completePass();
    expect(gate.unlocked("fine")).toBe(true);
    expect(gate.fullyOpen).toBe(true);
  });
});
