import { describe, expect, it } from "vitest";
import {
  documentCounts,
  renderedCounts,
  visibleGlyphCount,
  visibleVertexCount,
} from "../src/counts";
import { decodeScene } from "../src/scene";
import type { LayerName } from "../src/scene";
import { fixtureText } from "./helpers";

const ALL: ReadonlySet<LayerName> = new Set(["gm", "avatar", "fine"]);

describe("documentCounts", () => {
  it("totals the pickup document (91 samples x 2 entities, hand-only glyphs)", () => {
    const doc = decodeScene(fixtureText("pickup.scene.json"));
    expect(documentCounts(doc)).toEqual({
      gmVertices: 182,
      avatarKeyframes: 182,
      fineGlyphs: 91,
    });
  });

  it("totals the toss document (73 samples x 2 entities)", () => {
    const doc = decodeScene(fixtureText("toss.scene.json"));
    expect(documentCounts(doc)).toEqual({
      gmVertices: 146,
      avatarKeyframes: 146,
      fineGlyphs: 73,
    });
  });

  it("counts zero where a layer is absent", () => {
    const doc = decodeScene(fixtureText("nofine.scene.json"));
    expect(documentCounts(doc).fineGlyphs).toBe(0);
    expect(documentCounts(doc).gmVertices).toBeGreaterThan(0);
  });
});

describe("visible counts by time", () => {
  it("reveals exactly the vertices whose time has been reached", () => {
    const doc = decodeScene(fixtureText("pickup.scene.json"));
    const line = doc.gm![0];
    const times = line.vertices.map((v) => v.t);
    expect(visibleVertexCount(line.vertices, times[0])).toBe(1);
    expect(visibleVertexCount(line.vertices, times[0] - 1e-9)).toBe(0);
    expect(visibleVertexCount(line.vertices, times[4])).toBe(5);
    // halfway between sample 4 and 5 still shows 5 vertices
    expect(visibleVertexCount(line.vertices, (times[4] + times[5]) / 2)).toBe(5);
    expect(visibleVertexCount(line.vertices, times[times.length - 1])).toBe(times.length);
  });

  it("reveals glyphs the same way", () => {
    const doc = decodeScene(fixtureText("pickup.scene.json"));
    const glyphs = doc.fine!["right_hand"];
    expect(visibleGlyphCount(glyphs, doc.tMin)).toBe(1);
    expect(visibleGlyphCount(glyphs, doc.tMax)).toBe(glyphs.length);
    expect(visibleGlyphCount(glyphs, doc.tMin - 1)).toBe(0);
  });
});

describe("renderedCounts", () => {
  it.each(["pickup", "toss", "draw"])(
    "matches documentCounts at the end of the clip (%s)",
    (name) => {
      const doc = decodeScene(fixtureText(`${name}.scene.json`));
      const duration = doc.meta.duration;
      expect(renderedCounts(doc, duration, ALL)).toEqual(documentCounts(doc));
    },
  );

  it("shows one vertex per polyline and all avatar keyframes at clock zero", () => {
    const doc = decodeScene(fixtureText("pickup.scene.json"));
    const counts = renderedCounts(doc, 0, ALL);
    expect(counts.gmVertices).toBe(doc.gm!.length);
    expect(counts.fineGlyphs).toBe(Object.keys(doc.fine!).length);
    // the avatar is posed, not revealed: its keyframes are all-or-nothing
    expect(counts.avatarKeyframes).toBe(182);
  });

  it("renders nothing for hidden layers", () => {
    const doc = decodeScene(fixtureText("pickup.scene.json"));
    const duration = doc.meta.duration;
    expect(renderedCounts(doc, duration, new Set())).toEqual({
      gmVertices: 0,
      avatarKeyframes: 0,
      fineGlyphs: 0,
    });
    const gmOnly = renderedCounts(doc, duration, new Set<LayerName>(["gm"]));
    expect(gmOnly.gmVertices).toBe(182);
    expect(gmOnly.avatarKeyframes).toBe(0);
    expect(gmOnly.fineGlyphs).toBe(0);
  });

  it("grows monotonically as the clock advances", () => {
    const doc = decodeScene(fixtureText("draw.scene.json"));
    const duration = doc.meta.duration;
    let prev = -1;
    for (let i = 0; i <= 10; i++) {
      const counts = renderedCounts(doc, (duration * i) / 10, ALL);
      const total = counts.gmVertices + counts.fineGlyphs;
      expect(total).toBeGreaterThanOrEqual(prev);
      prev = total;
    }
  });

  it("reduced density keeps endpoint glyphs and shrinks the count", () => {
    const full = decodeScene(fixtureText("hand100-d1.scene.json"));
    const sparse = decodeScene(fixtureText("hand100-d01.scene.json"));
    expect(documentCounts(full).fineGlyphs).toBe(100);
    expect(documentCounts(sparse).fineGlyphs).toBe(11);
    const fullGlyphs = full.fine!["right_hand"];
    const sparseGlyphs = sparse.fine!["right_hand"];
    expect(sparseGlyphs[0].t).toBe(fullGlyphs[0].t);
    expect(sparseGlyphs[sparseGlyphs.length - 1].t).toBe(fullGlyphs[fullGlyphs.length - 1].t);
  });
});
