/**
 * Vertex/keyframe/glyph bookkeeping. The renderer reveals gm vertices
 * and fine glyphs whose sample time has been reached by the playback
 * clock; these helpers compute those counts from the document alone so
 * the rendering path and the tests agree by construction.
 */

import type { FineGlyph, GmVertex, LayerName, SceneDocument } from "./scene";

export interface LayerCounts {
  gmVertices: number;
  avatarKeyframes: number;
  fineGlyphs: number;
}

/** Total counts carried by the document, regardless of playback time. */
export function documentCounts(doc: SceneDocument): LayerCounts {
  let gmVertices = 0;
  for (const line of doc.gm ?? []) gmVertices += line.vertices.length;
  let avatarKeyframes = 0;
  for (const track of doc.avatar ?? []) avatarKeyframes += track.keyframes.length;
  let fineGlyphs = 0;
  for (const glyphs of Object.values(doc.fine ?? {})) fineGlyphs += glyphs.length;
  return { gmVertices, avatarKeyframes, fineGlyphs };
}

/** Count of leading entries whose time is <= tAbs (times are sorted). */
function countReached(times: ArrayLike<number>, tAbs: number): number {
  let lo = 0;
  let hi = times.length;
  while (lo < hi) {
    const mid = (lo + hi) >> 1;
    if (times[mid] <= tAbs) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

export function visibleVertexCount(vertices: GmVertex[], tAbs: number): number {
  return countReached(vertices.map((v) => v.t), tAbs);
}

export function visibleGlyphCount(glyphs: FineGlyph[], tAbs: number): number {
  return countReached(glyphs.map((g) => g.t), tAbs);
}

/**
 * Counts actually rendered at playback time `clock` (seconds from the
 * start of the clip) with the given layers visible. Avatar models are
 * posed rather than revealed, so their keyframe count is all-or-nothing.
 */
export function renderedCounts(
  doc: SceneDocument,
  clock: number,
  visible: ReadonlySet<LayerName>,
): LayerCounts {
  const tAbs = doc.tMin + clock;
  let gmVertices = 0;
  if (visible.has("gm")) {
    for (const line of doc.gm ?? []) gmVertices += visibleVertexCount(line.vertices, tAbs);
  }
  let avatarKeyframes = 0;
  if (visible.has("avatar")) {
    for (const track of doc.avatar ?? []) avatarKeyframes += track.keyframes.length;
  }
  let fineGlyphs = 0;
  if (visible.has("fine")) {
    for (const glyphs of Object.values(doc.fine ?? {})) {
      fineGlyphs += visibleGlyphCount(glyphs, tAbs);
    }
  }
  return { gmVertices, avatarKeyframes, fineGlyphs };
}
