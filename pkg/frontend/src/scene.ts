/**
 * Scene document model: parsing and validation of the canonical
 * `.scene.json` format served by the session service.
 *
 * The document carries up to three visualization layers --
 *   gm     translucent polylines tracing each entity's overall path
 *   avatar rigid-pose keyframe tracks driving 3D hand/object models
 *   fine   per-timestep dot+arrow glyphs
 * -- plus entity declarations and staging (the ordered groups in which
 * layers are presented). Decoding rejects any document that breaks a
 * structural invariant, so everything downstream can trust the shape.
 */

export type Vec3 = [number, number, number];
export type Vec4 = [number, number, number, number];

export type LayerName = "gm" | "avatar" | "fine";
export const LAYER_NAMES: readonly LayerName[] = ["gm", "avatar", "fine"];

export const SCENE_VERSION = 1;

const MODELS = ["hand_left", "hand_right", "object_sphere", "object_pen"] as const;
export type ModelId = (typeof MODELS)[number];

export interface GmVertex {
  position: Vec3;
  t: number;
}

export interface GmPolyline {
  entityId: string;
  vertices: GmVertex[];
  color: Vec4;
  opacity: number;
}

export interface Keyframe {
  t: number;
  position: Vec3;
  orientation: Vec4; // quaternion, (x, y, z, w)
}

export interface AvatarTrack {
  entityId: string;
  modelId: ModelId;
  keyframes: Keyframe[];
}

export interface FineGlyph {
  t: number;
  dot: Vec3;
  arrow: Vec3; // unit direction the pose faces
  arrowLen: number;
}

export interface SceneEntity {
  id: string;
  kind: "hand" | "object";
  color: Vec4;
}

export interface SceneMeta {
  source: string;
  duration: number;
  convention: string;
}

export interface SceneDocument {
  version: number;
  meta: SceneMeta;
  entities: SceneEntity[];
  gm: GmPolyline[] | null;
  avatar: AvatarTrack[] | null;
  fine: Record<string, FineGlyph[]> | null;
  staging: string[][];
  /** Earliest and latest sample time across all layers (derived). */
  tMin: number;
  tMax: number;
}

export class SceneFormatError extends Error {
  constructor(message: string) {
    super(`scene: ${message}`);
    this.name = "SceneFormatError";
  }
}

export function kindForEntity(id: string): "hand" | "object" | null {
  if (id === "left_hand" || id === "right_hand") return "hand";
  if (id.startsWith("object:")) return "object";
  return null;
}

export function modelForEntity(id: string, kind: string): ModelId {
  if (kind === "hand") {
    if (id === "left_hand") return "hand_left";
    if (id === "right_hand") return "hand_right";
    throw new SceneFormatError(`hand entity ${id} is not left_hand/right_hand`);
  }
  if (kind === "object") {
    const name = id.includes(":") ? id.slice(id.indexOf(":") + 1) : "";
    return name === "pen" ? "object_pen" : "object_sphere";
  }
  throw new SceneFormatError(`entity ${id} has unknown kind ${kind}`);
}

export function presentLayers(doc: SceneDocument): Set<LayerName> {
  const present = new Set<LayerName>();
  if (doc.gm !== null) present.add("gm");
  if (doc.avatar !== null) present.add("avatar");
  if (doc.fine !== null) present.add("fine");
  return present;
}

// --- decoding helpers -------------------------------------------------------

function fail(what: string): never {
  throw new SceneFormatError(what);
}

function asObject(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(`${what} must be an object`);
  }
  return value as Record<string, unknown>;
}

function asArray(value: unknown, what: string): unknown[] {
  if (!Array.isArray(value)) fail(`${what} must be a list`);
  return value;
}

function asString(value: unknown, what: string): string {
  if (typeof value !== "string") fail(`${what} must be a string`);
  return value;
}

function asNumber(value: unknown, what: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    fail(`${what} must be a finite number`);
  }
  return value;
}

function asVec(value: unknown, n: number, what: string): number[] {
  const arr = asArray(value, what);
  if (arr.length !== n) fail(`${what} must be a ${n}-vector`);
  return arr.map((v) => asNumber(v, what));
}

function requireIncreasing(times: number[], what: string): void {
  for (let i = 1; i < times.length; i++) {
    if (times[i] <= times[i - 1]) fail(`${what} times not strictly increasing`);
  }
}

function requireColor(color: number[], what: string): void {
  if (!color.every((c) => c >= 0 && c <= 1)) fail(`${what} color out of range`);
}

// --- decode + validate ------------------------------------------------------

/** Parse and validate a scene document; throws SceneFormatError. */
export function decodeScene(text: string): SceneDocument {
  let payload: unknown;
  try {
    payload = JSON.parse(text);
  } catch (exc) {
    fail(`invalid JSON: ${(exc as Error).message}`);
  }
  const top = asObject(payload, "top level");
  for (const key of ["version", "meta", "entities", "layers", "staging"]) {
    if (!(key in top)) fail(`missing top-level key '${key}'`);
  }

  const version = asNumber(top.version, "version");
  if (version !== SCENE_VERSION) fail(`unsupported version ${version}`);

  const metaObj = asObject(top.meta, "meta");
  const meta: SceneMeta = {
    source: asString(metaObj.source, "meta.source"),
    duration: asNumber(metaObj.duration, "meta.duration"),
    convention: asString(metaObj.convention, "meta.convention"),
  };

  const entities: SceneEntity[] = asArray(top.entities, "entities").map((raw) => {
    const e = asObject(raw, "entity");
    const id = asString(e.id, "entity id");
    const kind = asString(e.kind, "entity kind");
    if (kind !== "hand" && kind !== "object") fail(`entity ${id} has unknown kind ${kind}`);
    const color = asVec(e.color, 4, "entity color") as Vec4;
    return { id, kind, color };
  });

  const layersObj = asObject(top.layers, "layers");
  const unknown = Object.keys(layersObj).filter(
    (name) => !(LAYER_NAMES as readonly string[]).includes(name),
  );
  if (unknown.length > 0) fail(`unknown layers ${unknown.sort().join(",")}`);

  let gm: GmPolyline[] | null = null;
  if ("gm" in layersObj) {
    gm = asArray(layersObj.gm, "gm layer").map((raw) => {
      const line = asObject(raw, "gm polyline");
      return {
        entityId: asString(line.entity_id, "gm entity_id"),
        vertices: asArray(line.vertices, "gm vertices").map((v) => {
          const vertex = asObject(v, "gm vertex");
          return {
            position: asVec(vertex.position, 3, "gm vertex position") as Vec3,
            t: asNumber(vertex.t, "gm vertex t"),
          };
        }),
        color: asVec(line.color, 4, "gm color") as Vec4,
        opacity: asNumber(line.opacity, "gm opacity"),
      };
    });
  }

  let avatar: AvatarTrack[] | null = null;
  if ("avatar" in layersObj) {
    avatar = asArray(layersObj.avatar, "avatar layer").map((raw) => {
      const track = asObject(raw, "avatar track");
      const modelId = asString(track.model_id, "avatar model_id");
      if (!(MODELS as readonly string[]).includes(modelId)) {
        fail(`unknown model ${modelId}`);
      }
      return {
        entityId: asString(track.entity_id, "avatar entity_id"),
        modelId: modelId as ModelId,
        keyframes: asArray(track.keyframes, "avatar keyframes").map((raw2) => {
          const kf = asObject(raw2, "keyframe");
          return {
            t: asNumber(kf.t, "keyframe t"),
            position: asVec(kf.position, 3, "keyframe position") as Vec3,
            orientation: asVec(kf.orientation, 4, "keyframe orientation") as Vec4,
          };
        }),
      };
    });
  }

  let fine: Record<string, FineGlyph[]> | null = null;
  if ("fine" in layersObj) {
    fine = {};
    const fineObj = asObject(layersObj.fine, "fine layer");
    for (const entityId of Object.keys(fineObj).sort()) {
      fine[entityId] = asArray(fineObj[entityId], "fine glyphs").map((raw) => {
        const g = asObject(raw, "fine glyph");
        return {
          t: asNumber(g.t, "glyph t"),
          dot: asVec(g.dot, 3, "glyph dot") as Vec3,
          arrow: asVec(g.arrow, 3, "glyph arrow") as Vec3,
          arrowLen: asNumber(g.arrow_len, "glyph arrow_len"),
        };
      });
    }
  }

  const staging = asArray(top.staging, "staging").map((raw) =>
    asArray(raw, "staging group").map((name) => asString(name, "staging layer name")),
  );

  const doc: SceneDocument = {
    version,
    meta,
    entities,
    gm,
    avatar,
    fine,
    staging,
    tMin: 0,
    tMax: 0,
  };
  validateScene(doc);

  let tMin = Infinity;
  let tMax = -Infinity;
  for (const t of layerTimes(doc)) {
    if (t < tMin) tMin = t;
    if (t > tMax) tMax = t;
  }
  doc.tMin = tMin;
  doc.tMax = tMax;
  return doc;
}

function* layerTimes(doc: SceneDocument): Generator<number> {
  for (const line of doc.gm ?? []) for (const v of line.vertices) yield v.t;
  for (const track of doc.avatar ?? []) for (const kf of track.keyframes) yield kf.t;
  for (const glyphs of Object.values(doc.fine ?? {})) for (const g of glyphs) yield g.t;
}

/** Enforce every structural invariant; throws SceneFormatError. */
export function validateScene(doc: SceneDocument): void {
  const declared = new Set<string>();
  for (const entity of doc.entities) {
    if (declared.has(entity.id)) fail("duplicate entity declarations");
    declared.add(entity.id);
    if (kindForEntity(entity.id) !== entity.kind) {
      fail(`entity ${entity.id} declared with kind ${entity.kind}`);
    }
    requireColor(entity.color, `entity ${entity.id}`);
  }

  const present = presentLayers(doc);
  if (present.size === 0) fail("scene has no layers");

  for (const line of doc.gm ?? []) {
    if (!declared.has(line.entityId)) fail(`gm polyline references ${line.entityId}`);
    if (!(line.opacity > 0 && line.opacity < 1)) {
      fail(`gm opacity ${line.opacity} not in (0, 1)`);
    }
    requireColor(line.color, `gm ${line.entityId}`);
    requireIncreasing(line.vertices.map((v) => v.t), `gm ${line.entityId} vertex`);
  }
  for (const track of doc.avatar ?? []) {
    if (!declared.has(track.entityId)) fail(`avatar track references ${track.entityId}`);
    const entity = doc.entities.find((e) => e.id === track.entityId)!;
    if (track.modelId !== modelForEntity(entity.id, entity.kind)) {
      fail(`model ${track.modelId} inconsistent with entity ${entity.id}`);
    }
    requireIncreasing(track.keyframes.map((kf) => kf.t), `avatar ${track.entityId} keyframe`);
  }
  for (const [entityId, glyphs] of Object.entries(doc.fine ?? {})) {
    if (!declared.has(entityId)) fail(`fine glyphs reference ${entityId}`);
    for (const g of glyphs) {
      const [x, y, z] = g.arrow;
      const norm = Math.sqrt(x * x + y * y + z * z);
      if (Math.abs(norm - 1) > 1e-9) fail(`fine arrow not unit for ${entityId}`);
      if (g.arrowLen <= 0) fail(`arrow_len must be positive for ${entityId}`);
    }
  }

  const flat = doc.staging.flat();
  if (new Set(flat).size !== flat.length) fail("staging sets are not disjoint");
  if (flat.length !== present.size || !flat.every((name) => present.has(name as LayerName))) {
    fail("staging does not cover the layers present");
  }
  if (present.has("fine") && (present.has("gm") || present.has("avatar"))) {
    const stageOf = (name: string) => doc.staging.findIndex((s) => s.includes(name));
    const fineStage = stageOf("fine");
    for (const name of ["gm", "avatar"]) {
      if (present.has(name as LayerName) && stageOf(name) >= fineStage) {
        fail("staging must place fine strictly after gm/avatar");
      }
    }
  }

  let tMin = Infinity;
  let tMax = -Infinity;
  let any = false;
  for (const t of layerTimes(doc)) {
    any = true;
    if (t < tMin) tMin = t;
    if (t > tMax) tMax = t;
  }
  if (!any) fail("scene has no layer content");
  if (Math.abs(doc.meta.duration - (tMax - tMin)) > 1e-12) {
    fail(`duration ${doc.meta.duration} != layer span ${tMax - tMin}`);
  }
}
