/**
 * three.js realization of a scene document. Revealing is count-based:
 * gm polylines advance their draw range and fine glyph instances grow
 * their instance count as the clock reaches each sample's time, so the
 * vertex/glyph counts on screen equal the counts computed by the pure
 * bookkeeping in counts.ts. Avatar models are posed by interpolating
 * their keyframe tracks.
 */

import * as THREE from "three";
import { visibleGlyphCount, visibleVertexCount } from "../counts";
import { samplePose } from "../interp";
import type { GmPolyline, LayerName, SceneDocument, Vec4 } from "../scene";
import { buildModel, disposeObject } from "./models";

const DOT_RADIUS_FACTOR = 0.22; // dot radius as a fraction of arrow length

interface GmEntry {
  entityId: string;
  line: THREE.Line;
  polyline: GmPolyline;
}

interface AvatarEntry {
  entityId: string;
  group: THREE.Group;
  trackIndex: number;
}

interface FineEntry {
  entityId: string;
  dots: THREE.InstancedMesh;
  arrows: THREE.InstancedMesh;
  glyphCount: number;
}

export class SceneGraph {
  readonly root = new THREE.Group();
  private readonly doc: SceneDocument;
  private readonly gmEntries: GmEntry[] = [];
  private readonly avatarEntries: AvatarEntry[] = [];
  private readonly fineEntries: FineEntry[] = [];
  private readonly markers = new THREE.Group();
  private glyphScale: number;

  constructor(doc: SceneDocument, glyphScale = 1.0) {
    this.doc = doc;
    this.glyphScale = glyphScale;
    this.buildGm();
    this.buildAvatar();
    this.buildFine();
    this.buildMarkers();
    this.root.add(this.markers);
  }

  private colorOf(entityId: string): Vec4 {
    const entity = this.doc.entities.find((e) => e.id === entityId);
    return entity ? entity.color : [0.7, 0.7, 0.7, 1.0];
  }

  private buildGm(): void {
    for (const line of this.doc.gm ?? []) {
      const positions = new Float32Array(line.vertices.length * 3);
      line.vertices.forEach((v, i) => {
        positions[i * 3] = v.position[0];
        positions[i * 3 + 1] = v.position[1];
        positions[i * 3 + 2] = v.position[2];
      });
      const geometry = new THREE.BufferGeometry();
      geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
      const material = new THREE.LineBasicMaterial({
        color: new THREE.Color(line.color[0], line.color[1], line.color[2]),
        transparent: true,
        opacity: line.opacity,
      });
      const object = new THREE.Line(geometry, material);
      object.frustumCulled = false;
      this.gmEntries.push({ entityId: line.entityId, line: object, polyline: line });
      this.root.add(object);
    }
  }

  private buildAvatar(): void {
    (this.doc.avatar ?? []).forEach((track, index) => {
      const group = buildModel(track.modelId, this.colorOf(track.entityId));
      this.avatarEntries.push({ entityId: track.entityId, group, trackIndex: index });
      this.root.add(group);
    });
  }

  private buildFine(): void {
    const up = new THREE.Vector3(0, 1, 0);
    for (const [entityId, glyphs] of Object.entries(this.doc.fine ?? {})) {
      const color = this.colorOf(entityId);
      const rgb = new THREE.Color(color[0], color[1], color[2]);

      const dotGeometry = new THREE.SphereGeometry(1, 10, 8);
      const dotMaterial = new THREE.MeshStandardMaterial({ color: rgb, roughness: 0.6 });
      const dots = new THREE.InstancedMesh(dotGeometry, dotMaterial, glyphs.length);
      dots.frustumCulled = false;

      const arrowGeometry = new THREE.ConeGeometry(0.22, 1, 8);
      const arrowMaterial = new THREE.MeshStandardMaterial({ color: rgb, roughness: 0.6 });
      const arrows = new THREE.InstancedMesh(arrowGeometry, arrowMaterial, glyphs.length);
      arrows.frustumCulled = false;

      const matrix = new THREE.Matrix4();
      const quat = new THREE.Quaternion();
      const dir = new THREE.Vector3();
      glyphs.forEach((glyph, i) => {
        const radius = glyph.arrowLen * DOT_RADIUS_FACTOR * this.glyphScale;
        matrix.compose(
          new THREE.Vector3(...glyph.dot),
          quat.identity(),
          new THREE.Vector3(radius, radius, radius),
        );
        dots.setMatrixAt(i, matrix);

        dir.set(glyph.arrow[0], glyph.arrow[1], glyph.arrow[2]);
        quat.setFromUnitVectors(up, dir);
        const len = glyph.arrowLen * this.glyphScale;
        matrix.compose(
          new THREE.Vector3(
            glyph.dot[0] + glyph.arrow[0] * len * 0.75,
            glyph.dot[1] + glyph.arrow[1] * len * 0.75,
            glyph.dot[2] + glyph.arrow[2] * len * 0.75,
          ),
          quat,
          new THREE.Vector3(len, len, len),
        );
        arrows.setMatrixAt(i, matrix);
      });
      dots.instanceMatrix.needsUpdate = true;
      arrows.instanceMatrix.needsUpdate = true;

      this.fineEntries.push({ entityId, dots, arrows, glyphCount: glyphs.length });
      this.root.add(dots);
      this.root.add(arrows);
    }
  }

  private buildMarkers(): void {
    // start/end markers per trajectory: green sphere at the first
    // sample, checkered flag at the last
    const flagTexture = makeCheckerTexture();
    for (const line of this.doc.gm ?? []) {
      if (line.vertices.length === 0) continue;
      const first = line.vertices[0].position;
      const last = line.vertices[line.vertices.length - 1].position;

      const start = new THREE.Mesh(
        new THREE.SphereGeometry(0.014, 12, 10),
        new THREE.MeshStandardMaterial({ color: new THREE.Color(0.1, 0.75, 0.2) }),
      );
      start.position.set(first[0], first[1], first[2]);
      this.markers.add(start);

      const flag = new THREE.Sprite(
        new THREE.SpriteMaterial({ map: flagTexture, depthTest: false }),
      );
      flag.scale.setScalar(0.05);
      flag.position.set(last[0], last[1] + 0.04, last[2]);
      this.markers.add(flag);
    }
  }

  /** Reveal/pose everything for playback time tAbs (absolute seconds). */
  applyTime(tAbs: number, visible: ReadonlySet<LayerName>): void {
    for (const entry of this.gmEntries) {
      entry.line.visible = visible.has("gm");
      if (!entry.line.visible) continue;
      const count = visibleVertexCount(entry.polyline.vertices, tAbs);
      entry.line.geometry.setDrawRange(0, count);
    }
    for (const entry of this.avatarEntries) {
      entry.group.visible = visible.has("avatar");
      if (!entry.group.visible) continue;
      const track = this.doc.avatar![entry.trackIndex];
      const pose = samplePose(track.keyframes, tAbs);
      entry.group.position.set(...pose.position);
      entry.group.quaternion.set(
        pose.orientation[0],
        pose.orientation[1],
        pose.orientation[2],
        pose.orientation[3],
      );
    }
    for (const entry of this.fineEntries) {
      const show = visible.has("fine");
      entry.dots.visible = show;
      entry.arrows.visible = show;
      if (!show) continue;
      const glyphs = this.doc.fine![entry.entityId];
      const count = visibleGlyphCount(glyphs, tAbs);
      entry.dots.count = count;
      entry.arrows.count = count;
    }
    this.markers.visible = visible.has("gm") || visible.has("avatar");
  }

  setGlyphScale(scale: number): void {
    if (scale === this.glyphScale) return;
    this.glyphScale = scale;
    const up = new THREE.Vector3(0, 1, 0);
    const matrix = new THREE.Matrix4();
    const quat = new THREE.Quaternion();
    const dir = new THREE.Vector3();
    for (const entry of this.fineEntries) {
      const glyphs = this.doc.fine![entry.entityId];
      glyphs.forEach((glyph, i) => {
        const radius = glyph.arrowLen * DOT_RADIUS_FACTOR * scale;
        matrix.compose(
          new THREE.Vector3(...glyph.dot),
          quat.identity(),
          new THREE.Vector3(radius, radius, radius),
        );
        entry.dots.setMatrixAt(i, matrix);
        dir.set(glyph.arrow[0], glyph.arrow[1], glyph.arrow[2]);
        quat.setFromUnitVectors(up, dir);
        const len = glyph.arrowLen * scale;
        matrix.compose(
          new THREE.Vector3(
            glyph.dot[0] + glyph.arrow[0] * len * 0.75,
            glyph.dot[1] + glyph.arrow[1] * len * 0.75,
            glyph.dot[2] + glyph.arrow[2] * len * 0.75,
          ),
          quat,
          new THREE.Vector3(len, len, len),
        );
        entry.arrows.setMatrixAt(i, matrix);
      });
      entry.dots.instanceMatrix.needsUpdate = true;
      entry.arrows.instanceMatrix.needsUpdate = true;
    }
  }

  dispose(): void {
    disposeObject(this.root);
  }
}

function makeCheckerTexture(): THREE.Texture {
  const size = 32;
  const cell = 8;
  const canvas = document.createElement("canvas");
  canvas.width = size;
  canvas.height = size;
  const ctx = canvas.getContext("2d")!;
  for (let y = 0; y < size / cell; y++) {
    for (let x = 0; x < size / cell; x++) {
      ctx.fillStyle = (x + y) % 2 === 0 ? "#111111" : "#f2f2f2";
      ctx.fillRect(x * cell, y * cell, cell, cell);
    }
  }
  const texture = new THREE.CanvasTexture(canvas);
  texture.magFilter = THREE.NearestFilter;
  return texture;
}
