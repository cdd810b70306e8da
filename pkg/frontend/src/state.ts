/**
 * Viewer state machine, free of any rendering concerns so the whole
 * review workflow is unit-testable: load a scene (from the service or a
 * local file), drive the playback clock, honor staging on first
 * playback, re-request scenes when the density changes (latest wins),
 * toggle layers and theme, orbit the camera within bounds.
 */

import { ApiError, LatestWins, SceneParams, ServiceClient } from "./api";
import type { Theme } from "./contrast";
import { LayerCounts, documentCounts, renderedCounts } from "./counts";
import { PlaybackClock } from "./playback";
import type { LayerName, SceneDocument, Vec3 } from "./scene";
import { decodeScene, presentLayers } from "./scene";
import { StagingGate } from "./staging";

export const MIN_CAMERA_DISTANCE = 0.2;
export const MAX_CAMERA_DISTANCE = 20.0;
const MAX_PITCH = 1.45; // just short of straight up/down, radians

export interface CameraState {
  target: Vec3;
  distance: number;
  yaw: number;
  pitch: number;
}

export interface OrbitDelta {
  yaw?: number;
  pitch?: number;
  /** Multiplies the orbit distance; 1 keeps it, <1 zooms in. */
  zoomFactor?: number;
}

export class ViewerApp {
  scene: SceneDocument | null = null;
  sessionId: string | null = null;
  clock = new PlaybackClock(0);
  gate = new StagingGate([]);
  density = 1.0;
  smooth = 1;
  theme: Theme = "dark";
  glyphScale = 1.0;
  banner: string | null = null;
  camera: CameraState = {
    target: [0, 1, 0.2],
    distance: 2.5,
    yaw: Math.PI / 4,
    pitch: 0.35,
  };
  /** Bumped whenever the scene object is replaced. */
  revision = 0;

  private intent = new Set<LayerName>();
  private readonly client: ServiceClient | null;
  private readonly sceneRequests = new LatestWins();

  constructor(client: ServiceClient | null = null) {
    this.client = client;
  }

  // --- scene loading --------------------------------------------------------

  /**
   * Decode scene text and swap it in: clock at 0, paused, every present
   * layer visible, staging gate reset. On decode failure the previous
   * state is untouched and the error lands in the banner.
   */
  loadSceneText(text: string, sessionId: string | null = null): boolean {
    let doc: SceneDocument;
    try {
      doc = decodeScene(text);
    } catch (exc) {
      this.banner = (exc as Error).message;
      return false;
    }
    this.scene = doc;
    this.sessionId = sessionId;
    this.clock = new PlaybackClock(doc.meta.duration);
    this.gate = new StagingGate(doc.staging);
    this.intent = new Set(presentLayers(doc));
    this.banner = null;
    this.revision += 1;
    this.frameCamera(doc);
    return true;
  }

  /** Fetch a stored session's scene from the service and load it. */
  async loadSession(sessionId: string, params?: Partial<SceneParams>): Promise<boolean> {
    if (this.client === null) {
      this.banner = "no service connection";
      return false;
    }
    const request: SceneParams = {
      density: params?.density ?? this.density,
      smooth: params?.smooth ?? this.smooth,
      layers: params?.layers ?? ["gm", "avatar", "fine"],
    };
    let result;
    try {
      result = await this.sceneRequests.run((signal) =>
        this.client!.getSceneText(sessionId, request, signal),
      );
    } catch (exc) {
      this.banner = exc instanceof ApiError ? `${exc.code}: ${exc.message}` : String(exc);
      return false;
    }
    if (result.stale) return false;
    if (!this.loadSceneText(result.value, sessionId)) return false;
    this.density = request.density;
    this.smooth = request.smooth;
    return true;
  }

  // --- playback -------------------------------------------------------------

  get duration(): number {
    return this.scene?.meta.duration ?? 0;
  }

  get playing(): boolean {
    return this.clock.playing;
  }

  get time(): number {
    return this.clock.clock;
  }

  play(): void {
    if (this.scene !== null) this.clock.play();
  }

  pause(): void {
    this.clock.pause();
  }

  togglePlay(): void {
    if (this.scene !== null) this.clock.toggle();
  }

  /** Scrub to t (clamped). Reaching the end completes the current stage. */
  setTime(t: number): void {
    if (this.scene === null) return;
    this.clock.setTime(t);
    if (this.clock.atEnd) this.gate.completePass();
  }

  /**
   * Advance playback by dt seconds of wall time. Completing a pass with
   * stages still locked rewinds and plays the next stage; completing
   * the final pass pauses at the end.
   */
  tick(dt: number): void {
    if (this.scene === null) return;
    if (this.clock.tick(dt)) {
      if (this.gate.completePass()) {
        this.clock.setTime(0);
      } else {
        this.clock.pause();
      }
    }
  }

  // --- layers and staging ---------------------------------------------------

  /** Layers the user has switched on (before staging is applied). */
  get intendedLayers(): ReadonlySet<LayerName> {
    return this.intent;
  }

  /** Layers actually rendered: user intent gated by staging. */
  get visibleLayers(): Set<LayerName> {
    return this.gate.gatedVisible(this.intent) as Set<LayerName>;
  }

  /**
   * Flip a layer's visibility. Toggling a layer the scene does not carry
   * is a no-op, as is toggling one whose stage has not been reached yet.
   */
  toggleLayer(name: LayerName): void {
    if (this.scene === null) return;
    if (!presentLayers(this.scene).has(name)) return;
    if (!this.gate.unlocked(name)) return;
    if (this.intent.has(name)) this.intent.delete(name);
    else this.intent.add(name);
  }

  layerPresent(name: LayerName): boolean {
    return this.scene !== null && presentLayers(this.scene).has(name);
  }

  // --- density --------------------------------------------------------------

  /**
   * Re-request the current session's scene at a new density. The clock
   * survives the swap; a failed request keeps the previous scene (and
   * density) and surfaces the error in the banner.
   */
  async setDensity(d: number): Promise<boolean> {
    if (!(d > 0 && d <= 1)) {
      this.banner = `density must be in (0, 1], got ${d}`;
      return false;
    }
    if (this.scene === null) return false;
    if (d === this.density) return true; // nothing to do, no request
    if (this.sessionId === null || this.client === null) {
      this.banner = "density control needs a scene served from a session";
      return false;
    }
    const request: SceneParams = {
      density: d,
      smooth: this.smooth,
      layers: ["gm", "avatar", "fine"],
    };
    const keepClock = this.clock.clock;
    const keepPlaying = this.clock.playing;
    const keepGate = this.gate;
    const keepIntent = new Set(this.intent);
    let result;
    try {
      result = await this.sceneRequests.run((signal) =>
        this.client!.getSceneText(this.sessionId!, request, signal),
      );
    } catch (exc) {
      this.banner = exc instanceof ApiError ? `${exc.code}: ${exc.message}` : String(exc);
      return false;
    }
    if (result.stale) return false;
    if (!this.loadSceneText(result.value, this.sessionId)) return false;
    this.density = d;
    // the swap is a re-parameterization, not a new review: restore the
    // clock, staging progress, and the user's layer choices
    this.clock.setTime(keepClock);
    if (keepPlaying) this.clock.play();
    this.gate = keepGate;
    const present = presentLayers(this.scene!);
    this.intent = new Set([...keepIntent].filter((name) => present.has(name)));
    return true;
  }

  // --- theme and camera -----------------------------------------------------

  setTheme(theme: Theme): void {
    this.theme = theme;
  }

  setGlyphScale(scale: number): void {
    this.glyphScale = Math.min(Math.max(scale, 0.25), 4.0);
  }

  orbitCamera(delta: OrbitDelta): void {
    const cam = this.camera;
    if (delta.yaw !== undefined) cam.yaw += delta.yaw;
    if (delta.pitch !== undefined) {
      cam.pitch = Math.min(Math.max(cam.pitch + delta.pitch, -MAX_PITCH), MAX_PITCH);
    }
    if (delta.zoomFactor !== undefined && delta.zoomFactor > 0) {
      cam.distance = Math.min(
        Math.max(cam.distance * delta.zoomFactor, MIN_CAMERA_DISTANCE),
        MAX_CAMERA_DISTANCE,
      );
    }
  }

  private frameCamera(doc: SceneDocument): void {
    let min: Vec3 = [Infinity, Infinity, Infinity];
    let max: Vec3 = [-Infinity, -Infinity, -Infinity];
    const extend = (p: Vec3) => {
      for (let i = 0; i < 3; i++) {
        if (p[i] < min[i]) min[i] = p[i];
        if (p[i] > max[i]) max[i] = p[i];
      }
    };
    for (const line of doc.gm ?? []) for (const v of line.vertices) extend(v.position);
    for (const track of doc.avatar ?? []) for (const kf of track.keyframes) extend(kf.position);
    for (const glyphs of Object.values(doc.fine ?? {})) for (const g of glyphs) extend(g.dot);
    if (!Number.isFinite(min[0])) return;
    this.camera.target = [
      (min[0] + max[0]) / 2,
      (min[1] + max[1]) / 2,
      (min[2] + max[2]) / 2,
    ];
    const extent = Math.max(max[0] - min[0], max[1] - min[1], max[2] - min[2], 0.5);
    this.camera.distance = Math.min(
      Math.max(extent * 1.8, MIN_CAMERA_DISTANCE),
      MAX_CAMERA_DISTANCE,
    );
  }

  // --- derived counts -------------------------------------------------------

  get totalCounts(): LayerCounts | null {
    return this.scene === null ? null : documentCounts(this.scene);
  }

  get visibleCounts(): LayerCounts | null {
    if (this.scene === null) return null;
    return renderedCounts(this.scene, this.clock.clock, this.visibleLayers);
  }

  clearBanner(): void {
    this.banner = null;
  }
}
