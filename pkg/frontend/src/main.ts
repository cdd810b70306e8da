/**
 * Application entry: wires the viewer state machine to the DOM and a
 * three.js renderer. All review logic lives in state.ts and friends;
 * this module only translates events in and state out.
 */

import * as THREE from "three";
import "./style.css";
import { ServiceClient } from "./api";
import { THEMES, Theme } from "./contrast";
import type { LayerName } from "./scene";
import { SceneGraph } from "./render/scenegraph";
import { ViewerApp } from "./state";

const app = new ViewerApp(new ServiceClient(""));

// --- DOM handles ------------------------------------------------------------

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("view");
const sessionSelect = el<HTMLSelectElement>("session-select");
const refreshButton = el<HTMLButtonElement>("refresh-sessions");
const fileInput = el<HTMLInputElement>("file-input");
const layerInputs: Record<LayerName, HTMLInputElement> = {
  gm: el<HTMLInputElement>("layer-gm"),
  avatar: el<HTMLInputElement>("layer-avatar"),
  fine: el<HTMLInputElement>("layer-fine"),
};
const densityInput = el<HTMLInputElement>("density");
const densityValue = el<HTMLSpanElement>("density-value");
const glyphScaleInput = el<HTMLInputElement>("glyph-scale");
const themeButton = el<HTMLButtonElement>("theme-toggle");
const banner = el<HTMLDivElement>("banner");
const bannerText = el<HTMLSpanElement>("banner-text");
const bannerClose = el<HTMLButtonElement>("banner-close");
const playButton = el<HTMLButtonElement>("play");
const scrub = el<HTMLInputElement>("scrub");
const timeReadout = el<HTMLSpanElement>("time-readout");
const countsReadout = el<HTMLSpanElement>("counts-readout");
const stageHint = el<HTMLSpanElement>("stage-hint");

// --- three.js setup ---------------------------------------------------------

const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
renderer.setPixelRatio(window.devicePixelRatio);

const scene3 = new THREE.Scene();
const camera = new THREE.PerspectiveCamera(50, 1, 0.01, 100);

scene3.add(new THREE.AmbientLight(0xffffff, 0.75));
const keyLight = new THREE.DirectionalLight(0xffffff, 1.6);
keyLight.position.set(2, 4, 3);
scene3.add(keyLight);

let grid = new THREE.GridHelper(4, 16);
scene3.add(grid);

let graph: SceneGraph | null = null;
let shownRevision = -1;

function applyTheme(theme: Theme): void {
  const palette = THEMES[theme];
  document.body.dataset.theme = theme;
  renderer.setClearColor(
    new THREE.Color(palette.background[0], palette.background[1], palette.background[2]),
  );
  scene3.remove(grid);
  grid.dispose();
  const gridColor = new THREE.Color(palette.grid[0], palette.grid[1], palette.grid[2]);
  grid = new THREE.GridHelper(4, 16, gridColor, gridColor);
  scene3.add(grid);
  themeButton.textContent = theme === "dark" ? "light theme" : "dark theme";
}

function resize(): void {
  const width = canvas.clientWidth || window.innerWidth;
  const height = canvas.clientHeight || window.innerHeight;
  renderer.setSize(width, height, false);
  camera.aspect = width / height;
  camera.updateProjectionMatrix();
}
window.addEventListener("resize", resize);

// --- camera orbit -----------------------------------------------------------

let dragging = false;
let lastX = 0;
let lastY = 0;

canvas.addEventListener("pointerdown", (event) => {
  dragging = true;
  lastX = event.clientX;
  lastY = event.clientY;
  canvas.setPointerCapture(event.pointerId);
});
canvas.addEventListener("pointermove", (event) => {
  if (!dragging) return;
  const dx = event.clientX - lastX;
  const dy = event.clientY - lastY;
  lastX = event.clientX;
  lastY = event.clientY;
  app.orbitCamera({ yaw: -dx * 0.005, pitch: dy * 0.005 });
});
canvas.addEventListener("pointerup", (event) => {
  dragging = false;
  canvas.releasePointerCapture(event.pointerId);
});
canvas.addEventListener(
  "wheel",
  (event) => {
    event.preventDefault();
    app.orbitCamera({ zoomFactor: Math.exp(event.deltaY * 0.0012) });
  },
  { passive: false },
);

function placeCamera(): void {
  const { target, distance, yaw, pitch } = app.camera;
  const cosP = Math.cos(pitch);
  camera.position.set(
    target[0] + distance * cosP * Math.sin(yaw),
    target[1] + distance * Math.sin(pitch),
    target[2] + distance * cosP * Math.cos(yaw),
  );
  camera.lookAt(target[0], target[1], target[2]);
}

// --- controls ---------------------------------------------------------------

async function refreshSessions(): Promise<void> {
  const client = new ServiceClient("");
  try {
    const rows = await client.listSessions();
    const current = sessionSelect.value;
    sessionSelect.replaceChildren(new Option("select session", ""));
    for (const row of rows) {
      const label = row.label ? `${row.label}` : row.session_id.slice(0, 12);
      const text = `${label} (${row.duration.toFixed(2)} s)`;
      sessionSelect.add(new Option(text, row.session_id));
    }
    sessionSelect.value = current;
  } catch {
    // service may not be reachable when viewing local files; not an error
  }
}

refreshButton.addEventListener("click", () => void refreshSessions());

sessionSelect.addEventListener("change", () => {
  const id = sessionSelect.value;
  if (id !== "") void app.loadSession(id);
});

fileInput.addEventListener("change", () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  void file.text().then((text) => {
    app.loadSceneText(text);
    sessionSelect.value = "";
  });
  fileInput.value = "";
});

for (const name of ["gm", "avatar", "fine"] as const) {
  layerInputs[name].addEventListener("change", () => app.toggleLayer(name));
}

densityInput.addEventListener("change", () => {
  void app.setDensity(Number(densityInput.value));
});
densityInput.addEventListener("input", () => {
  densityValue.textContent = Number(densityInput.value).toFixed(2);
});

glyphScaleInput.addEventListener("input", () => {
  app.setGlyphScale(Number(glyphScaleInput.value));
});

themeButton.addEventListener("click", () => {
  app.setTheme(app.theme === "dark" ? "light" : "dark");
  applyTheme(app.theme);
});

bannerClose.addEventListener("click", () => app.clearBanner());

playButton.addEventListener("click", () => app.togglePlay());

let scrubbing = false;
scrub.addEventListener("pointerdown", () => {
  scrubbing = true;
});
scrub.addEventListener("pointerup", () => {
  scrubbing = false;
});
scrub.addEventListener("input", () => {
  app.setTime(Number(scrub.value) * app.duration);
});

window.addEventListener("keydown", (event) => {
  const target = event.target as HTMLElement | null;
  if (target && (target.tagName === "INPUT" || target.tagName === "SELECT")) return;
  if (event.code === "Space") {
    event.preventDefault();
    app.togglePlay();
  } else if (event.code === "ArrowRight") {
    event.preventDefault();
    app.setTime(app.time + app.duration / 50);
  } else if (event.code === "ArrowLeft") {
    event.preventDefault();
    app.setTime(app.time - app.duration / 50);
  }
});

// --- per-frame sync ---------------------------------------------------------

function formatTime(t: number): string {
  return t.toFixed(2);
}

function syncHud(): void {
  playButton.textContent = app.playing ? "pause" : "play";
  timeReadout.textContent = `${formatTime(app.time)} / ${formatTime(app.duration)} s`;
  if (!scrubbing) {
    scrub.value = app.duration > 0 ? String(app.time / app.duration) : "0";
  }

  if (app.banner !== null) {
    banner.hidden = false;
    bannerText.textContent = app.banner;
  } else {
    banner.hidden = true;
  }

  const visible = app.visibleLayers;
  const intended = app.intendedLayers;
  for (const name of ["gm", "avatar", "fine"] as const) {
    const present = app.layerPresent(name);
    const gated = present && name === "fine" && !app.gate.unlocked("fine");
    layerInputs[name].disabled = !present || gated;
    layerInputs[name].checked = intended.has(name) && present;
  }
  stageHint.textContent =
    app.layerPresent("fine") && !app.gate.unlocked("fine")
      ? "glyphs unlock after the first full pass"
      : "";

  densityInput.disabled = app.sessionId === null;

  const total = app.totalCounts;
  const shown = app.visibleCounts;
  if (total && shown) {
    countsReadout.textContent =
      `paths ${shown.gmVertices}/${total.gmVertices} ` +
      `keys ${visible.has("avatar") ? total.avatarKeyframes : 0}/${total.avatarKeyframes} ` +
      `glyphs ${shown.fineGlyphs}/${total.fineGlyphs}`;
  } else {
    countsReadout.textContent = "";
  }
}

let lastFrame = performance.now();

function frame(now: number): void {
  const dt = Math.min((now - lastFrame) / 1000, 0.25);
  lastFrame = now;
  app.tick(dt);

  if (app.revision !== shownRevision && app.scene !== null) {
    graph?.dispose();
    if (graph) scene3.remove(graph.root);
    graph = new SceneGraph(app.scene, app.glyphScale);
    scene3.add(graph.root);
    shownRevision = app.revision;
  }
  if (graph !== null && app.scene !== null) {
    graph.setGlyphScale(app.glyphScale);
    graph.applyTime(app.scene.tMin + app.time, app.visibleLayers);
  }

  placeCamera();
  syncHud();
  renderer.render(scene3, camera);
  requestAnimationFrame(frame);
}

applyTheme(app.theme);
resize();
void refreshSessions();
requestAnimationFrame(frame);
