/**
 * Simple avatar models: stylized hands and objects posed rigidly by the
 * keyframe tracks. Geometry is deliberately low-poly; the avatar layer
 * communicates pose, not anatomy.
 */

import * as THREE from "three";
import type { ModelId, Vec4 } from "../scene";

function material(color: Vec4): THREE.MeshStandardMaterial {
  return new THREE.MeshStandardMaterial({
    color: new THREE.Color(color[0], color[1], color[2]),
    roughness: 0.55,
    metalness: 0.05,
  });
}

function buildHand(modelId: "hand_left" | "hand_right", color: Vec4): THREE.Group {
  const group = new THREE.Group();
  const mat = material(color);
  const side = modelId === "hand_left" ? -1 : 1;

  const palm = new THREE.Mesh(new THREE.BoxGeometry(0.08, 0.022, 0.085), mat);
  group.add(palm);

  // four finger stubs along +z, a thumb off to the side
  for (let i = 0; i < 4; i++) {
    const finger = new THREE.Mesh(new THREE.BoxGeometry(0.014, 0.016, 0.05), mat);
    finger.position.set(-0.027 + i * 0.018, 0.0, 0.065);
    group.add(finger);
  }
  const thumb = new THREE.Mesh(new THREE.BoxGeometry(0.016, 0.016, 0.04), mat);
  thumb.position.set(side * 0.052, 0.0, 0.012);
  thumb.rotation.y = side * -0.6;
  group.add(thumb);
  return group;
}

function buildObject(modelId: "object_sphere" | "object_pen", color: Vec4): THREE.Group {
  const group = new THREE.Group();
  const mat = material(color);
  if (modelId === "object_pen") {
    // pen body along local +z, the direction a pose "faces"
    const geometry = new THREE.CylinderGeometry(0.006, 0.006, 0.15, 12);
    geometry.rotateX(Math.PI / 2);
    group.add(new THREE.Mesh(geometry, mat));
    const tip = new THREE.ConeGeometry(0.006, 0.02, 12);
    tip.rotateX(Math.PI / 2);
    tip.translate(0, 0, 0.085);
    group.add(new THREE.Mesh(tip, mat));
  } else {
    group.add(new THREE.Mesh(new THREE.SphereGeometry(0.035, 20, 14), mat));
  }
  return group;
}

export function buildModel(modelId: ModelId, color: Vec4): THREE.Group {
  switch (modelId) {
    case "hand_left":
    case "hand_right":
      return buildHand(modelId, color);
    case "object_sphere":
    case "object_pen":
      return buildObject(modelId, color);
  }
}

export function disposeObject(root: THREE.Object3D): void {
  root.traverse((node) => {
    const mesh = node as THREE.Mesh;
    if (mesh.geometry) mesh.geometry.dispose();
    const mat = mesh.material as THREE.Material | THREE.Material[] | undefined;
    if (Array.isArray(mat)) mat.forEach((m) => m.dispose());
    else if (mat) mat.dispose();
  });
}
