/**
 * Pose interpolation for avatar playback: positions blend linearly,
 * orientations follow the quaternion geodesic (slerp). The slerp here
 * matches the service pipeline's kernel branch for branch -- sign flip
 * onto the short arc, exact endpoint copies, normalized-linear fallback
 * when the arc is too short for the sine formula or the endpoints are
 * orthogonal -- so client-side playback agrees with server-side
 * resampling to within floating-point noise.
 */

import type { Keyframe, Vec3, Vec4 } from "./scene";

export const NLERP_DOT = 1.0 - 1e-12;
export const DEGENERATE_DOT = 1e-15;

export function slerp(q0: Vec4, q1: Vec4, u: number): Vec4 {
  const [x0, y0, z0, w0] = q0;
  let [x1, y1, z1, w1] = q1;
  let dot = x0 * x1 + y0 * y1 + z0 * z1 + w0 * w1;
  if (dot < 0) {
    x1 = -x1;
    y1 = -y1;
    z1 = -z1;
    w1 = -w1;
    dot = -dot;
  }
  if (u === 0 || (x0 === x1 && y0 === y1 && z0 === z1 && w0 === w1)) {
    return [x0, y0, z0, w0];
  }
  if (u === 1) return [x1, y1, z1, w1];
  let a: number;
  let b: number;
  if (dot >= NLERP_DOT || dot <= DEGENERATE_DOT) {
    a = 1 - u;
    b = u;
  } else {
    const theta = Math.acos(Math.min(dot, 1));
    const s = Math.sin(theta);
    a = Math.sin((1 - u) * theta) / s;
    b = Math.sin(u * theta) / s;
  }
  const rx = a * x0 + b * x1;
  const ry = a * y0 + b * y1;
  const rz = a * z0 + b * z1;
  const rw = a * w0 + b * w1;
  const n = Math.sqrt(rx * rx + ry * ry + rz * rz + rw * rw);
  return [rx / n, ry / n, rz / n, rw / n];
}

export interface InterpolatedPose {
  position: Vec3;
  orientation: Vec4;
}

/**
 * Pose of a keyframe track at time t (absolute, same axis as keyframe
 * times). Times outside the track clamp to the first/last keyframe.
 */
export function samplePose(keyframes: Keyframe[], t: number): InterpolatedPose {
  if (keyframes.length === 0) throw new RangeError("empty keyframe track");
  const first = keyframes[0];
  const last = keyframes[keyframes.length - 1];
  if (t <= first.t || keyframes.length === 1) {
    return { position: [...first.position], orientation: [...first.orientation] };
  }
  if (t >= last.t) {
    return { position: [...last.position], orientation: [...last.orientation] };
  }
  // binary search: largest i with keyframes[i].t <= t
  let lo = 0;
  let hi = keyframes.length - 1;
  while (hi - lo > 1) {
    const mid = (lo + hi) >> 1;
    if (keyframes[mid].t <= t) lo = mid;
    else hi = mid;
  }
  const ka = keyframes[lo];
  const kb = keyframes[lo + 1];
  const u = (t - ka.t) / (kb.t - ka.t);
  if (u === 0) {
    return { position: [...ka.position], orientation: [...ka.orientation] };
  }
  const position: Vec3 = [
    (1 - u) * ka.position[0] + u * kb.position[0],
    (1 - u) * ka.position[1] + u * kb.position[1],
    (1 - u) * ka.position[2] + u * kb.position[2],
  ];
  return { position, orientation: slerp(ka.orientation, kb.orientation, u) };
}
