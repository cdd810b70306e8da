"""Synthetic motion scenarios with analytic ground truth.

Three generators produce short hand+object recordings whose kinematics
are known in closed form, so downstream numerics can be checked against
exact answers: a pick-up (phased reach, rigid grasp, lift), a toss
(hand launch, then projectile flight), and a drawing gesture (Lissajous
figure on a vertical plane, tangent-aligned orientation).

All generators are pure functions of their spec: the same spec
(including seed) yields byte-identical recordings after canonical
serialization. Noise, when enabled, perturbs positions only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from movi._kernels import slerp_one
from movi.errors import BadSpec
from movi.ingest import (
    CONVENTION,
    EntityTrack,
    MotionRecording,
    Pose,
    RecordingMeta,
    format_float,
    kind_for_entity,
)

KINDS = ("pickup", "toss", "draw")

GRAVITY_Y = -9.81  # m/s^2, y-up

_DEFAULT_DURATION = {"pickup": 3.0, "toss": 1.2, "draw": 4.0}

_IDENTITY = (0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str
    rate: float = 90.0
    duration: float | None = None  # per-kind default when omitted
    seed: int = 0
    noise_sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadSpec(f"unknown scenario kind {self.kind!r}; expected one of {KINDS}")
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise BadSpec(f"rate must be positive, got {self.rate!r}")
        if self.duration is not None and not (self.duration > 0.0 and math.isfinite(self.duration)):
            raise BadSpec(f"duration must be positive, got {self.duration!r}")
        if self.noise_sigma < 0.0 or not math.isfinite(self.noise_sigma):
            raise BadSpec(f"noise_sigma must be >= 0, got {self.noise_sigma!r}")

    def resolved_duration(self) -> float:
        return self.duration if self.duration is not None else _DEFAULT_DURATION[self.kind]


def _grid(spec: ScenarioSpec) -> list[float]:
    duration = spec.resolved_duration()
    n = round(spec.rate * duration)
    if n < 1:
        raise BadSpec(f"rate {spec.rate} over duration {duration} yields fewer than 2 samples")
    return [(i * duration) / n for i in range(n + 1)]


def _smoothstep(u: float) -> float:
    return u * u * (3.0 - 2.0 * u)


def _track(entity_id: str, samples) -> EntityTrack:
    return EntityTrack(entity_id=entity_id, kind=kind_for_entity(entity_id),
                       samples=tuple(samples))


def _apply_noise(tracks, spec: ScenarioSpec):
    if spec.noise_sigma == 0.0:
        return tracks
    rng = np.random.default_rng(spec.seed)
    noisy = []
    for track in tracks:
        samples = []
        for p in track.samples:
            dx, dy, dz = rng.normal(0.0, spec.noise_sigma, 3)
            samples.append(Pose(p.t, (p.position[0] + dx, p.position[1] + dy,
                                      p.position[2] + dz), p.orientation))
        noisy.append(_track(track.entity_id, samples))
    return noisy


def _recording(tracks, spec: ScenarioSpec, extra: dict[str, str]) -> MotionRecording:
    tracks = _apply_noise(sorted(tracks, key=lambda t: t.entity_id), spec)
    meta = RecordingMeta(source=f"gen:{spec.kind}", rate_hz=float(spec.rate),
                         convention=CONVENTION, extra=dict(extra))
    return MotionRecording(tracks=tuple(tracks), meta=meta)


# --- pickup -----------------------------------------------------------------

# Geometry: object rests on a table; the hand reaches in along a bulged
# arc, closes on it, lifts straight up, then settles.
_PICKUP_OBJECT_REST = (0.35, 0.75, 0.0)
_PICKUP_HAND_START = (0.0, 0.95, 0.15)
_PICKUP_GRIP = (0.0, -0.03, 0.0)   # object sits just below the palm, hand frame == world here
_PICKUP_LIFT = 0.25                # meters, straight up
_PICKUP_ARC_BULGE = 0.08           # meters, vertical bow of the approach path


def gen_pickup(spec: ScenarioSpec) -> MotionRecording:
    """Three phases: approach (object static), grasp+lift (object pose ==
    hand pose composed with a constant grip offset), settle. Phase
    boundary times land in the recording meta."""
    if spec.kind != "pickup":
        raise BadSpec(f"gen_pickup got kind {spec.kind!r}")
    ts = _grid(spec)
    duration = spec.resolved_duration()
    t_approach = 0.4 * duration
    t_lift = 0.8 * duration

    ox, oy, oz = _PICKUP_OBJECT_REST
    gx, gy, gz = _PICKUP_GRIP
    hx0, hy0, hz0 = _PICKUP_HAND_START
    # Hand pose whose grip offset puts the object exactly at rest pose.
    hgx, hgy, hgz = ox - gx, oy - gy, oz - gz
    q_start = (math.sin(-math.pi / 12.0), 0.0, 0.0, math.cos(-math.pi / 12.0))

    hand = []
    obj = []
    for t in ts:
        if t <= t_approach:
            s = _smoothstep(t / t_approach)
            bow = _PICKUP_ARC_BULGE * math.sin(math.pi * s)
            hp = (hx0 + s * (hgx - hx0), hy0 + s * (hgy - hy0) + bow,
                  hz0 + s * (hgz - hz0))
            hq = slerp_one(q_start, _IDENTITY, s)
            op, oq = (ox, oy, oz), _IDENTITY
        elif t <= t_lift:
            s = _smoothstep((t - t_approach) / (t_lift - t_approach))
            hp = (hgx, hgy + s * _PICKUP_LIFT, hgz)
            hq = _IDENTITY
            op = (hp[0] + gx, hp[1] + gy, hp[2] + gz)
            oq = _IDENTITY
        else:
            hp = (hgx, hgy + _PICKUP_LIFT, hgz)
            hq = _IDENTITY
            op = (hp[0] + gx, hp[1] + gy, hp[2] + gz)
            oq = _IDENTITY
        hand.append(Pose(t, hp, hq))
        obj.append(Pose(t, op, oq))

    extra = {
        "phase_approach_end": format_float(t_approach),
        "phase_lift_end": format_float(t_lift),
        "grip_dy": format_float(gy),
    }
    return _recording([_track("right_hand", hand), _track("object:cube", obj)],
                      spec, extra)


# --- toss -------------------------------------------------------------------

# The hand accelerates from rest so its velocity at release is exactly
# v0 (position quadratic in t), releases the object, and brakes to a
# stop; the object then follows projectile motion under gravity.
_TOSS_HAND_START = (0.0, 1.0, 0.0)
_TOSS_V0 = (1.0, 3.0, 0.0)  # m/s at release
_TOSS_GRIP = (0.0, -0.03, 0.0)
_TOSS_RELEASE_FRAC = 0.4    # release time as a fraction of the clip
_TOSS_BRAKE = 0.3           # s for the hand to come to rest after release


def gen_toss(spec: ScenarioSpec) -> MotionRecording:
    """Launch phase, then ballistic flight. The recording meta carries
    the release time and the object's release position and velocity, so
    oracles can evaluate p(t) = p0 + v0*t + g*t^2/2 independently."""
    if spec.kind != "toss":
        raise BadSpec(f"gen_toss got kind {spec.kind!r}")
    ts = _grid(spec)
    duration = spec.resolved_duration()
    t_release = _TOSS_RELEASE_FRAC * duration

    px0, py0, pz0 = _TOSS_HAND_START
    vx, vy, vz = _TOSS_V0
    gx, gy, gz = _TOSS_GRIP
    # Hand position at release under the quadratic launch profile.
    rx = px0 + vx * t_release / 2.0
    ry = py0 + vy * t_release / 2.0
    rz = pz0 + vz * t_release / 2.0

    hand = []
    obj = []
    for t in ts:
        if t <= t_release:
            k = (t * t) / (2.0 * t_release)
            hp = (px0 + vx * k, py0 + vy * k, pz0 + vz * k)
            op = (hp[0] + gx, hp[1] + gy, hp[2] + gz)
        else:
            tau = t - t_release
            if tau <= _TOSS_BRAKE:
                k = tau - (tau * tau) / (2.0 * _TOSS_BRAKE)
            else:
                k = _TOSS_BRAKE / 2.0
            hp = (rx + vx * k, ry + vy * k, rz + vz * k)
            op = (rx + gx + vx * tau,
                  ry + gy + vy * tau + 0.5 * GRAVITY_Y * tau * tau,
                  rz + gz + vz * tau)
        hand.append(Pose(t, hp, _IDENTITY))
        obj.append(Pose(t, op, _IDENTITY))

    extra = {
        "release_t": format_float(t_release),
        "release_px": format_float(rx + gx),
        "release_py": format_float(ry + gy),
        "release_pz": format_float(rz + gz),
        "release_vx": format_float(vx),
        "release_vy": format_float(vy),
        "release_vz": format_float(vz),
        "gravity_y": format_float(GRAVITY_Y),
    }
    return _recording([_track("right_hand", hand), _track("object:ball", obj)],
                      spec, extra)


# --- draw -------------------------------------------------------------------

# One closed Lissajous cycle (a=3, b=2, delta=pi/2) on the vertical
# plane z = const. The pen rides a constant world-frame offset below the
# hand, so both trace the same figure and stay on the plane; both share
# the tangent-aligned orientation.
_DRAW_CENTER = (0.0, 1.2, 0.4)
_DRAW_AMP_X = 0.2
_DRAW_AMP_Y = 0.15
_DRAW_A = 3
_DRAW_B = 2
_DRAW_DELTA = math.pi / 2.0
_DRAW_OFFSET = (0.0, -0.05, 0.0)  # pen tip relative to hand, in-plane


def _tangent_quat(dx: float, dy: float) -> tuple[float, float, float, float]:
    # Rotate local +z onto the in-plane tangent (tx, ty, 0): quarter-turn
    # about the in-plane axis (-ty, tx, 0).
    norm = math.sqrt(dx * dx + dy * dy)
    tx, ty = dx / norm, dy / norm
    s = math.sin(math.pi / 4.0)
    c = math.cos(math.pi / 4.0)
    qn = math.sqrt((ty * s) ** 2 + (tx * s) ** 2 + c * c)
    return (-ty * s / qn, tx * s / qn, 0.0, c / qn)


def gen_draw(spec: ScenarioSpec) -> MotionRecording:
    """Hand and pen trace a closed Lissajous figure on a fixed vertical
    plane; orientation faces along the motion tangent."""
    if spec.kind != "draw":
        raise BadSpec(f"gen_draw got kind {spec.kind!r}")
    ts = _grid(spec)
    n = len(ts) - 1
    cx, cy, cz = _DRAW_CENTER
    ox, oy, oz = _DRAW_OFFSET

    hand = []
    pen = []
    for i, t in enumerate(ts):
        theta = (2.0 * math.pi * i) / n
        hp = (cx + _DRAW_AMP_X * math.sin(_DRAW_A * theta + _DRAW_DELTA),
              cy + _DRAW_AMP_Y * math.sin(_DRAW_B * theta),
              cz)
        dx = _DRAW_AMP_X * _DRAW_A * math.cos(_DRAW_A * theta + _DRAW_DELTA)
        dy = _DRAW_AMP_Y * _DRAW_B * math.cos(_DRAW_B * theta)
        q = _tangent_quat(dx, dy)
        hand.append(Pose(t, hp, q))
        pen.append(Pose(t, (hp[0] + ox, hp[1] + oy, hp[2] + oz), q))

    extra = {
        "plane_z": format_float(cz),
        "lissajous_a": format_float(float(_DRAW_A)),
        "lissajous_b": format_float(float(_DRAW_B)),
    }
    return _recording([_track("right_hand", hand), _track("object:pen", pen)],
                      spec, extra)


_GENERATORS = {"pickup": gen_pickup, "toss": gen_toss, "draw": gen_draw}


def generate(spec: ScenarioSpec) -> MotionRecording:
    """Dispatch to the generator matching spec.kind."""
    return _GENERATORS[spec.kind](spec)
