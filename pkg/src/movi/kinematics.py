"""Numerical processing of pose tracks.

Interpolation (slerp), grid resampling, stride down-sampling, moving-
average smoothing, and derived kinematics (velocity, speed, forward
direction). Everything here is pure: tracks are never mutated, results
are new tracks. The inner loops run on the selected kernel backend
(compiled extension or pure-Python fallback, see movi._kernels).

Conventions: the "forward" direction of a pose is its orientation
applied to the local +Z axis; velocities are central differences
(one-sided at the track ends).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from movi import _kernels
from movi.errors import BadWindow, DegenerateRotationWarning, TooFewSamples
from movi.ingest import EntityTrack, Pose

Vec3 = tuple[float, float, float]
Quat = tuple[float, float, float, float]


@dataclass(frozen=True)
class DensityFactor:
    """Fraction of samples retained for display, in (0, 1]."""

    d: float

    def __post_init__(self):
        object.__setattr__(self, "d", float(self.d))
        if not (0.0 < self.d <= 1.0):
            raise ValueError(f"density must be in (0, 1], got {self.d!r}")

    @property
    def stride(self) -> int:
        return max(1, round(1.0 / self.d))


@dataclass(frozen=True)
class KinematicSample:
    """Pose enriched with velocity (m/s), speed (m/s), and forward unit vector."""

    pose: Pose
    velocity: Vec3
    speed: float
    forward: Vec3


def _track_arrays(track: EntityTrack):
    n = len(track.samples)
    ts = np.empty(n)
    pos = np.empty((n, 3))
    quat = np.empty((n, 4))
    for i, p in enumerate(track.samples):
        ts[i] = p.t
        pos[i] = p.position
        quat[i] = p.orientation
    return ts, pos, quat


def _rebuild(track: EntityTrack, ts, pos, quat) -> EntityTrack:
    samples = tuple(
        Pose(float(ts[i]), (float(pos[i, 0]), float(pos[i, 1]), float(pos[i, 2])),
             (float(quat[i, 0]), float(quat[i, 1]), float(quat[i, 2]), float(quat[i, 3])))
        for i in range(len(ts))
    )
    return EntityTrack(track.entity_id, track.kind, samples)


def slerp(q0: Quat, q1: Quat, u: float) -> Quat:
    """Geodesic interpolation between unit quaternions.

    The sign of q1 is flipped when dot(q0, q1) < 0 so the shorter arc is
    taken; u=0 returns q0 exactly and u=1 returns the (possibly flipped)
    q1 exactly. Two degenerate inputs fall back to normalized linear
    blending and issue a DegenerateRotationWarning: exactly antipodal
    endpoints (the relative rotation axis is undefined; the sign flip
    collapses them to a constant) and orthogonal endpoints (dot == 0, a
    180-degree rotation apart, so no unique shortest path exists).
    """
    if not (0.0 <= u <= 1.0):
        raise ValueError(f"u must be in [0, 1], got {u!r}")
    dot = q0[0] * q1[0] + q0[1] * q1[1] + q0[2] * q1[2] + q0[3] * q1[3]
    if all(b == -a for a, b in zip(q0, q1)):
        warnings.warn(
            "slerp endpoints are exactly antipodal; falling back to "
            "normalized linear interpolation", DegenerateRotationWarning,
            stacklevel=2)
    elif abs(dot) <= _kernels.DEGENERATE_DOT:
        warnings.warn(
            "slerp endpoints are orthogonal; falling back to normalized "
            "linear interpolation", DegenerateRotationWarning, stacklevel=2)
    out = _kernels.slerp_one(np.asarray(q0, dtype=np.float64),
                             np.asarray(q1, dtype=np.float64), float(u))
    return (float(out[0]), float(out[1]), float(out[2]), float(out[3]))


def rotate_forward(q: Quat) -> Vec3:
    """Unit quaternion applied to the local +Z axis; returns a unit vector."""
    out = _kernels.rotate_forward_many(np.asarray([q], dtype=np.float64))
    return (float(out[0, 0]), float(out[0, 1]), float(out[0, 2]))


def _resample_grid(t0: float, t_last: float, rate: float) -> np.ndarray:
    span = t_last - t0
    kmax = int(math.floor(span * rate + 1e-9))
    grid = [t0 + k / rate for k in range(kmax + 1)]
    if grid[-1] > t_last:  # guard fp overshoot of the floor estimate
        grid[-1] = t_last
    if grid[-1] < t_last - 1e-12:
        grid.append(t_last)
    else:
        grid[-1] = t_last
    return np.asarray(grid)


def resample_track(track: EntityTrack, rate: float) -> EntityTrack:
    """Resample onto the uniform grid t0, t0 + 1/rate, ... ending exactly
    at the last original timestamp (appended when the grid misses it)."""
    if rate <= 0.0:
        raise ValueError(f"rate must be positive, got {rate!r}")
    if len(track.samples) < 2:
        raise TooFewSamples(f"resample needs >= 2 samples, track has {len(track.samples)}")
    ts, pos, quat = _track_arrays(track)
    grid = _resample_grid(float(ts[0]), float(ts[-1]), float(rate))
    pos_out, quat_out = _kernels.resample(ts, pos, quat, grid)
    return _rebuild(track, grid, pos_out, quat_out)


def downsample_indices(n: int, d: float | DensityFactor) -> list[int]:
    """Indices kept by the density rule: stride = max(1, round(1/d)),
    keep 0, stride, 2*stride, ... and always the final sample."""
    density = d if isinstance(d, DensityFactor) else DensityFactor(d)
    if n < 1:
        raise ValueError("track must be non-empty")
    idx = list(range(0, n, density.stride))
    if idx[-1] != n - 1:
        idx.append(n - 1)
    return idx


def downsample(track: EntityTrack, d: float | DensityFactor) -> EntityTrack:
    """Keep every stride-th sample plus the last one; order preserved."""
    idx = downsample_indices(len(track.samples), d)
    samples = tuple(track.samples[i] for i in idx)
    return EntityTrack(track.entity_id, track.kind, samples)


def smooth_positions(track: EntityTrack, window: int) -> EntityTrack:
    """Centered moving average over positions with a window that shrinks
    at the track ends; timestamps and orientations are untouched.
    Window 1 is the identity."""
    if not isinstance(window, int) or window < 1 or window % 2 == 0:
        raise BadWindow(f"window must be an odd integer >= 1, got {window!r}")
    if window == 1 or len(track.samples) < 2:
        return track
    ts, pos, quat = _track_arrays(track)
    smoothed = _kernels.moving_average(pos, window)
    return _rebuild(track, ts, smoothed, quat)


def derive_kinematics(track: EntityTrack) -> tuple[KinematicSample, ...]:
    """Velocity by central differences (one-sided at the ends), speed as
    its norm, and the forward unit vector of each orientation."""
    if len(track.samples) < 2:
        raise TooFewSamples(f"kinematics needs >= 2 samples, track has {len(track.samples)}")
    ts, pos, quat = _track_arrays(track)
    vel = _kernels.central_diff(ts, pos)
    fwd = _kernels.rotate_forward_many(quat)
    out = []
    for i, p in enumerate(track.samples):
        vx, vy, vz = float(vel[i, 0]), float(vel[i, 1]), float(vel[i, 2])
        out.append(KinematicSample(
            pose=p,
            velocity=(vx, vy, vz),
            speed=math.sqrt(vx * vx + vy * vy + vz * vz),
            forward=(float(fwd[i, 0]), float(fwd[i, 1]), float(fwd[i, 2])),
        ))
    return tuple(out)
