"""Shared builders and independent numeric oracles for the test suite.

The quaternion helpers here deliberately use a different computation
route than the library (Hamilton products instead of expanded rotation
formulas) so they can serve as independent oracles.
"""

from __future__ import annotations

import math
import random

import pytest

from movi.ingest import EntityTrack, MotionRecording, Pose, RecordingMeta

OBJECT_NAMES = ("cube", "ball", "pen", "cup", "block_7", "toy-car")


def make_quat(rng: random.Random) -> tuple[float, float, float, float]:
    """Uniform random unit quaternion (Gaussian components, normalized)."""
    while True:
        q = [rng.gauss(0.0, 1.0) for _ in range(4)]
        norm = math.sqrt(sum(v * v for v in q))
        if norm > 1e-3:
            return tuple(v / norm for v in q)


def make_track(rng: random.Random, entity_id: str, n: int,
               t0: float | None = None) -> EntityTrack:
    t = rng.uniform(0.0, 0.5) if t0 is None else t0
    samples = []
    for _ in range(n):
        samples.append(Pose(
            t,
            (rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)),
            make_quat(rng),
        ))
        t += rng.uniform(1e-3, 0.1)
    kind = "hand" if entity_id in ("left_hand", "right_hand") else "object"
    return EntityTrack(entity_id=entity_id, kind=kind, samples=tuple(samples))


def make_recording(rng: random.Random, max_tracks: int = 3,
                   min_samples: int = 2, max_samples: int = 40) -> MotionRecording:
    pool = ["left_hand", "right_hand"] + [f"object:{n}" for n in OBJECT_NAMES]
    ids = rng.sample(pool, rng.randint(1, max_tracks))
    tracks = [make_track(rng, eid, rng.randint(min_samples, max_samples))
              for eid in sorted(ids)]
    extra = {}
    if rng.random() < 0.5:
        extra["label"] = f"clip {rng.randint(0, 999)}"
    if rng.random() < 0.3:
        extra["device.model"] = "sim-1"
    meta = RecordingMeta(
        source=rng.choice(["unknown", "gen:test", "import", "lab capture 3"]),
        rate_hz=rng.choice([None, 60.0, 90.0, 120.5]),
        extra=extra,
    )
    return MotionRecording(tracks=tuple(tracks), meta=meta)


def hamilton(a, b) -> tuple[float, float, float, float]:
    """Quaternion product in (x, y, z, w) component order."""
    ax, ay, az, aw = a
    bx, by, bz, bw = b
    return (
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
        aw * bw - ax * bx - ay * by - az * bz,
    )


def sandwich_forward(q) -> tuple[float, float, float]:
    """Rotate +z by q via the quaternion sandwich q * (0,0,1,0) * conj(q)."""
    conj = (-q[0], -q[1], -q[2], q[3])
    out = hamilton(hamilton(q, (0.0, 0.0, 1.0, 0.0)), conj)
    return (out[0], out[1], out[2])


def quat_angle(a, b) -> float:
    """Angle between unit 4-vectors in [0, pi], stable near 0 and pi."""
    diff = math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))
    summ = math.sqrt(sum((x + y) ** 2 for x, y in zip(a, b)))
    return 2.0 * math.atan2(diff, summ)


def rotation_distance(a, b) -> float:
    """Distance between the rotations a and b represent (sign-insensitive)."""
    d1 = math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))
    d2 = math.sqrt(sum((x + y) ** 2 for x, y in zip(a, b)))
    return min(d1, d2)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
