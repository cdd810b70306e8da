"""Compile processed tracks into the three visualization layers and a
canonical, renderer-agnostic scene document.

Layers:
  gm     -- translucent polylines tracing each entity's overall path
  avatar -- per-entity rigid-pose keyframe tracks driving 3D models
  fine   -- per-timestep dot+arrow glyphs (position and facing direction)

A scene document carries the layers plus staging: an ordered grouping of
layers for sequential presentation. By default the gm and avatar layers
play together and the fine layer is staged afterwards.

The encoding is canonical JSON (sorted keys, no insignificant
whitespace, shortest round-trip decimals): encoding is deterministic
byte-for-byte and decode(encode(s)) == s. File extension: .scene.json.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

from movi.errors import (
    InconsistentEntities,
    TooFewSamples,
    UnknownEntityKind,
    ValidationFailed,
)
from movi.ingest import (
    EntityTrack,
    MotionRecording,
    Pose,
    kind_for_entity,
    validate_recording,
)
from movi.kinematics import DensityFactor, downsample, rotate_forward, smooth_positions

SCENE_VERSION = 1
LAYER_NAMES = ("gm", "avatar", "fine")

HAND_COLOR = (0.0, 0.0, 1.0)    # blue
OBJECT_COLOR = (1.0, 0.0, 0.0)  # red
DEFAULT_OPACITY = 0.5
DEFAULT_ARROW_LEN = 0.05  # meters

Vec3 = tuple[float, float, float]
Rgba = tuple[float, float, float, float]

_MODELS = ("hand_left", "hand_right", "object_sphere", "object_pen")


@dataclass(frozen=True)
class GmPolyline:
    entity_id: str
    vertices: tuple[tuple[Vec3, float], ...]  # (position, t)
    color: Rgba
    opacity: float

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(
            ((float(p[0]), float(p[1]), float(p[2])), float(t))
            for p, t in self.vertices))
        object.__setattr__(self, "color", tuple(float(c) for c in self.color))
        object.__setattr__(self, "opacity", float(self.opacity))


@dataclass(frozen=True)
class AvatarTrack:
    entity_id: str
    model_id: str
    keyframes: tuple[Pose, ...]

    def __post_init__(self):
        object.__setattr__(self, "keyframes", tuple(self.keyframes))


@dataclass(frozen=True)
class FineGlyph:
    t: float
    dot: Vec3
    arrow: Vec3      # unit direction the pose faces
    arrow_len: float

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "dot", tuple(float(v) for v in self.dot))
        object.__setattr__(self, "arrow", tuple(float(v) for v in self.arrow))
        object.__setattr__(self, "arrow_len", float(self.arrow_len))


@dataclass(frozen=True)
class SceneEntity:
    id: str
    kind: str
    color: Rgba

    def __post_init__(self):
        object.__setattr__(self, "color", tuple(float(c) for c in self.color))


@dataclass(frozen=True)
class SceneMeta:
    source: str
    duration: float
    convention: str

    def __post_init__(self):
        object.__setattr__(self, "duration", float(self.duration))


@dataclass(frozen=True)
class SceneDocument:
    version: int
    meta: SceneMeta
    entities: tuple[SceneEntity, ...]
    gm: tuple[GmPolyline, ...] | None = None
    avatar: tuple[AvatarTrack, ...] | None = None
    fine: dict[str, tuple[FineGlyph, ...]] | None = None
    staging: tuple[frozenset[str], ...] = ()

    @property
    def present_layers(self) -> frozenset[str]:
        present = set()
        if self.gm is not None:
            present.add("gm")
        if self.avatar is not None:
            present.add("avatar")
        if self.fine is not None:
            present.add("fine")
        return frozenset(present)


def model_for_entity(entity_id: str, kind: str) -> str:
    if kind == "hand":
        if entity_id == "left_hand":
            return "hand_left"
        if entity_id == "right_hand":
            return "hand_right"
        raise UnknownEntityKind(f"hand entity {entity_id!r} is not left_hand/right_hand")
    if kind == "object":
        name = entity_id.split(":", 1)[1] if ":" in entity_id else ""
        return "object_pen" if name == "pen" else "object_sphere"
    raise UnknownEntityKind(f"entity {entity_id!r} has unknown kind {kind!r}")


def base_color(kind: str) -> Vec3:
    if kind == "hand":
        return HAND_COLOR
    if kind == "object":
        return OBJECT_COLOR
    raise UnknownEntityKind(f"unknown kind {kind!r}")


def _require_samples(track: EntityTrack, n: int = 2):
    if len(track.samples) < n:
        raise TooFewSamples(
            f"track {track.entity_id!r} has {len(track.samples)} sample(s); need >= {n}")


# --- layer builders ---------------------------------------------------------

def build_gm_layer(tracks, colors=None, opacity: float = DEFAULT_OPACITY) -> tuple[GmPolyline, ...]:
    """One translucent polyline per track; hands blue, objects red by
    default. Opacity stays below 1 (full opacity is clamped to 0.99)."""
    if opacity <= 0.0:
        raise ValueError(f"opacity must be positive, got {opacity!r}")
    if opacity >= 1.0:
        warnings.warn(f"opacity {opacity} is not translucent; clamping to 0.99",
                      stacklevel=2)
        opacity = 0.99
    out = []
    for track in tracks:
        _require_samples(track)
        override = (colors or {}).get(track.entity_id)
        rgb = tuple(override[:3]) if override else base_color(track.kind)
        out.append(GmPolyline(
            entity_id=track.entity_id,
            vertices=tuple((p.position, p.t) for p in track.samples),
            color=(rgb[0], rgb[1], rgb[2], opacity),
            opacity=opacity,
        ))
    return tuple(out)


def build_avatar_layer(tracks) -> tuple[AvatarTrack, ...]:
    """One keyframe track per entity, poses copied 1:1; the model is
    picked from the entity kind and id."""
    out = []
    for track in tracks:
        _require_samples(track)
        out.append(AvatarTrack(
            entity_id=track.entity_id,
            model_id=model_for_entity(track.entity_id, track.kind),
            keyframes=tuple(track.samples),
        ))
    return tuple(out)


def build_fine_layer(track: EntityTrack, d: float | DensityFactor = 1.0,
                     arrow_len: float = DEFAULT_ARROW_LEN) -> tuple[FineGlyph, ...]:
    """Dot+arrow glyphs for the samples retained by the density rule."""
    if arrow_len <= 0.0:
        raise ValueError(f"arrow_len must be positive, got {arrow_len!r}")
    _require_samples(track)
    kept = downsample(track, d)
    return tuple(
        FineGlyph(t=p.t, dot=p.position, arrow=rotate_forward(p.orientation),
                  arrow_len=arrow_len)
        for p in kept.samples
    )


# --- scene composition ------------------------------------------------------

def _layer_times(doc: SceneDocument):
    for line in doc.gm or ():
        for _, t in line.vertices:
            yield t
    for track in doc.avatar or ():
        for kf in track.keyframes:
            yield kf.t
    for glyphs in (doc.fine or {}).values():
        for g in glyphs:
            yield g.t


def default_staging(present) -> tuple[frozenset[str], ...]:
    """First stage: gm and avatar together; fine staged last."""
    stages = []
    first = frozenset(present) & frozenset(("gm", "avatar"))
    if first:
        stages.append(first)
    if "fine" in present:
        stages.append(frozenset(("fine",)))
    return tuple(stages)


def validate_scene(doc: SceneDocument) -> None:
    """Raise if any scene-document invariant is broken."""
    declared = {e.id for e in doc.entities}
    if len(declared) != len(doc.entities):
        raise InconsistentEntities("duplicate entity declarations")
    for entity in doc.entities:
        if kind_for_entity(entity.id) != entity.kind:
            raise UnknownEntityKind(
                f"entity {entity.id!r} declared with kind {entity.kind!r}")
        if len(entity.color) != 4 or not all(0.0 <= c <= 1.0 for c in entity.color):
            raise ValueError(f"entity {entity.id!r} color out of range")

    if not doc.present_layers:
        raise ValueError("scene has no layers")

    for line in doc.gm or ():
        if line.entity_id not in declared:
            raise InconsistentEntities(f"gm polyline references {line.entity_id!r}")
        if not (0.0 < line.opacity < 1.0):
            raise ValueError(f"gm opacity {line.opacity!r} not in (0, 1)")
        if len(line.color) != 4 or not all(0.0 <= c <= 1.0 for c in line.color):
            raise ValueError(f"gm color out of range for {line.entity_id!r}")
        times = [t for _, t in line.vertices]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"gm vertex times not strictly increasing for {line.entity_id!r}")
    for track in doc.avatar or ():
        if track.entity_id not in declared:
            raise InconsistentEntities(f"avatar track references {track.entity_id!r}")
        entity = next(e for e in doc.entities if e.id == track.entity_id)
        if track.model_id not in _MODELS:
            raise ValueError(f"unknown model {track.model_id!r}")
        if track.model_id != model_for_entity(entity.id, entity.kind):
            raise UnknownEntityKind(
                f"model {track.model_id!r} inconsistent with entity {entity.id!r}")
        times = [kf.t for kf in track.keyframes]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"keyframe times not strictly increasing for {track.entity_id!r}")
    for entity_id, glyphs in (doc.fine or {}).items():
        if entity_id not in declared:
            raise InconsistentEntities(f"fine glyphs reference {entity_id!r}")
        for g in glyphs:
            norm = math.sqrt(g.arrow[0] ** 2 + g.arrow[1] ** 2 + g.arrow[2] ** 2)
            if abs(norm - 1.0) > 1e-9:
                raise ValueError(f"fine arrow not unit for {entity_id!r} (norm {norm!r})")
            if g.arrow_len <= 0.0:
                raise ValueError(f"arrow_len must be positive for {entity_id!r}")

    present = doc.present_layers
    staged = [set(s) for s in doc.staging]
    flat = [name for s in staged for name in s]
    if len(flat) != len(set(flat)):
        raise ValueError("staging sets are not disjoint")
    if set(flat) != set(present):
        raise ValueError(f"staging {sorted(map(sorted, staged))} does not cover "
                         f"layers {sorted(present)}")
    if "fine" in present and present & {"gm", "avatar"}:
        fine_stage = next(i for i, s in enumerate(staged) if "fine" in s)
        for name in ("gm", "avatar"):
            if name in present:
                i = next(i for i, s in enumerate(staged) if name in s)
                if i >= fine_stage:
                    raise ValueError("staging must place fine strictly after gm/avatar")

    times = list(_layer_times(doc))
    span = max(times) - min(times)
    if abs(doc.meta.duration - span) > 1e-12:
        raise ValueError(f"duration {doc.meta.duration!r} != layer span {span!r}")


def compose_scene(gm=None, avatar=None, fine=None, staging=None, *,
                  source: str = "unknown", convention: str = "rh-yup-m",
                  entities=None) -> SceneDocument:
    """Assemble layers into a validated scene document.

    Entities are declared from the layers themselves (gm/avatar first;
    the fine layer may only reference entities those declare, when
    present). Staging defaults to gm+avatar together, then fine. Layers
    are stored sorted by entity id so documents compare equal across the
    encode/decode round trip.
    """
    gm = tuple(sorted(gm, key=lambda l: l.entity_id)) if gm is not None else None
    avatar = tuple(sorted(avatar, key=lambda a: a.entity_id)) if avatar is not None else None
    fine = {k: tuple(v) for k, v in fine.items()} if fine is not None else None

    referenced: dict[str, str] = {}  # id -> kind
    primary: set[str] = set()
    seen_gm: set[str] = set()
    for line in gm or ():
        if line.entity_id in seen_gm:
            raise InconsistentEntities(f"duplicate gm polyline for {line.entity_id!r}")
        seen_gm.add(line.entity_id)
        primary.add(line.entity_id)
    seen_avatar: set[str] = set()
    for track in avatar or ():
        if track.entity_id in seen_avatar:
            raise InconsistentEntities(f"duplicate avatar track for {track.entity_id!r}")
        seen_avatar.add(track.entity_id)
        primary.add(track.entity_id)
    for name in primary:
        kind = kind_for_entity(name)
        if kind is None:
            raise UnknownEntityKind(f"entity id {name!r} is not canonical")
        referenced[name] = kind
    for name in (fine or {}):
        if primary and name not in primary:
            raise InconsistentEntities(
                f"fine layer references {name!r}, not declared by gm/avatar layers")
        kind = kind_for_entity(name)
        if kind is None:
            raise UnknownEntityKind(f"entity id {name!r} is not canonical")
        referenced[name] = kind

    if entities is None:
        entities = tuple(
            SceneEntity(id=eid, kind=kind, color=base_color(kind) + (1.0,))
            for eid, kind in sorted(referenced.items())
        )
    else:
        entities = tuple(entities)

    present = set()
    if gm is not None:
        present.add("gm")
    if avatar is not None:
        present.add("avatar")
    if fine is not None:
        present.add("fine")
    if staging is None:
        staging = default_staging(present)
    else:
        staging = tuple(frozenset(s) for s in staging)

    probe = SceneDocument(
        version=SCENE_VERSION,
        meta=SceneMeta(source=source, duration=0.0, convention=convention),
        entities=entities, gm=gm, avatar=avatar, fine=fine, staging=staging,
    )
    times = list(_layer_times(probe))
    if not times:
        raise ValueError("scene has no layer content")
    doc = SceneDocument(
        version=SCENE_VERSION,
        meta=SceneMeta(source=source, duration=max(times) - min(times),
                       convention=convention),
        entities=entities, gm=gm, avatar=avatar, fine=fine, staging=staging,
    )
    validate_scene(doc)
    return doc


# --- canonical encoding -----------------------------------------------------

def encode_scene(scene: SceneDocument) -> bytes:
    """Canonical JSON bytes: lexicographically sorted keys, shortest
    round-trip decimals, no insignificant whitespace. Deterministic."""
    layers: dict = {}
    if scene.gm is not None:
        layers["gm"] = [
            {
                "color": list(line.color),
                "entity_id": line.entity_id,
                "opacity": line.opacity,
                "vertices": [{"position": list(p), "t": t} for p, t in line.vertices],
            }
            for line in sorted(scene.gm, key=lambda l: l.entity_id)
        ]
    if scene.avatar is not None:
        layers["avatar"] = [
            {
                "entity_id": track.entity_id,
                "keyframes": [
                    {"orientation": list(kf.orientation),
                     "position": list(kf.position), "t": kf.t}
                    for kf in track.keyframes
                ],
                "model_id": track.model_id,
            }
            for track in sorted(scene.avatar, key=lambda a: a.entity_id)
        ]
    if scene.fine is not None:
        layers["fine"] = {
            entity_id: [
                {"arrow": list(g.arrow), "arrow_len": g.arrow_len,
                 "dot": list(g.dot), "t": g.t}
                for g in glyphs
            ]
            for entity_id, glyphs in sorted(scene.fine.items())
        }
    payload = {
        "version": scene.version,
        "meta": {
            "convention": scene.meta.convention,
            "duration": scene.meta.duration,
            "source": scene.meta.source,
        },
        "entities": [
            {"color": list(e.color), "id": e.id, "kind": e.kind}
            for e in sorted(scene.entities, key=lambda e: e.id)
        ],
        "layers": layers,
        "staging": [sorted(stage) for stage in scene.staging],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"),
                      allow_nan=False).encode("utf-8")


def _vec(value, n, what) -> tuple:
    if not isinstance(value, list) or len(value) != n:
        raise ValueError(f"scene: {what} must be a {n}-vector")
    return tuple(float(v) for v in value)


def decode_scene(data: bytes | str) -> SceneDocument:
    """Parse and validate a canonical scene document."""
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ValueError(f"scene: invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError("scene: top level must be an object")
    try:
        version = payload["version"]
        meta = payload["meta"]
        entities = payload["entities"]
        layers = payload["layers"]
        staging = payload["staging"]
    except KeyError as exc:
        raise ValueError(f"scene: missing top-level key {exc}") from exc
    if version != SCENE_VERSION:
        raise ValueError(f"scene: unsupported version {version!r}")
    unknown = set(layers) - set(LAYER_NAMES)
    if unknown:
        raise ValueError(f"scene: unknown layers {sorted(unknown)}")

    gm = None
    if "gm" in layers:
        gm = tuple(
            GmPolyline(
                entity_id=line["entity_id"],
                vertices=tuple((_vec(v["position"], 3, "gm vertex"), float(v["t"]))
                               for v in line["vertices"]),
                color=_vec(line["color"], 4, "gm color"),
                opacity=float(line["opacity"]),
            )
            for line in layers["gm"]
        )
    avatar = None
    if "avatar" in layers:
        avatar = tuple(
            AvatarTrack(
                entity_id=track["entity_id"],
                model_id=track["model_id"],
                keyframes=tuple(
                    Pose(float(kf["t"]), _vec(kf["position"], 3, "keyframe position"),
                         _vec(kf["orientation"], 4, "keyframe orientation"))
                    for kf in track["keyframes"]
                ),
            )
            for track in layers["avatar"]
        )
    fine = None
    if "fine" in layers:
        fine = {
            entity_id: tuple(
                FineGlyph(t=float(g["t"]), dot=_vec(g["dot"], 3, "glyph dot"),
                          arrow=_vec(g["arrow"], 3, "glyph arrow"),
                          arrow_len=float(g["arrow_len"]))
                for g in glyphs
            )
            for entity_id, glyphs in layers["fine"].items()
        }

    doc = SceneDocument(
        version=version,
        meta=SceneMeta(source=str(meta["source"]), duration=float(meta["duration"]),
                       convention=str(meta["convention"])),
        entities=tuple(
            SceneEntity(id=e["id"], kind=e["kind"], color=_vec(e["color"], 4, "entity color"))
            for e in entities
        ),
        gm=gm, avatar=avatar, fine=fine,
        staging=tuple(frozenset(stage) for stage in staging),
    )
    validate_scene(doc)
    return doc


# --- recording -> scene pipeline --------------------------------------------

def compile_scene(rec: MotionRecording, *, density: float | DensityFactor = 1.0,
                  smooth_window: int = 1, layers=LAYER_NAMES,
                  arrow_len: float = DEFAULT_ARROW_LEN,
                  include_object_fine: bool = False) -> SceneDocument:
    """validate -> smooth -> build requested layers -> compose.

    The density factor thins the fine layer only; gm and avatar always
    carry every (smoothed) sample. Fine glyphs cover hand tracks unless
    include_object_fine is set. Deterministic for fixed inputs.
    """
    requested = set(layers)
    unknown = requested - set(LAYER_NAMES)
    if unknown:
        raise ValueError(f"unknown layers: {sorted(unknown)}")
    if not requested:
        raise ValueError("at least one layer is required")

    report = validate_recording(rec)
    if not report.ok:
        raise ValidationFailed(report)
    rec = report.recording

    tracks = [smooth_positions(t, smooth_window) for t in rec.tracks]
    gm = build_gm_layer(tracks) if "gm" in requested else None
    avatar = build_avatar_layer(tracks) if "avatar" in requested else None
    fine = None
    if "fine" in requested:
        fine = {
            t.entity_id: build_fine_layer(t, density, arrow_len)
            for t in tracks
            if t.kind == "hand" or include_object_fine
        }
        if not fine:
            fine = None  # no glyph-bearing tracks; drop the layer
    if gm is None and avatar is None and fine is None:
        raise ValueError("requested layers produced no content")
    return compose_scene(gm, avatar, fine,
                         source=rec.meta.source, convention=rec.meta.convention)
