"""Parsing, validation, and canonical serialization of motion recordings.

A recording is a set of per-entity pose tracks (hands and objects). The
canonical interchange format is a UTF-8 CSV with LF line endings:

    #convention=rh-yup-m
    #source=gen:toss
    t,entity,kind,px,py,pz,qx,qy,qz,qw
    0.0,right_hand,hand,0.0,0.9,0.0,0.0,0.0,0.0,1.0
    ...

``#key=value`` lines before the header carry recording metadata (sorted
by key on output so the encoding is canonical); data rows are sorted by
``(t, entity)``. Numbers use shortest round-trip decimals, so
``parse_recording(serialize_recording(r)) == r`` holds field-exact.

Coordinate convention: right-handed, y-up, meters, quaternions stored
as (x, y, z, w).
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field

from movi.errors import (
    BadQuaternion,
    ColumnMapError,
    EmptyInput,
    MalformedRow,
    NonMonotonicTime,
)

HEADER = "t,entity,kind,px,py,pz,qx,qy,qz,qw"
CONVENTION = "rh-yup-m"

#: hand entities have fixed ids; objects are namespaced by name
ENTITY_ID_RE = re.compile(r"^(left_hand|right_hand|object:[A-Za-z0-9_\-]+)$")
_META_KEY_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")
_RESERVED_META = ("convention", "rate_hz", "source")

#: |norm - 1| <= QUAT_TOL holds for every stored orientation
QUAT_TOL = 1e-6
#: deviations up to this band are renormalized; beyond it they are errors
QUAT_REPAIR_TOL = 1e-3


def format_float(x: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(x))


def kind_for_entity(entity_id: str) -> str | None:
    if entity_id in ("left_hand", "right_hand"):
        return "hand"
    if entity_id.startswith("object:"):
        return "object"
    return None


def quat_norm(q) -> float:
    x, y, z, w = q
    return math.sqrt(x * x + y * y + z * z + w * w)


@dataclass(frozen=True)
class Pose:
    """Timestamped rigid pose: position in meters, unit quaternion (x,y,z,w)."""

    t: float
    position: tuple[float, float, float]
    orientation: tuple[float, float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "position", tuple(float(v) for v in self.position))
        object.__setattr__(self, "orientation", tuple(float(v) for v in self.orientation))


@dataclass(frozen=True)
class EntityTrack:
    """Ordered pose samples for one tracked entity."""

    entity_id: str
    kind: str
    samples: tuple[Pose, ...]

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(p.t for p in self.samples)


@dataclass(frozen=True)
class RecordingMeta:
    source: str = "unknown"
    rate_hz: float | None = None
    convention: str = CONVENTION
    extra: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class MotionRecording:
    tracks: tuple[EntityTrack, ...]
    meta: RecordingMeta = field(default_factory=RecordingMeta)

    def __post_init__(self):
        object.__setattr__(self, "tracks", tuple(self.tracks))

    def track(self, entity_id: str) -> EntityTrack:
        for tr in self.tracks:
            if tr.entity_id == entity_id:
                return tr
        raise KeyError(entity_id)

    def time_span(self) -> tuple[float, float]:
        ts = [p.t for tr in self.tracks for p in tr.samples]
        if not ts:
            raise EmptyInput("recording has no samples")
        return min(ts), max(ts)


# --- column-map adapter -----------------------------------------------------

_MAP_FIELDS = ("t", "px", "py", "pz", "qx", "qy", "qz", "qw")


@dataclass(frozen=True)
class ColumnMap:
    """Maps a foreign CSV layout onto canonical recording fields.

    Parsed from a small ``key=value`` text file: the eight numeric field
    keys name foreign columns; ``entity`` names the entity column (or
    ``entity_value`` fixes a constant id for single-entity files);
    ``time_scale`` / ``position_scale`` convert units;
    ``entity:<foreign>=<canonical>`` lines rename entity values.
    """

    columns: dict[str, str]
    entity_column: str | None = None
    entity_value: str | None = None
    time_scale: float = 1.0
    position_scale: float = 1.0
    entity_renames: dict[str, str] = field(default_factory=dict)
    source: str = "mapped"
    rate_hz: float | None = None


def parse_column_map(text: str) -> ColumnMap:
    columns: dict[str, str] = {}
    renames: dict[str, str] = {}
    opts: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ColumnMapError(f"expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        key, value = key.strip(), value.strip()
        if key.startswith("entity:"):
            renames[key[len("entity:"):]] = value
        elif key in _MAP_FIELDS:
            columns[key] = value
        else:
            opts[key] = value
    missing = [f for f in _MAP_FIELDS if f not in columns]
    if missing:
        raise ColumnMapError(f"missing column mappings: {', '.join(missing)}")
    entity_column = opts.pop("entity", None)
    entity_value = opts.pop("entity_value", None)
    if (entity_column is None) == (entity_value is None):
        raise ColumnMapError("exactly one of 'entity' or 'entity_value' is required")
    try:
        time_scale = float(opts.pop("time_scale", "1"))
        position_scale = float(opts.pop("position_scale", "1"))
        rate_hz = opts.pop("rate_hz", None)
        rate_hz = float(rate_hz) if rate_hz is not None else None
    except ValueError as exc:
        raise ColumnMapError(f"bad numeric option: {exc}") from exc
    source = opts.pop("source", "mapped")
    if opts:
        raise ColumnMapError(f"unknown keys: {', '.join(sorted(opts))}")
    return ColumnMap(
        columns=columns,
        entity_column=entity_column,
        entity_value=entity_value,
        time_scale=time_scale,
        position_scale=position_scale,
        entity_renames=renames,
        source=source,
        rate_hz=rate_hz,
    )


# --- parsing ----------------------------------------------------------------

def _as_text(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedRow(f"input is not UTF-8: {exc}") from exc
    return data


def _parse_float(token: str, what: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MalformedRow(f"bad number for {what}: {token!r}", line_no) from None
    if not math.isfinite(value):
        raise MalformedRow(f"non-finite {what}: {token!r}", line_no)
    return value


def _check_row(entity: str, kind: str, t: float, quat, line_no: int):
    if not ENTITY_ID_RE.match(entity):
        raise MalformedRow(f"bad entity id {entity!r}", line_no)
    expected_kind = kind_for_entity(entity)
    if kind != expected_kind:
        raise MalformedRow(
            f"kind {kind!r} does not match entity {entity!r} (expected {expected_kind!r})",
            line_no,
        )
    if t < 0.0:
        raise MalformedRow(f"negative timestamp {t!r}", line_no)
    norm = quat_norm(quat)
    if abs(norm - 1.0) > QUAT_REPAIR_TOL:
        raise BadQuaternion(
            f"line {line_no}: quaternion norm {norm:.6g} deviates from 1 "
            f"by more than {QUAT_REPAIR_TOL}"
        )


def _normalize_quat(q: tuple[float, float, float, float]):
    norm = quat_norm(q)
    if abs(norm - 1.0) <= QUAT_TOL:
        return q
    return tuple(v / norm for v in q)


def _group_rows(rows) -> tuple[EntityTrack, ...]:
    """Group (entity, kind, pose) rows into per-entity tracks.

    Encounter order per entity is kept and must be strictly increasing in
    time; the returned tracks are sorted by entity id (canonical order).
    """
    order: list[str] = []
    grouped: dict[str, list[Pose]] = {}
    kinds: dict[str, str] = {}
    for entity, kind, pose, line_no in rows:
        if entity not in grouped:
            grouped[entity] = []
            kinds[entity] = kind
            order.append(entity)
        prev = grouped[entity]
        if prev and pose.t <= prev[-1].t:
            raise NonMonotonicTime(
                f"entity {entity!r}: t={format_float(pose.t)} at line {line_no} "
                f"does not increase past t={format_float(prev[-1].t)}"
            )
        prev.append(pose)
    return tuple(
        EntityTrack(entity_id=e, kind=kinds[e], samples=tuple(grouped[e]))
        for e in sorted(grouped)
    )


def _parse_meta_line(line: str, line_no: int) -> tuple[str, str]:
    body = line[1:]
    if "=" not in body:
        raise MalformedRow(f"bad meta line {line!r}", line_no)
    key, value = body.split("=", 1)
    if not _META_KEY_RE.match(key):
        raise MalformedRow(f"bad meta key {key!r}", line_no)
    return key, value


def parse_recording(data: bytes | str, mapping: ColumnMap | None = None) -> MotionRecording:
    """Parse canonical CSV bytes (or a mapped foreign CSV) into a recording.

    Raises EmptyInput, MalformedRow, NonMonotonicTime, or BadQuaternion.
    Quaternions whose norm is within the repair band are renormalized so
    the returned recording always satisfies the type invariants.
    """
    text = _as_text(data)
    if mapping is not None:
        return _parse_mapped(text, mapping)
    if not text.strip():
        raise EmptyInput("no input")

    meta_kv: dict[str, str] = {}
    rows = []
    header_seen = False
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line:
            continue
        if not header_seen:
            if line.startswith("#"):
                key, value = _parse_meta_line(line, line_no)
                meta_kv[key] = value
                continue
            if line != HEADER:
                raise MalformedRow(f"expected header {HEADER!r}, got {line!r}", line_no)
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 10:
            raise MalformedRow(f"expected 10 fields, got {len(parts)}", line_no)
        t = _parse_float(parts[0], "t", line_no)
        entity, kind = parts[1], parts[2]
        position = tuple(_parse_float(parts[3 + i], "position", line_no) for i in range(3))
        quat = tuple(_parse_float(parts[6 + i], "quaternion", line_no) for i in range(4))
        _check_row(entity, kind, t, quat, line_no)
        rows.append((entity, kind, Pose(t, position, _normalize_quat(quat)), line_no))

    if not header_seen:
        raise MalformedRow(f"missing header {HEADER!r}")
    if not rows:
        raise EmptyInput("no data rows")

    rate_hz = None
    if "rate_hz" in meta_kv:
        try:
            rate_hz = float(meta_kv.pop("rate_hz"))
        except ValueError:
            raise MalformedRow("bad meta rate_hz") from None
    meta = RecordingMeta(
        source=meta_kv.pop("source", "unknown"),
        rate_hz=rate_hz,
        convention=meta_kv.pop("convention", CONVENTION),
        extra=meta_kv,
    )
    return MotionRecording(tracks=_group_rows(rows), meta=meta)


def _parse_mapped(text: str, mapping: ColumnMap) -> MotionRecording:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInput("no input") from None
    header = [h.strip() for h in header]
    index: dict[str, int] = {}
    for field_name, column in mapping.columns.items():
        if column not in header:
            raise ColumnMapError(f"column {column!r} (for {field_name}) not in header")
        index[field_name] = header.index(column)
    entity_idx = None
    if mapping.entity_column is not None:
        if mapping.entity_column not in header:
            raise ColumnMapError(f"entity column {mapping.entity_column!r} not in header")
        entity_idx = header.index(mapping.entity_column)

    rows = []
    for line_no, parts in enumerate(reader, start=2):
        if not parts or all(not p.strip() for p in parts):
            continue
        width = max(index.values()) if entity_idx is None else max(entity_idx, *index.values())
        if len(parts) <= width:
            raise MalformedRow(f"expected at least {width + 1} fields, got {len(parts)}", line_no)
        t = _parse_float(parts[index["t"]], "t", line_no) * mapping.time_scale
        position = tuple(
            _parse_float(parts[index[k]], "position", line_no) * mapping.position_scale
            for k in ("px", "py", "pz")
        )
        quat = tuple(_parse_float(parts[index[k]], "quaternion", line_no)
                     for k in ("qx", "qy", "qz", "qw"))
        if entity_idx is not None:
            foreign = parts[entity_idx].strip()
            entity = mapping.entity_renames.get(foreign, foreign)
        else:
            entity = mapping.entity_value
        kind = kind_for_entity(entity)
        if kind is None:
            raise MalformedRow(
                f"entity {entity!r} is not canonical; add an entity:<foreign>=<canonical> rename",
                line_no,
            )
        _check_row(entity, kind, t, quat, line_no)
        rows.append((entity, kind, Pose(t, position, _normalize_quat(quat)), line_no))
    if not rows:
        raise EmptyInput("no data rows")
    meta = RecordingMeta(source=mapping.source, rate_hz=mapping.rate_hz)
    return MotionRecording(tracks=_group_rows(rows), meta=meta)


# --- serialization ----------------------------------------------------------

def serialize_recording(rec: MotionRecording) -> bytes:
    """Canonical CSV bytes: sorted meta preamble, fixed header, rows
    sorted by (t, entity), shortest round-trip decimals, LF endings."""
    if not rec.tracks:
        raise EmptyInput("recording has no tracks")
    meta_kv: dict[str, str] = {
        "convention": rec.meta.convention,
        "source": rec.meta.source,
    }
    if rec.meta.rate_hz is not None:
        meta_kv["rate_hz"] = format_float(rec.meta.rate_hz)
    for key, value in rec.meta.extra.items():
        if key in _RESERVED_META or not _META_KEY_RE.match(key):
            raise MalformedRow(f"bad meta key {key!r}")
        if "\n" in value:
            raise MalformedRow(f"meta value for {key!r} contains a newline")
        meta_kv[key] = value

    rows = []
    for track in rec.tracks:
        if not track.samples:
            raise EmptyInput(f"track {track.entity_id!r} has no samples")
        for pose in track.samples:
            rows.append((pose.t, track.entity_id, track.kind, pose))
    rows.sort(key=lambda r: (r[0], r[1]))

    lines = [f"#{k}={meta_kv[k]}" for k in sorted(meta_kv)]
    lines.append(HEADER)
    for t, entity, kind, pose in rows:
        px, py, pz = pose.position
        qx, qy, qz, qw = pose.orientation
        lines.append(",".join((
            format_float(t), entity, kind,
            format_float(px), format_float(py), format_float(pz),
            format_float(qx), format_float(qy), format_float(qz), format_float(qw),
        )))
    return ("\n".join(lines) + "\n").encode("utf-8")


# --- validation -------------------------------------------------------------

@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "violation" | "warning"
    code: str
    message: str
    entity: str | None = None

    def __str__(self):
        where = f" [{self.entity}]" if self.entity else ""
        return f"{self.severity}:{self.code}{where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]
    recording: MotionRecording  # input with repairable problems fixed

    @property
    def violations(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity == "violation")

    @property
    def warnings(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_recording(rec: MotionRecording) -> ValidationReport:
    """Check every type invariant; report violations and warnings as data.

    Quaternion norms inside the repair band are renormalized in the
    returned report's recording and reported as warnings; an empty issue
    list means the input already satisfied every invariant.
    """
    issues: list[ValidationIssue] = []
    seen: set[str] = set()
    fixed_tracks: list[EntityTrack] = []
    for track in rec.tracks:
        eid = track.entity_id
        if eid in seen:
            issues.append(ValidationIssue("violation", "duplicate_entity",
                                          f"duplicate entity id {eid!r}", eid))
        seen.add(eid)
        if not ENTITY_ID_RE.match(eid):
            issues.append(ValidationIssue("violation", "bad_entity_id",
                                          f"entity id {eid!r} is not canonical", eid))
        elif track.kind != kind_for_entity(eid):
            issues.append(ValidationIssue("violation", "kind_mismatch",
                                          f"kind {track.kind!r} does not match id {eid!r}", eid))
        if len(track.samples) < 2:
            issues.append(ValidationIssue("violation", "too_few_samples",
                                          f"track has {len(track.samples)} sample(s); "
                                          "layer building needs at least 2", eid))
        prev_t = None
        fixed_samples: list[Pose] = []
        for i, pose in enumerate(track.samples):
            if not math.isfinite(pose.t) or pose.t < 0.0:
                issues.append(ValidationIssue("violation", "bad_time",
                                              f"sample {i}: bad timestamp {pose.t!r}", eid))
            elif prev_t is not None and pose.t <= prev_t:
                issues.append(ValidationIssue("violation", "non_monotonic_time",
                                              f"sample {i}: t={format_float(pose.t)} does not "
                                              f"increase past t={format_float(prev_t)}", eid))
            prev_t = pose.t if math.isfinite(pose.t) else prev_t
            if not all(math.isfinite(v) for v in pose.position):
                issues.append(ValidationIssue("violation", "bad_position",
                                              f"sample {i}: non-finite position", eid))
            norm = quat_norm(pose.orientation)
            deviation = abs(norm - 1.0)
            if not math.isfinite(norm) or deviation > QUAT_REPAIR_TOL:
                issues.append(ValidationIssue("violation", "bad_quaternion",
                                              f"sample {i}: quaternion norm {norm:.6g}", eid))
                fixed_samples.append(pose)
            elif deviation > QUAT_TOL:
                issues.append(ValidationIssue("warning", "renormalized",
                                              f"sample {i}: quaternion norm {norm:.6g} "
                                              "renormalized", eid))
                fixed_samples.append(Pose(pose.t, pose.position,
                                          tuple(v / norm for v in pose.orientation)))
            else:
                fixed_samples.append(pose)
        fixed_tracks.append(EntityTrack(eid, track.kind, tuple(fixed_samples)))
    if rec.meta.convention != CONVENTION:
        issues.append(ValidationIssue("violation", "bad_convention",
                                      f"convention {rec.meta.convention!r} is not {CONVENTION!r}"))
    fixed = MotionRecording(tracks=tuple(fixed_tracks), meta=rec.meta)
    return ValidationReport(issues=tuple(issues), recording=fixed)
