"""movi: motion-capture recordings -> layered 3D scene documents.

The pipeline ingests hand/object pose tracks (canonical CSV), processes
them numerically (resampling, smoothing, density down-sampling, derived
kinematics), compiles three visualization layers (general-movement
trajectories, hand/object avatar keyframes, fine-grained glyphs) into a
canonical scene document, and serves stored sessions over HTTP.
"""

__version__ = "0.1.0"

from movi.errors import (
    BadQuaternion,
    BadSpec,
    BadWindow,
    ColumnMapError,
    EmptyInput,
    InconsistentEntities,
    MalformedRow,
    MoviError,
    NonMonotonicTime,
    TooFewSamples,
    UnknownEntityKind,
    ValidationFailed,
)
from movi.ingest import (
    EntityTrack,
    MotionRecording,
    Pose,
    RecordingMeta,
    parse_recording,
    serialize_recording,
    validate_recording,
)
from movi.kinematics import (
    DensityFactor,
    KinematicSample,
    derive_kinematics,
    downsample,
    resample_track,
    rotate_forward,
    slerp,
    smooth_positions,
)
from movi.layers import (
    AvatarTrack,
    FineGlyph,
    GmPolyline,
    SceneDocument,
    build_avatar_layer,
    build_fine_layer,
    build_gm_layer,
    compile_scene,
    compose_scene,
    decode_scene,
    encode_scene,
)
from movi.scenarios import ScenarioSpec, gen_draw, gen_pickup, gen_toss, generate

__all__ = [
    "AvatarTrack",
    "BadQuaternion",
    "BadSpec",
    "BadWindow",
    "ColumnMapError",
    "DensityFactor",
    "EmptyInput",
    "EntityTrack",
    "FineGlyph",
    "GmPolyline",
    "InconsistentEntities",
    "KinematicSample",
    "MalformedRow",
    "MotionRecording",
    "MoviError",
    "NonMonotonicTime",
    "Pose",
    "RecordingMeta",
    "ScenarioSpec",
    "SceneDocument",
    "TooFewSamples",
    "UnknownEntityKind",
    "ValidationFailed",
    "build_avatar_layer",
    "build_fine_layer",
    "build_gm_layer",
    "compile_scene",
    "compose_scene",
    "decode_scene",
    "derive_kinematics",
    "downsample",
    "encode_scene",
    "gen_draw",
    "gen_pickup",
    "gen_toss",
    "generate",
    "parse_recording",
    "resample_track",
    "rotate_forward",
    "serialize_recording",
    "slerp",
    "smooth_positions",
    "validate_recording",
]
