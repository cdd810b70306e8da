"""Command-line front door.

Subcommands: ``ingest`` converts/canonicalizes a recording CSV, ``gen``
emits a synthetic scenario, ``scene`` compiles a recording into a scene
document, ``serve`` runs the HTTP service.

Exit codes: 0 success, 1 usage error (help goes to stderr), 2 data
error (unreadable input, failed parse or validation, unusable store).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from movi.errors import MoviError, ValidationFailed
from movi.ingest import (
    parse_column_map,
    parse_recording,
    serialize_recording,
    validate_recording,
)
from movi.layers import LAYER_NAMES, compile_scene, encode_scene
from movi.scenarios import KINDS, ScenarioSpec, generate
from movi.service import DEFAULT_PORT, DEFAULT_STORE, create_app


class _UsageError(Exception):
    def __init__(self, parser: argparse.ArgumentParser, message: str):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so main() owns the code."""

    def error(self, message):
        raise _UsageError(self, message)


def _density_arg(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"density must be in (0, 1], got {text}")
    return value


def _smooth_arg(text: str) -> int:
    value = int(text)
    if value < 1 or value % 2 == 0:
        raise argparse.ArgumentTypeError(f"smooth must be an odd integer >= 1, got {text}")
    return value


def _layers_arg(text: str) -> frozenset[str]:
    names = [part.strip() for part in text.split(",") if part.strip()]
    unknown = set(names) - set(LAYER_NAMES)
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown layers: {sorted(unknown)}")
    if not names:
        raise argparse.ArgumentTypeError("layers must name at least one of gm, avatar, fine")
    return frozenset(names)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="movi", description="motion recordings in, scene documents out")
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest",
                       help="convert a recording to canonical CSV")
    p.add_argument("input", help="recording CSV (canonical or foreign with --map)")
    p.add_argument("--map", dest="map_path", default=None,
                   help="column-map config for foreign CSV layouts")
    p.add_argument("--out", required=True, help="output canonical CSV path")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("gen",
                       help="generate a synthetic scenario recording")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--rate", type=float, default=90.0, help="sample rate in Hz")
    p.add_argument("--duration", type=float, default=None, help="clip length in seconds")
    p.add_argument("--seed", type=int, default=0, help="noise seed")
    p.add_argument("--noise-sigma", type=float, default=0.0,
                   help="position noise standard deviation in meters")
    p.add_argument("--out", required=True, help="output canonical CSV path")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("scene",
                       help="compile a recording into a scene document")
    p.add_argument("input", help="canonical recording CSV")
    p.add_argument("--density", type=_density_arg, default=1.0,
                   help="fine-layer sample density in (0, 1]")
    p.add_argument("--smooth", type=_smooth_arg, default=1,
                   help="moving-average window (odd integer)")
    p.add_argument("--layers", type=_layers_arg, default=frozenset(LAYER_NAMES),
                   help="comma-separated subset of gm,avatar,fine")
    p.add_argument("--out", required=True, help="output scene document path")
    p.set_defaults(func=_cmd_scene)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--store", default=DEFAULT_STORE, help="session store directory")
    p.set_defaults(func=_cmd_serve)

    return parser


def _cmd_ingest(args) -> int:
    data = Path(args.input).read_bytes()
    mapping = None
    if args.map_path:
        mapping = parse_column_map(Path(args.map_path).read_text("utf-8"))
    rec = parse_recording(data, mapping)
    report = validate_recording(rec)
    if not report.ok:
        raise ValidationFailed(report)
    Path(args.out).write_bytes(serialize_recording(report.recording))
    return 0


def _cmd_gen(args) -> int:
    spec = ScenarioSpec(kind=args.kind, rate=args.rate, duration=args.duration,
                        seed=args.seed, noise_sigma=args.noise_sigma)
    Path(args.out).write_bytes(serialize_recording(generate(spec)))
    return 0


def _cmd_scene(args) -> int:
    data = Path(args.input).read_bytes()
    rec = parse_recording(data)
    scene = compile_scene(rec, density=args.density, smooth_window=args.smooth,
                          layers=args.layers)
    Path(args.out).write_bytes(encode_scene(scene))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    viewer = os.environ.get("MOVI_VIEWER_DIR")
    if viewer is None and Path("frontend/dist").is_dir():
        viewer = "frontend/dist"
    app = create_app(args.store, viewer_dir=viewer)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="info")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        exc.parser.print_help(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except MoviError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
