"""HTTP service: upload recordings, list/delete sessions, and fetch
compiled scenes parameterized by density, smoothing, and layer subset.

Sessions are content-addressed: the id is the SHA-256 of the canonical
recording bytes, so identical uploads land on the same session. Storage
is a flat directory of one CSV per session plus an index.json; index
writes go through a temp file and an atomic rename. Uploads and deletes
are serialized through one lock; scene compilation is stateless and
runs concurrently.

Scenes are compiled on demand by the same library pipeline the CLI
uses, so service responses are byte-identical to local compilation.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

import movi
from movi.errors import MoviError, ValidationFailed
from movi.ingest import parse_recording, serialize_recording, validate_recording
from movi.layers import LAYER_NAMES, compile_scene, encode_scene

API_PREFIX = "/api/v1"
DEFAULT_PORT = 8080
DEFAULT_STORE = "./movi-store"


class SessionStore:
    """Flat-directory session store: ``<root>/<sha256>.csv`` per
    recording plus ``<root>/index.json`` for labels and timestamps.

    Single writer (one lock serializes uploads and deletes), many
    concurrent readers. Raises at construction when the directory
    cannot be created or written.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._index_path = self.root / "index.json"
        self._sessions: dict[str, dict] = {}
        if self._index_path.exists():
            data = json.loads(self._index_path.read_text("utf-8"))
            for sid, entry in data.get("sessions", {}).items():
                if (self.root / f"{sid}.csv").exists():
                    self._sessions[sid] = entry
        probe = self.root / ".write-probe"
        probe.write_bytes(b"")  # raises when the directory is unwritable
        probe.unlink()

    def _flush_index(self):
        tmp = self.root / "index.json.tmp"
        payload = {"version": 1, "sessions": self._sessions}
        tmp.write_text(json.dumps(payload, sort_keys=True, indent=1), "utf-8")
        os.replace(tmp, self._index_path)

    def put(self, canonical: bytes, duration: float, label: str):
        """Store canonical recording bytes; returns (id, entry, created)."""
        sid = hashlib.sha256(canonical).hexdigest()
        with self._lock:
            if sid in self._sessions:
                return sid, dict(self._sessions[sid]), False
            entry = {
                "label": label,
                "created_at": datetime.now(timezone.utc).isoformat(),
                "duration": duration,
            }
            (self.root / f"{sid}.csv").write_bytes(canonical)
            self._sessions[sid] = entry
            self._flush_index()
            return sid, dict(entry), True

    def get_bytes(self, sid: str) -> bytes | None:
        if sid not in self._sessions:
            return None
        try:
            return (self.root / f"{sid}.csv").read_bytes()
        except FileNotFoundError:
            return None

    def delete(self, sid: str) -> bool:
        with self._lock:
            entry = self._sessions.pop(sid, None)
            if entry is None:
                return False
            try:
                (self.root / f"{sid}.csv").unlink()
            except FileNotFoundError:
                pass
            self._flush_index()
            return True

    def list(self) -> list[dict]:
        with self._lock:
            rows = [
                {"session_id": sid, **entry}
                for sid, entry in self._sessions.items()
            ]
        rows.sort(key=lambda r: (r["created_at"], r["session_id"]))
        return rows

    def count(self) -> int:
        return len(self._sessions)


def _canonicalize(body: bytes) -> tuple[bytes, float]:
    """Parse, validate, and re-serialize an uploaded recording."""
    rec = parse_recording(body)
    report = validate_recording(rec)
    if not report.ok:
        raise ValidationFailed(report)
    rec = report.recording
    t0, t1 = rec.time_span()
    return serialize_recording(rec), t1 - t0


def _error_body(exc: Exception) -> dict:
    if isinstance(exc, ValidationFailed):
        return {
            "error": "ValidationFailed",
            "message": str(exc),
            "violations": [
                {"severity": v.severity, "code": v.code, "message": v.message,
                 "entity": v.entity}
                for v in exc.report.violations
            ],
        }
    return {"error": type(exc).__name__, "message": str(exc)}


def _parse_scene_params(density: str, smooth: str, layers: str):
    try:
        d = float(density)
    except ValueError:
        raise ValueError(f"density must be a number, got {density!r}") from None
    if not 0.0 < d <= 1.0:
        raise ValueError(f"density must be in (0, 1], got {density}")
    try:
        window = int(smooth)
    except ValueError:
        raise ValueError(f"smooth must be an integer, got {smooth!r}") from None
    if window < 1 or window % 2 == 0:
        raise ValueError(f"smooth must be an odd integer >= 1, got {smooth}")
    names = [part.strip() for part in layers.split(",") if part.strip()]
    unknown = set(names) - set(LAYER_NAMES)
    if unknown:
        raise ValueError(f"unknown layers: {sorted(unknown)}")
    if not names:
        raise ValueError("layers must name at least one of gm, avatar, fine")
    return d, window, frozenset(names)


def create_app(store_dir: str | Path, viewer_dir: str | Path | None = None) -> FastAPI:
    """Build the application. Raises OSError when store_dir is unusable.

    When viewer_dir names an existing directory its files are served at
    ``/`` (the browser viewer bundle), after the API routes.
    """
    store = SessionStore(store_dir)
    app = FastAPI(title="movi", version=movi.__version__,
                  docs_url=None, redoc_url=None, openapi_url=None)
    app.state.store = store

    @app.post(f"{API_PREFIX}/sessions")
    async def upload_session(request: Request, label: str = ""):
        body = await request.body()
        try:
            canonical, duration = await run_in_threadpool(_canonicalize, body)
        except MoviError as exc:
            return JSONResponse(_error_body(exc), status_code=400)
        sid, entry, created = store.put(canonical, duration, label)
        payload = {"session_id": sid,
                   "status": "created" if created else "exists", **entry}
        return JSONResponse(payload, status_code=201 if created else 200)

    @app.get(f"{API_PREFIX}/sessions")
    def list_sessions():
        return {"sessions": store.list()}

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}/scene")
    def get_scene(session_id: str, density: str = "1.0", smooth: str = "1",
                  layers: str = "gm,avatar,fine"):
        data = store.get_bytes(session_id)
        if data is None:
            return JSONResponse(
                {"error": "NotFound", "message": f"no session {session_id}"},
                status_code=404)
        try:
            d, window, names = _parse_scene_params(density, smooth, layers)
        except ValueError as exc:
            return JSONResponse({"error": "BadParams", "message": str(exc)},
                                status_code=400)
        try:
            rec = parse_recording(data)
            scene = compile_scene(rec, density=d, smooth_window=window, layers=names)
            payload = encode_scene(scene)
        except (MoviError, ValueError) as exc:
            return JSONResponse(_error_body(exc), status_code=400)
        return Response(content=payload, media_type="application/json")

    @app.delete(f"{API_PREFIX}/sessions/{{session_id}}")
    def delete_session(session_id: str):
        if store.delete(session_id):
            return {"deleted": session_id}
        return JSONResponse(
            {"error": "NotFound", "message": f"no session {session_id}"},
            status_code=404)

    @app.get(f"{API_PREFIX}/health")
    def health():
        return {"status": "ok", "version": movi.__version__,
                "store": str(store.root), "session_count": store.count()}

    if viewer_dir is not None:
        viewer = Path(viewer_dir)
        if viewer.is_dir():
            app.mount("/", StaticFiles(directory=str(viewer), html=True),
                      name="viewer")

    return app
