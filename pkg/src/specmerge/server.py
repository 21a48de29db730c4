"""Session-scoped HTTP service for interactively tuning a merge.

Each session holds uploaded layers, per-layer coefficients and shifts, and
an engine choice.  Every mutation bumps a monotone revision; previews are
rendered from a consistent snapshot, cached by (revision, format), and
stamped with ``X-Revision`` so a client can tell which state it is looking
at.  The PGM preview bytes are produced by the exact pipeline the ``merge``
CLI subcommand uses, so the two agree byte for byte.

State lives in memory with idle-session eviction; this is a single-user
desk instrument, not a fleet service.
"""

from __future__ import annotations

import io
import math
import secrets
import threading
import time
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request, Response, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse

from .image import PgmError, align, decode_pgm, decode_png, encode_pgm, encode_png, normalize, quantize
from .merging import Layer, MergeSpec, merge_frequency, merge_spatial
from .shifting import NonIntegerShiftError, Shift

PREVIEW_MAXVAL = 255
DEFAULT_TTL_S = 1800.0

PGM_MEDIA_TYPE = "image/x-portable-graymap"
PNG_MEDIA_TYPE = "image/png"

_FALLBACK_PAGE = """<!DOCTYPE html>
<html><head><title>specmerge</title></head>
<body><h1>specmerge tuning server</h1>
<p>No UI bundle is configured. Start with <code>--root &lt;dir&gt;</code> to serve one.
The JSON API lives under <code>/sessions</code>; health at <code>/healthz</code>.</p>
</body></html>
"""


class ApiError(Exception):
    """An error to report as {code, message} JSON with an HTTP status."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class SessionLayer:
    name: str
    image: np.ndarray  # float64 in [0, 1], aligned
    coefficient: float = 1.0
    sx: float = 0.0
    sy: float = 0.0


@dataclass
class Session:
    id: str
    layers: list[SessionLayer]
    engine: str = "frequency"
    revision: int = 1
    last_access: float = field(default_factory=time.monotonic)
    lock: threading.Lock = field(default_factory=threading.Lock)
    preview_cache: dict = field(default_factory=dict)

    def touch(self):
        self.last_access = time.monotonic()

    def bump(self):
        self.revision += 1
        self.preview_cache.clear()

    def merge_spec(self) -> MergeSpec:
        return MergeSpec(
            tuple(
                Layer(
                    layer.image,
                    shift=Shift(layer.sx, layer.sy),
                    coefficient=layer.coefficient,
                    boundary="wrap",
                )
                for layer in self.layers
            ),
            output_policy="clamp",
        )

    def state(self) -> dict:
        rows, cols = self.layers[0].image.shape
        return {
            "id": self.id,
            "revision": self.revision,
            "engine": self.engine,
            "rows": rows,
            "cols": cols,
            "layers": [
                {
                    "index": k,
                    "name": layer.name,
                    "coefficient": layer.coefficient,
                    "sx": layer.sx,
                    "sy": layer.sy,
                }
                for k, layer in enumerate(self.layers)
            ],
        }


class SessionStore:
    """Thread-safe id -> Session map with idle eviction."""

    def __init__(self, ttl_s: float):
        self.ttl_s = ttl_s
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _purge(self):
        now = time.monotonic()
        dead = [
            sid
            for sid, session in self._sessions.items()
            if now - session.last_access > self.ttl_s
        ]
        for sid in dead:
            del self._sessions[sid]

    def add(self, session: Session):
        with self._lock:
            self._purge()
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(session_id)
            if session is None:
                raise ApiError(404, "unknown_session", f"no session {session_id!r}")
            session.touch()
            return session


def _decode_upload(name: str, payload: bytes) -> np.ndarray:
    if not payload:
        raise ApiError(400, "codec_error", f"{name}: empty file")
    try:
        if payload[:2] in (b"P2", b"P5"):
            raw = decode_pgm(payload)
        elif payload[:8] == b"\x89PNG\r\n\x1a\n":
            raw = decode_png(payload)
        else:
            raise PgmError("unrecognized image format (need PGM or PNG)")
    except PgmError as exc:
        raise ApiError(400, "codec_error", f"{name}: {exc}") from None
    except Exception as exc:
        raise ApiError(400, "codec_error", f"{name}: {exc}") from None
    return normalize(raw, "maxval")


def _finite_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ApiError(400, "invalid_request", f"{where} must be a number")
    if not math.isfinite(value):
        raise ApiError(400, "invalid_request", f"{where} must be finite")
    return float(value)


def _render_preview(session: Session, fmt: str) -> tuple[bytes, int, float, float]:
    """Merge, quantize and encode under the session lock; cache by revision."""
    key = (session.revision, fmt)
    cached = session.preview_cache.get(key)
    if cached is None:
        spec = session.merge_spec()
        if session.engine == "spatial":
            try:
                result = merge_spatial(spec)
            except NonIntegerShiftError as exc:
                raise ApiError(400, "non_integer_shift", str(exc)) from None
        else:
            result = merge_frequency(spec)
        raw, _ = quantize(result.image, PREVIEW_MAXVAL)
        data = encode_pgm(raw, binary=True) if fmt == "pgm" else encode_png(raw)
        cached = (data, result.imag_residue, result.clamped_fraction)
        session.preview_cache[key] = cached
    data, residue, clamped = cached
    return data, session.revision, residue, clamped


def _thumb_png(image: np.ndarray, edge: int = 128) -> bytes:
    from PIL import Image as PilImage

    raw, _ = quantize(image, 255)
    pil = PilImage.fromarray(raw.samples.astype(np.uint8), mode="L")
    pil.thumbnail((edge, edge))
    buf = io.BytesIO()
    pil.save(buf, format="PNG")
    return buf.getvalue()


def create_app(static_root: str | None = None, session_ttl: float = DEFAULT_TTL_S) -> FastAPI:
    app = FastAPI(title="specmerge tuning server", docs_url=None, redoc_url=None)
    store = SessionStore(session_ttl)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError):
        return JSONResponse({"code": exc.code, "message": exc.message}, status_code=exc.status)

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            {"code": "invalid_request", "message": str(exc.errors()[:1])}, status_code=400
        )

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/sessions")
    async def create_session(files: list[UploadFile] | None = None):
        if not files:
            raise ApiError(400, "empty_session", "upload at least one image")
        names, images = [], []
        for upload in files:
            payload = await upload.read()
            name = upload.filename or f"layer_{len(names)}"
            images.append(_decode_upload(name, payload))
            names.append(name)
        aligned = align(images, "pad_zero")
        session = Session(
            id=secrets.token_hex(8),
            layers=[SessionLayer(name=n, image=img) for n, img in zip(names, aligned)],
        )
        store.add(session)
        return {"id": session.id}

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return session.state()

    @app.patch("/sessions/{session_id}/layers/{index}")
    async def update_layer(session_id: str, index: int, request: Request):
        session = store.get(session_id)
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "invalid_request", "body must be a JSON object") from None
        if not isinstance(body, dict):
            raise ApiError(400, "invalid_request", "body must be a JSON object")
        unknown = set(body) - {"coefficient", "sx", "sy"}
        if unknown:
            raise ApiError(400, "invalid_request", f"unknown field(s) {sorted(unknown)}")

        updates = {}
        if "coefficient" in body:
            coefficient = _finite_number(body["coefficient"], "coefficient")
            if coefficient < 0:
                raise ApiError(400, "bad_coefficient", "coefficient must be >= 0")
            updates["coefficient"] = coefficient
        for key in ("sx", "sy"):
            if key in body:
                updates[key] = _finite_number(body[key], key)

        with session.lock:
            if not 0 <= index < len(session.layers):
                raise ApiError(404, "bad_layer", f"no layer {index}")
            layer = session.layers[index]
            for key, value in updates.items():
                setattr(layer, key, value)
            session.bump()
            return {"revision": session.revision}

    @app.put("/sessions/{session_id}/engine")
    async def set_engine(session_id: str, request: Request):
        session = store.get(session_id)
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "invalid_request", "body must be a JSON object") from None
        engine = body.get("engine") if isinstance(body, dict) else None
        if engine not in ("spatial", "frequency"):
            raise ApiError(400, "invalid_request", "engine must be spatial or frequency")
        with session.lock:
            session.engine = engine
            session.bump()
            return {"revision": session.revision}

    @app.get("/sessions/{session_id}/preview")
    async def get_preview(session_id: str, format: str = "png"):
        if format not in ("png", "pgm"):
            raise ApiError(400, "invalid_request", "format must be png or pgm")
        session = store.get(session_id)
        with session.lock:
            data, revision, residue, clamped = _render_preview(session, format)
        return Response(
            content=data,
            media_type=PNG_MEDIA_TYPE if format == "png" else PGM_MEDIA_TYPE,
            headers={
                "X-Revision": str(revision),
                "X-Imag-Residue": f"{residue:.6e}",
                "X-Clamped-Fraction": f"{clamped:.6f}",
                "Cache-Control": "no-store",
            },
        )

    @app.get("/sessions/{session_id}/layers/{index}/thumb")
    async def layer_thumb(session_id: str, index: int):
        session = store.get(session_id)
        with session.lock:
            if not 0 <= index < len(session.layers):
                raise ApiError(404, "bad_layer", f"no layer {index}")
            data = _thumb_png(session.layers[index].image)
        return Response(content=data, media_type=PNG_MEDIA_TYPE)

    if static_root:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_root, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        async def index():
            return _FALLBACK_PAGE

    return app
