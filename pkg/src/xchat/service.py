"""HTTP service exposing chat, explanations, graph views, and documents.

The service is a thin layer: it loads a built data directory at startup
and routes requests to the core modules. All errors use one JSON shape,
{"code": ..., "message": ...}, with the code derived from the error class.
"""

from __future__ import annotations

import json
import re
import socket
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from pydantic import BaseModel

from .config import ServerConfig
from .errors import (
    GeneratorUnavailable,
    MissingArtifact,
    PortInUse,
    UnknownDocId,
    UnknownEntity,
    XchatError,
)
from .graph import export_graph, neighborhood, to_structured
from .responder import (
    GENERATORS,
    GENERATOR_EXTERNAL,
    LEVELS,
    LEVEL_RESTRICTED,
    ChatSession,
    ReportStore,
    ResponderDeps,
    build_utterance_index,
    converse,
)
from .snapshot import load_snapshot

_SESSION_ID_RE = re.compile(r"^[a-z0-9-]{1,64}$")


class SessionCreateRequest(BaseModel):
    level: str
    topic: str | None = None
    generator: str = "retrieval"
    session_id: str | None = None


class MessageRequest(BaseModel):
    text: str


class ApiError(XchatError):
    """Request-level error with an explicit code and HTTP status."""

    def __init__(self, code: str, message: str, status: int = 400) -> None:
        super().__init__(message)
        self.code = code
        self.status = status


def _snake(name: str) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", name).lower()


def _status_of(exc: XchatError) -> int:
    if isinstance(exc, ApiError):
        return exc.status
    if isinstance(exc, (UnknownDocId, UnknownEntity)):
        return 404
    if isinstance(exc, (MissingArtifact, GeneratorUnavailable)):
        return 503
    return 400


def _code_of(exc: XchatError) -> str:
    if isinstance(exc, ApiError):
        return exc.code
    return _snake(type(exc).__name__)


class SessionStore:
    """File-backed chat sessions with a lock per session id."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._master = threading.Lock()

    def lock(self, session_id: str) -> threading.Lock:
        with self._master:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def exists(self, session_id: str) -> bool:
        return self._path(session_id).is_file()

    def save(self, session: ChatSession) -> None:
        self._path(session.session_id).write_text(
            json.dumps(session.to_record(), sort_keys=True,
                       ensure_ascii=False, indent=2) + "\n", "utf-8")

    def get(self, session_id: str) -> ChatSession | None:
        path = self._path(session_id)
        if not path.is_file():
            return None
        return ChatSession.from_record(json.loads(path.read_text("utf-8")))


def create_app(config: ServerConfig) -> FastAPI:
    """Build the application over the data directory named by the config.

    Raises SnapshotMissing when the data directory has not been built.
    """
    corpus, index, graph, snapshot = load_snapshot(config.data_dir)
    app = FastAPI(title="xchat", docs_url=None, redoc_url=None)
    if config.cors_allowed_origins:
        app.add_middleware(
            CORSMiddleware, allow_origins=config.cors_allowed_origins,
            allow_methods=["*"], allow_headers=["*"])

    deps = ResponderDeps(
        corpus=corpus, index=index,
        utterance_index=build_utterance_index(corpus), graph=graph,
        generator_config=config.generator,
        report_store=ReportStore(Path(config.data_dir) / "reports"))
    sessions = SessionStore(Path(config.data_dir) / "sessions")
    app.state.deps = deps
    app.state.sessions = sessions
    app.state.snapshot = snapshot
    app.state.config = config

    @app.exception_handler(XchatError)
    async def _xchat_error(request: Request, exc: XchatError) -> JSONResponse:
        return JSONResponse(status_code=_status_of(exc),
                            content={"code": _code_of(exc), "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request,
                                exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400,
                            content={"code": "validation_error",
                                     "message": str(exc.errors()[:1])})

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400,
                            content={"code": "invalid_argument",
                                     "message": str(exc)})

    @app.post("/api/sessions")
    def create_session(body: SessionCreateRequest) -> dict:
        if body.level == "l1":
            raise ApiError("level_unsupported",
                           "level l1 is reserved and not implemented")
        if body.level not in LEVELS:
            raise ApiError("invalid_level",
                           f"level must be one of {', '.join(LEVELS)}")
        if body.level == LEVEL_RESTRICTED and not body.topic:
            raise ApiError("topic_required", "level l2 requires a topic")
        if body.generator not in GENERATORS:
            raise ApiError("invalid_generator",
                           f"generator must be one of {', '.join(GENERATORS)}")
        if body.generator == GENERATOR_EXTERNAL \
                and not config.generator.endpoint:
            raise ApiError("generator_not_configured",
                           "no external generator endpoint configured")
        session_id = body.session_id or uuid.uuid4().hex[:12]
        if not _SESSION_ID_RE.fullmatch(session_id):
            raise ApiError("invalid_session_id",
                           "session_id must match [a-z0-9-]{1,64}")
        if sessions.exists(session_id):
            raise ApiError("session_exists",
                           f"session {session_id} already exists")
        session = ChatSession(session_id=session_id, level=body.level,
                              topic=body.topic, generator=body.generator)
        sessions.save(session)
        return {"session_id": session_id}

    @app.post("/api/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageRequest) -> dict:
        if not body.text.strip():
            raise ApiError("empty_message", "message text must be non-empty")
        with sessions.lock(session_id):
            session = sessions.get(session_id)
            if session is None:
                raise ApiError("unknown_session",
                               f"no session {session_id}", status=404)
            reply, response_id, _ = converse(session, body.text, deps)
            sessions.save(session)
        return {"response": reply, "response_id": response_id}

    @app.get("/api/responses/{response_id}/explanation")
    def get_explanation(response_id: str) -> dict:
        record = deps.report_store.get(response_id)
        if record is None:
            raise ApiError("unknown_response",
                           f"no explanation for {response_id}", status=404)
        return record

    @app.get("/api/graph/neighborhood")
    def get_neighborhood(entity: str, depth: int = 1) -> dict:
        sub = neighborhood(graph, entity, depth)
        record = to_structured(sub)
        record["center"] = graph.node_for(entity).node_id
        return record

    @app.get("/api/graph/export")
    def get_export(format: str = "structured") -> Response:
        if format not in ("structured", "import-script"):
            raise ApiError("invalid_format",
                           "format must be structured or import-script")
        payload = export_graph(graph, format)
        if format == "structured":
            return Response(content=payload, media_type="application/json")
        return PlainTextResponse(payload)

    @app.get("/api/documents/{doc_id}")
    def get_document(doc_id: str) -> dict:
        return corpus.get_document(doc_id).to_record()

    @app.get("/api/healthz")
    def healthz() -> dict:
        return {"status": "ok", "snapshot": snapshot.to_record()}

    return app


def serve(config: ServerConfig) -> None:
    """Run the service under uvicorn. Raises PortInUse when the address is
    already bound and SnapshotMissing when the data directory is not built.
    """
    import uvicorn

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((config.host, config.port))
    except OSError as exc:
        raise PortInUse(
            f"cannot listen on {config.host}:{config.port}: {exc}") from exc
    finally:
        probe.close()
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port,
                log_level=config.log_level)
