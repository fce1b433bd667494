"""HTTP API over grounding sessions, consumed by the bundled web UI.

Sessions live in memory with idle eviction; each session is answered under
its own lock, so concurrent dialogues on the same scene never interfere.
"""

from __future__ import annotations

import mimetypes
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import InvalidOption, MissingScene, SessionFinished, WrongReplyKind
from .model import dump_scene_graph
from .session import SessionState, answer, snapshot, start_session
from .similarity import SimilarityProvider
from .store import SceneStore

DEFAULT_SESSION_TTL = 30 * 60.0  # seconds of idleness before eviction


@dataclass
class _Entry:
    state: SessionState
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)


class SessionStore:
    """Thread-safe in-memory session registry with idle eviction."""

    def __init__(self, ttl: float = DEFAULT_SESSION_TTL):
        self.ttl = ttl
        self._entries: dict[str, _Entry] = {}
        self._guard = threading.Lock()

    def _evict_stale(self) -> None:
        now = time.monotonic()
        stale = [sid for sid, e in self._entries.items()
                 if now - e.last_access > self.ttl]
        for sid in stale:
            del self._entries[sid]

    def add(self, state: SessionState) -> None:
        with self._guard:
            self._evict_stale()
            self._entries[state.session_id] = _Entry(state)

    def get(self, session_id: str) -> _Entry:
        with self._guard:
            self._evict_stale()
            entry = self._entries.get(session_id)
            if entry is None:
                raise KeyError(session_id)
            entry.last_access = time.monotonic()
            return entry


def _parse_reply(body: dict) -> int | str:
    if not isinstance(body, dict) or "reply" not in body:
        raise HTTPException(400, "body must be {'reply': ...}")
    reply = body["reply"]
    if not isinstance(reply, dict):
        raise HTTPException(400, "reply must be an object")
    keys = set(reply)
    if keys == {"option"}:
        option = reply["option"]
        if not isinstance(option, int) or isinstance(option, bool):
            raise HTTPException(400, "option must be an integer")
        return option
    if keys == {"confirm"}:
        confirm = reply["confirm"]
        if not isinstance(confirm, bool):
            raise HTTPException(400, "confirm must be a boolean")
        return "yes" if confirm else "no"
    if keys == {"none"}:
        if reply["none"] is not True:
            raise HTTPException(400, "none must be true")
        return "none"
    raise HTTPException(400, "reply must be one of option/confirm/none")


def create_app(
    scenes: SceneStore,
    matcher: SimilarityProvider,
    session_ttl: float = DEFAULT_SESSION_TTL,
    static_dir: Optional[Path] = None,
) -> FastAPI:
    app = FastAPI(title="groundtalk")
    sessions = SessionStore(ttl=session_ttl)
    app.state.scenes = scenes
    app.state.sessions = sessions

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse({"detail": "malformed body"}, status_code=400)

    @app.get("/api/scenes")
    def list_scenes() -> list[dict]:
        return [
            {
                "scene_id": record.graph.scene_id,
                "object_count": len(record.graph.nodes),
                "has_image": scenes.resolve_image(record.graph.scene_id) is not None,
            }
            for record in scenes
        ]

    @app.get("/api/scenes/{scene_id}")
    def get_scene(scene_id: str) -> dict:
        try:
            graph = scenes.get(scene_id)
        except MissingScene:
            raise HTTPException(404, f"unknown scene {scene_id!r}")
        return dump_scene_graph(graph)

    @app.get("/api/scenes/{scene_id}/image")
    def get_scene_image(scene_id: str):
        try:
            path = scenes.resolve_image(scene_id)
        except MissingScene:
            raise HTTPException(404, f"unknown scene {scene_id!r}")
        if path is None:
            raise HTTPException(404, "scene has no image")
        media_type = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
        return FileResponse(path, media_type=media_type)

    @app.post("/api/sessions")
    def create_session(body: dict = Body(...)) -> JSONResponse:
        scene_id = body.get("scene_id")
        expression = body.get("expression")
        if not isinstance(scene_id, str) or not isinstance(expression, str):
            raise HTTPException(400, "body must carry scene_id and expression strings")
        try:
            graph = scenes.get(scene_id)
        except MissingScene:
            raise HTTPException(404, f"unknown scene {scene_id!r}")
        state = start_session(graph, expression, matcher)
        sessions.add(state)
        return JSONResponse(snapshot(state))

    def _entry(session_id: str) -> _Entry:
        try:
            return sessions.get(session_id)
        except KeyError:
            raise HTTPException(404, f"unknown session {session_id!r}")

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> JSONResponse:
        entry = _entry(session_id)
        with entry.lock:
            return JSONResponse(snapshot(entry.state))

    @app.get("/api/sessions/{session_id}/transcript")
    def get_transcript(session_id: str) -> JSONResponse:
        entry = _entry(session_id)
        with entry.lock:
            return JSONResponse(list(entry.state.transcript))

    @app.post("/api/sessions/{session_id}/answer")
    def post_answer(session_id: str, body: dict = Body(...)) -> JSONResponse:
        entry = _entry(session_id)
        reply = _parse_reply(body)
        with entry.lock:
            try:
                answer(entry.state, reply)
            except SessionFinished:
                raise HTTPException(409, "session already finished")
            except (InvalidOption, WrongReplyKind) as exc:
                raise HTTPException(400, str(exc))
            return JSONResponse(snapshot(entry.state))

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
