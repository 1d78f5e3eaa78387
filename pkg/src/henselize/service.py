"""HTTP service exposing sessions over a small JSON API.

Sessions are held in memory and executed under a per-session lock, so the
single-threaded command-loop semantics are preserved per session while
multiple sessions can be served concurrently.

Endpoints:

    GET    /health
    POST   /sessions                 {"precision": 50} -> {"session_id": ...}
    GET    /sessions/{sid}           session summary
    DELETE /sessions/{sid}
    POST   /sessions/{sid}/commands  {"command": "field Q 5"} -> CommandResponse
"""

from __future__ import annotations

import threading
import uuid
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .oracle import DEFAULT_PRECISION
from .session import Session


class CreateSessionRequest(BaseModel):
    precision: int = Field(default=DEFAULT_PRECISION, ge=2, le=10_000)


class CreateSessionResponse(BaseModel):
    session_id: str


class CommandRequest(BaseModel):
    command: str


class CommandResponse(BaseModel):
    ok: bool
    output: str = ""
    data: Optional[dict] = None
    error: Optional[str] = None
    error_kind: Optional[Literal["parse", "command"]] = None


class SessionSummary(BaseModel):
    session_id: str
    p: Optional[int]
    precision: int
    levels: list[dict]
    bindings: list[str]


class _SessionRecord:
    def __init__(self, session: Session):
        self.session = session
        self.lock = threading.Lock()


def create_app() -> FastAPI:
    app = FastAPI(title="henselize", version="0.1.0")
    sessions: dict[str, _SessionRecord] = {}

    def record(sid: str) -> _SessionRecord:
        rec = sessions.get(sid)
        if rec is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return rec

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", response_model=CreateSessionResponse)
    def create_session(req: CreateSessionRequest) -> CreateSessionResponse:
        sid = uuid.uuid4().hex
        sessions[sid] = _SessionRecord(Session(precision=req.precision))
        return CreateSessionResponse(session_id=sid)

    @app.get("/sessions/{sid}", response_model=SessionSummary)
    def get_session(sid: str) -> SessionSummary:
        rec = record(sid)
        with rec.lock:
            summary = rec.session.summary()
        return SessionSummary(session_id=sid, **summary)

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str) -> dict:
        record(sid)
        del sessions[sid]
        return {"deleted": sid}

    @app.post("/sessions/{sid}/commands", response_model=CommandResponse)
    def run_command(sid: str, req: CommandRequest) -> CommandResponse:
        rec = record(sid)
        with rec.lock:
            result = rec.session.execute(req.command)
        return CommandResponse(
            ok=result.ok,
            output=result.text,
            data=result.data,
            error=result.error,
            error_kind=result.error_kind,
        )

    return app


app = create_app()
