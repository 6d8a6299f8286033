"""HTTP/JSON transport over the deliberation service.

All routes live under ``/api/v1``. Mutations identify the acting member via
the ``X-Deme-Member`` header (development-grade identity; membership itself
is deployment-controlled through the CLI). Errors use one wire shape,
``{"error": {"code": ..., "message": ...}}``, with 400 for validation, 404
for unknown ids, and 409 for conflicts such as voting on a closed poll.

``GET /events`` is a long poll: it answers immediately when events newer than
``since`` exist and otherwise parks the request until a mutation arrives or
``timeout_ms`` lapses, which is what lets clients update without page reloads.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import APIRouter, FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import DemeError, MemberRequired
from .service import DemeService

MEMBER_HEADER = "X-Deme-Member"
MAX_TIMEOUT_MS = 60_000


class DocumentCreate(BaseModel):
    title: str
    body: str


class VersionCreate(BaseModel):
    body: str


class CommentCreate(BaseModel):
    anchor: dict
    header: str
    body: str = ""
    parent_id: str | None = None


class PollCreate(BaseModel):
    version_number: int
    question: str
    rule: dict
    eligible: list[str]


class VoteCreate(BaseModel):
    choice: str


def _acting_member(value: str | None) -> str:
    if not value:
        raise MemberRequired(f"mutations require the {MEMBER_HEADER} header")
    return value


def create_app(service: DemeService, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="deme", version="0.1.0")
    app.state.service = service

    @app.exception_handler(DemeError)
    async def domain_error(request: Request, exc: DemeError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.http_status,
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    @app.exception_handler(RequestValidationError)
    async def shape_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(part) for part in first.get("loc", ()))
        message = f"{where}: {first.get('msg', 'invalid request')}" if where else "invalid request"
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "invalid_request", "message": message}},
        )

    router = APIRouter(prefix="/api/v1")

    @router.post("/documents")
    def create_document(
        payload: DocumentCreate,
        x_deme_member: str | None = Header(None, alias=MEMBER_HEADER),
    ) -> dict:
        member = _acting_member(x_deme_member)
        doc = service.create_document(payload.title, payload.body, member)
        return {"document_id": doc.document_id, "version_number": 1}

    @router.get("/documents/{document_id}")
    def get_document(document_id: str) -> dict:
        return service.document_info(document_id)

    @router.post("/documents/{document_id}/versions")
    def add_version(
        document_id: str,
        payload: VersionCreate,
        x_deme_member: str | None = Header(None, alias=MEMBER_HEADER),
    ) -> dict:
        member = _acting_member(x_deme_member)
        version_number, obsoleted = service.add_version(document_id, payload.body, member)
        return {"version_number": version_number, "obsoleted_comment_ids": obsoleted}

    @router.get("/documents/{document_id}/meeting-view")
    def meeting_view(document_id: str, version: int | None = Query(None)) -> dict:
        return service.meeting_view(document_id, version)

    @router.post("/documents/{document_id}/comments")
    def add_comment(
        document_id: str,
        payload: CommentCreate,
        x_deme_member: str | None = Header(None, alias=MEMBER_HEADER),
    ) -> dict:
        member = _acting_member(x_deme_member)
        comment = service.add_comment(
            document_id,
            payload.anchor,
            payload.header,
            payload.body,
            member,
            payload.parent_id,
        )
        return {"comment_id": comment.comment_id, "pertinence": comment.pertinence}

    @router.get("/documents/{document_id}/comments")
    def get_comments(document_id: str) -> dict:
        return service.comments_payload(document_id)

    @router.post("/documents/{document_id}/polls")
    def open_poll(
        document_id: str,
        payload: PollCreate,
        x_deme_member: str | None = Header(None, alias=MEMBER_HEADER),
    ) -> dict:
        member = _acting_member(x_deme_member)
        poll = service.open_poll(
            document_id,
            payload.version_number,
            payload.question,
            payload.rule,
            payload.eligible,
            member,
        )
        return {"poll_id": poll.poll_id}

    @router.post("/polls/{poll_id}/votes")
    def cast_vote(
        poll_id: str,
        payload: VoteCreate,
        x_deme_member: str | None = Header(None, alias=MEMBER_HEADER),
    ) -> dict:
        member = _acting_member(x_deme_member)
        status = service.cast_vote(poll_id, member, payload.choice)
        return {
            "recorded": True,
            "tally": status["tally"],
            "outcome": status["outcome"],
        }

    @router.post("/polls/{poll_id}/close")
    def close_poll(
        poll_id: str,
        x_deme_member: str | None = Header(None, alias=MEMBER_HEADER),
    ) -> dict:
        member = _acting_member(x_deme_member)
        return service.close_poll(poll_id, member)

    @router.get("/polls/{poll_id}/tally")
    def poll_tally(poll_id: str) -> dict:
        return service.poll_status(poll_id)

    @router.get("/events")
    def get_events(
        since: int = Query(0, ge=0),
        timeout_ms: int = Query(0, ge=0, le=MAX_TIMEOUT_MS),
    ) -> dict:
        if timeout_ms > 0:
            notices = service.wait_for_events(since, timeout_ms)
        else:
            notices = service.events_since(since)
        return {"events": notices}

    app.include_router(router)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
