"""HTTP face of the annotation store (FastAPI).

Authentication is optional and desk-scale: a JSON file mapping static
bearer tokens to user ids. Without it the service trusts the annotator and
reviewer fields in each request. When a front-end bundle directory is
supplied, it is served as static assets from the root path.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import Depends, FastAPI, HTTPException, Query, Request
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from .state import AnnotationError, AnnotationStore, StateConflictError


class ProposeBody(BaseModel):
    annotator: str = ""
    synonym: str
    preview: bool = False
    version: int | None = None


class ReviewBody(BaseModel):
    reviewer: str = ""
    verdict: str
    note: str = ""
    version: int | None = None


def load_auth_config(path: str | Path) -> dict[str, str]:
    """token -> user id."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    tokens = raw.get("tokens", raw)
    return {token: (info["user"] if isinstance(info, dict) else str(info))
            for token, info in tokens.items()}


def create_app(store: AnnotationStore, auth_tokens: dict[str, str] | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="storylex annotation service")

    def actor(request: Request, claimed: str = "") -> str:
        """Resolve the acting user; with auth on, the token wins."""
        if not auth_tokens:
            if not claimed:
                raise HTTPException(400, "annotator/reviewer id required")
            return claimed
        header = request.headers.get("authorization", "")
        token = header.removeprefix("Bearer ").strip()
        user = auth_tokens.get(token)
        if user is None:
            raise HTTPException(401, "missing or unknown token")
        if claimed and claimed != user:
            raise HTTPException(403, f"token belongs to {user!r}, not {claimed!r}")
        return user

    def translate(exc: AnnotationError) -> HTTPException:
        if isinstance(exc, StateConflictError):
            return HTTPException(409, str(exc))
        if "unknown task" in str(exc):
            return HTTPException(404, str(exc))
        if "own proposal" in str(exc):
            return HTTPException(403, str(exc))
        return HTTPException(400, str(exc))

    @app.get("/tasks/next")
    def next_task(request: Request, annotator: str = Query(default="")):
        user = actor(request, annotator)
        task = store.next_open(user)
        if task is None:
            raise HTTPException(404, "no open tasks")
        return {"task": task.view()}

    @app.get("/tasks/{task_id}")
    def get_task(task_id: str):
        try:
            return {"task": store.get(task_id).view()}
        except AnnotationError as exc:
            raise translate(exc) from exc

    @app.post("/tasks/{task_id}/propose")
    def propose(task_id: str, body: ProposeBody, request: Request):
        user = actor(request, body.annotator)
        try:
            return store.propose(task_id, user, body.synonym,
                                 preview=body.preview,
                                 expected_version=body.version)
        except AnnotationError as exc:
            raise translate(exc) from exc

    @app.post("/tasks/{task_id}/withdraw")
    def withdraw(task_id: str, body: ProposeBody, request: Request):
        user = actor(request, body.annotator)
        try:
            return store.withdraw(task_id, user)
        except AnnotationError as exc:
            raise translate(exc) from exc

    @app.post("/tasks/{task_id}/review")
    def review(task_id: str, body: ReviewBody, request: Request):
        user = actor(request, body.reviewer)
        try:
            return store.review(task_id, user, body.verdict, body.note,
                                expected_version=body.version)
        except AnnotationError as exc:
            raise translate(exc) from exc

    @app.get("/export/cds", response_class=PlainTextResponse)
    def export_cds():
        try:
            rows = store.export_cds()
        except AnnotationError as exc:
            raise translate(exc) from exc
        body = "\n".join("\t".join(inst.as_row()) for inst in rows) + "\n"
        return PlainTextResponse(body, media_type="text/tab-separated-values")

    @app.get("/stats")
    def stats():
        return store.stats()

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")

    return app
