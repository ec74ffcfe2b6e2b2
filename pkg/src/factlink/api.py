"""REST surface of the annotation service.

All bodies are UTF-8 JSON. Validation failures return 400, duplicate or
out-of-order submissions 409; the UI consumes exactly these endpoints.
"""
from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .annotation import (
    AnnPresence,
    AnnStance,
    Annotation,
    AnnotationService,
    DuplicateAnnotationError,
    NotAssignedError,
    PairClosedError,
    UnknownAnnotatorError,
    UnknownPairError,
    ValidationError,
)
from .store import encode_record


def create_app(service: AnnotationService, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="factlink annotation service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.service = service

    @app.get("/api/pairs/next")
    def next_pair(annotator: str = Query(...)):
        try:
            assignment = service.next_pair(annotator)
        except UnknownAnnotatorError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        if assignment is None:
            return Response(status_code=204)
        return {
            "pair_id": assignment.pair_id,
            "claim": {
                "id": assignment.claim.id,
                "statement": assignment.claim.statement,
            },
            "article": {
                "id": assignment.article.id,
                "title": assignment.article.title,
                "body": assignment.article.body,
            },
            "highlights": [
                {"sentence": h.sentence, "start": h.start, "end": h.end}
                for h in assignment.highlights
            ],
        }

    @app.post("/api/annotations")
    async def submit(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        if not isinstance(body, dict):
            return JSONResponse({"error": "body must be a JSON object"}, status_code=400)
        try:
            pair_id = str(body["pair_id"])
            annotator = str(body["annotator"])
            presence = AnnPresence(body["presence"])
            stance_raw = body.get("stance")
            stance = AnnStance(stance_raw) if stance_raw is not None else None
        except KeyError as exc:
            return JSONResponse({"error": f"missing field {exc.args[0]!r}"}, status_code=400)
        except ValueError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        try:
            annotation = Annotation(
                pair_id=pair_id, annotator_id=annotator, presence=presence, stance=stance
            )
            state = service.submit(annotation)
        except ValidationError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except (DuplicateAnnotationError, NotAssignedError, PairClosedError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=409)
        except (UnknownAnnotatorError, UnknownPairError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        return JSONResponse({"pair_status": state.status.value}, status_code=201)

    @app.get("/api/pairs/{pair_id}")
    def pair_state(pair_id: str):
        try:
            pair = service.get_pair(pair_id)
        except UnknownPairError as exc:
            return JSONResponse({"error": str(exc)}, status_code=404)
        return {
            "pair_id": pair.pair_id,
            "article_id": pair.article_id,
            "claim_id": pair.claim_id,
            "status": pair.status.value,
            "annotations": [
                {
                    "annotator": a.annotator_id,
                    "presence": a.presence.value,
                    "stance": a.stance.value if a.stance else None,
                    "submitted_at": a.submitted_at,
                }
                for a in pair.annotations
            ],
            "result": (
                {
                    "presence": pair.result.presence.value,
                    "stance": pair.result.stance.value if pair.result.stance else None,
                }
                if pair.result
                else None
            ),
        }

    @app.get("/api/export/labels")
    def export_labels():
        return [encode_record(label) for label in service.export_labels()]

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
