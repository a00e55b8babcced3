"""HTTP surface: POST /score and GET /health."""

from __future__ import annotations

import logging
import threading
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .classifier import Classifier, load_classifier
from .config import ServiceConfig

log = logging.getLogger(__name__)


class ScoreBody(BaseModel):
    premise: str
    labels: list[str] = Field(min_length=0)
    multi_label: bool = False


def create_app(config: Optional[ServiceConfig] = None,
               classifier: Optional[Classifier] = None,
               eager_load: bool = True) -> FastAPI:
    """Build the service app.

    A prebuilt classifier can be injected (tests, shared weights). With
    ``eager_load`` the model is loaded at startup and a failure prevents the
    service from starting; until then /health reports ready=false and /score
    returns 503.
    """
    config = config or ServiceConfig.from_env()
    app = FastAPI(title="nli-service", version="1")
    state = {"classifier": classifier}
    load_lock = threading.Lock()

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"error": "malformed_body", "detail": exc.errors()})

    if classifier is None and eager_load:

        @app.on_event("startup")
        def load_model() -> None:
            with load_lock:
                if state["classifier"] is None:
                    log.info("loading model %s", config.model_id)
                    state["classifier"] = load_classifier(config)

    @app.get("/health")
    def health() -> dict:
        clf = state["classifier"]
        return {
            "status": "ok",
            "model": config.model_id,
            "ready": clf is not None,
        }

    @app.post("/score")
    def score(body: ScoreBody):
        clf = state["classifier"]
        if clf is None:
            return JSONResponse(status_code=503,
                                content={"error": "model_not_ready"})
        if not body.premise.strip():
            return JSONResponse(status_code=400,
                                content={"error": "blank_premise"})
        if not body.labels:
            return JSONResponse(status_code=400,
                                content={"error": "empty_labels"})
        if any(not label.strip() for label in body.labels):
            return JSONResponse(status_code=400,
                                content={"error": "blank_label"})
        if len(set(body.labels)) != len(body.labels):
            return JSONResponse(status_code=400,
                                content={"error": "duplicate_labels"})
        if len(body.labels) > config.max_labels:
            return JSONResponse(
                status_code=413,
                content={"error": "too_many_labels", "limit": config.max_labels},
            )
        scores = clf.classify(body.premise, body.labels, body.multi_label)
        return {"scores": scores}

    return app
