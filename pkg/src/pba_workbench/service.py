"""HTTP/JSON API over the workbench, versioned under /v1.

All state lives in the document store: every session mutation is persisted
before the response goes out, so a restarted service loses nothing that
was acknowledged. Mutations on one session are serialized; synthesis runs
are read-only over immutable documents and may run concurrently.

Every error body carries a machine-readable ``code`` and a human
``message``; synthesis and what-if responses embed the content hashes of
the exact input documents they were computed from.
"""

from __future__ import annotations

import re
import threading
from collections import defaultdict

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .documents import (
    batch_from_doc,
    class_config_from_doc,
    content_hash,
    prior_from_doc,
    prior_to_doc,
    session_from_doc,
    session_to_doc,
    variables_from_doc,
)
from .elicitation import finalize, next_question, start_session, submit_answers
from .errors import (
    IncoherenceError,
    IncoherentStep,
    InputError,
    SessionClosed,
    UnknownDocument,
    WorkbenchError,
)
from .store import WorkspaceStore
from .workflows import run_synthesis, run_whatif


class VariablesBody(BaseModel):
    names: list[str]
    units: list[str] | None = None
    integral: list[bool] | None = None


class PolicyBody(BaseModel):
    multiplier: float = 0.5


class SessionCreate(BaseModel):
    variables: VariablesBody
    first_prevision: float
    first_variance: float
    policy: PolicyBody = Field(default_factory=PolicyBody)


class AnswersBody(BaseModel):
    conditional_previsions: list[float]
    conditional_variance: float
    prior_prevision: float


class FinalizeBody(BaseModel):
    marginal_variances: list[float]


class SynthesisBody(BaseModel):
    prior_id: str
    class_id: str
    batch_id: str


class WhatIfBody(BaseModel):
    report_id: str
    overrides: dict = Field(default_factory=dict)


def _code(exc: Exception) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", exc.__class__.__name__).lower()


def _prompt_payload(prompt) -> dict:
    return {
        "kind": prompt.kind,
        "variable": prompt.variable,
        "conditioning": [
            {"variable": h.variable, "display": h.display, "exact": h.exact}
            for h in prompt.conditioning
        ],
        "previsions_required": prompt.previsions_required,
        "variance_required": prompt.variance_required,
        "statement": prompt.statement,
    }


def _session_summary(session, session_id: str) -> dict:
    return {
        "session_id": session_id,
        "status": session.status,
        "elicited": session.elicited,
        "total": len(session.variables),
        "variables": list(session.variables.names),
        "u": [[float(v) for v in row] for row in session.u],
        "correlation": [[float(v) for v in row] for row in session.correlation()],
        "hypotheticals": [
            {"variable": h.variable, "display": h.display, "exact": h.exact}
            for h in session.hypotheticals
        ],
        "prior_previsions": [float(v) for v in session.prior_previsions],
    }


def create_app(store: WorkspaceStore) -> FastAPI:
    app = FastAPI(title="pba-workbench", version=__version__)
    # the browser UI is served separately from the API
    from starlette.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
    locks_guard = threading.Lock()

    def session_lock(session_id: str) -> threading.Lock:
        with locks_guard:
            return locks[session_id]

    @app.exception_handler(WorkbenchError)
    async def workbench_error(request: Request, exc: WorkbenchError):
        if isinstance(exc, UnknownDocument):
            status = 404
        elif isinstance(exc, SessionClosed):
            status = 409
        elif isinstance(exc, (InputError, IncoherenceError)):
            status = 422
        else:
            status = 500
        body = {"code": _code(exc), "message": str(exc)}
        if isinstance(exc, IncoherentStep) and exc.margin is not None:
            body["detail"] = {"margin": exc.margin}
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "code": "request_validation",
                "message": "request body failed validation",
                "detail": exc.errors(),
            },
        )

    @app.get("/v1/health")
    def health():
        return {"name": "pba-workbench", "version": __version__}

    # --- elicitation sessions -------------------------------------------------

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: SessionCreate):
        variables = variables_from_doc(body.variables.model_dump())
        session = start_session(
            variables,
            body.first_prevision,
            body.first_variance,
            multiplier=body.policy.multiplier,
        )
        session_id = store.save(session_to_doc(session))
        return {"session_id": session_id}

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        session = session_from_doc(store.load("session", session_id))
        return _session_summary(session, session_id)

    @app.get("/v1/sessions/{session_id}/next")
    def get_next(session_id: str):
        session = session_from_doc(store.load("session", session_id))
        return _prompt_payload(next_question(session))

    @app.post("/v1/sessions/{session_id}/answers")
    def post_answers(session_id: str, body: AnswersBody):
        with session_lock(session_id):
            session = session_from_doc(store.load("session", session_id))
            submit_answers(
                session,
                body.conditional_previsions,
                body.conditional_variance,
                body.prior_prevision,
            )
            store.save(session_to_doc(session, doc_id=session_id), overwrite=True)
        summary = _session_summary(session, session_id)
        summary["last_step"] = {
            "variable": session.answers[-1].variable,
            "g": [float(v) for v in session.g_history[-1]],
            "variance": float(session.u[-1, -1]),
        }
        return summary

    @app.post("/v1/sessions/{session_id}/finalize")
    def post_finalize(session_id: str, body: FinalizeBody):
        with session_lock(session_id):
            session = session_from_doc(store.load("session", session_id))
            spec = finalize(session, body.marginal_variances)
            prior_doc = prior_to_doc(spec)
            prior_id = store.save(prior_doc)
            prior_doc["id"] = prior_id
            store.save(session_to_doc(session, doc_id=session_id), overwrite=True)
        return {
            "prior_id": prior_id,
            "sha256": content_hash(store.load("prior", prior_id)),
            "document": store.load("prior", prior_id),
        }

    # --- documents -------------------------------------------------------------

    @app.post("/v1/priors", status_code=201)
    def post_prior(doc: dict):
        prior_from_doc(doc)  # validate
        doc_id = store.save(doc)
        return {"prior_id": doc_id, "sha256": store.hash_of("prior", doc_id)}

    @app.post("/v1/classes", status_code=201)
    def post_classes(doc: dict):
        class_config_from_doc(doc)  # validate
        doc_id = store.save(doc)
        return {"class_id": doc_id, "sha256": store.hash_of("class_structure", doc_id)}

    @app.post("/v1/batches", status_code=201)
    def post_batch(doc: dict):
        batch_from_doc(doc)  # validate
        doc_id = store.save(doc)
        return {"batch_id": doc_id, "sha256": store.hash_of("batch", doc_id)}

    @app.get("/v1/priors/{doc_id}")
    def get_prior(doc_id: str):
        return store.load("prior", doc_id)

    @app.get("/v1/classes/{doc_id}")
    def get_classes(doc_id: str):
        return store.load("class_structure", doc_id)

    @app.get("/v1/batches/{doc_id}")
    def get_batch(doc_id: str):
        return store.load("batch", doc_id)

    @app.get("/v1/reports/{doc_id}")
    def get_report(doc_id: str):
        return store.load("report", doc_id)

    # --- synthesis ---------------------------------------------------------------

    @app.post("/v1/synthesis")
    def post_synthesis(body: SynthesisBody):
        result = run_synthesis(store, body.prior_id, body.class_id, body.batch_id, persist=True)
        return {
            "report_id": result.report_id,
            "sha256": content_hash(result.doc),
            "document": result.doc,
        }

    @app.post("/v1/whatif")
    def post_whatif(body: WhatIfBody, save: bool = Query(default=False)):
        result = run_whatif(store, body.report_id, body.overrides, save=save)
        return {
            "report_id": result.report_id,
            "document": result.doc,
        }

    return app


def serve(store_root: str, host: str = "127.0.0.1", port: int = 8080) -> None:
    import uvicorn

    uvicorn.run(create_app(WorkspaceStore(store_root)), host=host, port=port, log_level="info")
