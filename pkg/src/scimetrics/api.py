"""HTTP service over one immutable corpus snapshot.

Every endpoint delegates to the library and serializes through the shared
formatter, so a response body always matches the equivalent CLI output
byte for byte. State is a single SessionState reference on the app; a
reload builds a complete replacement and swaps that one reference, so
requests see either the old snapshot or the new one, never a mixture.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .battery import MetricMatrix, build_metric_matrix
from .corpus import Corpus
from .errors import (
    DegenerateInputError,
    InsufficientDataError,
    UnknownIdError,
)
from .reports import fit_for, parse_weights, rank_for, summary_payload
from .serialize import json_dumps
from .validation import (
    RegressionModel,
    constrained_refit,
    download_citation_correlator,
    factor_analysis,
)

DEFAULT_LISTEN = "127.0.0.1:8080"


@dataclass
class SessionState:
    """One loaded corpus plus caches derived from it.

    The matrix cache fills on first use per (discipline, level, metrics);
    the lock guards only cache insertion, never the snapshot itself.
    """

    corpus: Corpus
    matrices: dict = field(default_factory=dict)
    last_fit: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def matrix(self, discipline: str, level: str = "unit",
               metric_names=None) -> MetricMatrix:
        key = (discipline, level, metric_names)
        with self._lock:
            cached = self.matrices.get(key)
        if cached is not None:
            return cached
        built = build_metric_matrix(
            self.corpus, discipline, level=level,
            metric_names=list(metric_names) if metric_names else None)
        with self._lock:
            self.matrices[key] = built
        return built

    def record_fit(self, discipline: str, model: RegressionModel) -> None:
        with self._lock:
            self.last_fit[discipline] = model


class FitRequest(BaseModel):
    discipline: str
    metrics: list[str] | None = None
    ridge_lambda: float | None = None


class CalibrateRequest(BaseModel):
    discipline: str
    constraints: dict[str, float] = {}
    metrics: list[str] | None = None
    ridge_lambda: float | None = None


def set_session(app: FastAPI, corpus: Corpus | None) -> None:
    """Atomically swap the served snapshot (None unloads it)."""
    app.state.session = None if corpus is None else SessionState(corpus)


def _json(payload) -> Response:
    return Response(content=json_dumps(payload), media_type="application/json")


def create_app(corpus: Corpus | None = None, static_dir=None) -> FastAPI:
    app = FastAPI(title="scimetrics", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])
    set_session(app, corpus)

    def session(request: Request) -> SessionState:
        state = request.app.state.session
        if state is None:
            raise HTTPException(503, "no corpus loaded")
        return state

    def load_matrix(state: SessionState, discipline: str,
                    level: str = "unit", names=None) -> MetricMatrix:
        try:
            return state.matrix(discipline, level=level, metric_names=names)
        except UnknownIdError as exc:
            # a bad metric name is a caller mistake, a bad discipline is
            # a missing resource
            code = 400 if "metric" in str(exc) else 404
            raise HTTPException(code, str(exc)) from None
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from None
        except DegenerateInputError as exc:
            raise HTTPException(422, str(exc)) from None

    def fitted(state: SessionState, discipline: str, metrics, ridge):
        matrix = load_matrix(
            state, discipline, names=tuple(metrics) if metrics else None)
        try:
            _, model = fit_for(state.corpus, discipline,
                               ridge_lambda=ridge, matrix=matrix)
        except UnknownIdError as exc:
            raise HTTPException(404, str(exc)) from None
        except (InsufficientDataError, DegenerateInputError) as exc:
            raise HTTPException(422, str(exc)) from None
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from None
        state.record_fit(discipline, model)
        return matrix, model

    @app.get("/api/summary")
    def summary(request: Request):
        return _json(summary_payload(session(request).corpus))

    @app.get("/api/metrics")
    def metrics(request: Request, discipline: str, level: str = "unit",
                metrics: str | None = None):
        state = session(request)
        names = tuple(metrics.split(",")) if metrics else None
        return _json(load_matrix(state, discipline, level=level, names=names))

    @app.post("/api/fit")
    def fit(request: Request, body: FitRequest):
        state = session(request)
        _, model = fitted(state, body.discipline, body.metrics,
                          body.ridge_lambda)
        return _json(model)

    @app.post("/api/calibrate")
    def calibrate(request: Request, body: CalibrateRequest):
        state = session(request)
        matrix, model = fitted(state, body.discipline, body.metrics,
                               body.ridge_lambda)
        if not body.constraints:
            return _json(model)
        try:
            refit = constrained_refit(
                model, matrix, state.corpus.criteria[body.discipline],
                body.constraints)
        except UnknownIdError as exc:
            raise HTTPException(400, str(exc)) from None
        return _json(refit)

    @app.get("/api/rank")
    def rank(request: Request, discipline: str, weights: str):
        state = session(request)
        try:
            vector = parse_weights(weights)
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from None
        matrix = load_matrix(state, discipline)
        try:
            result = rank_for(state.corpus, discipline, vector, matrix=matrix)
        except UnknownIdError as exc:
            raise HTTPException(400, str(exc)) from None
        return _json(result)

    @app.get("/api/correlator")
    def correlator(request: Request, dl_from: float = 0.0, dl_to: float = 6.0,
                   cit_from: float = 12.0, cit_to: float | None = None):
        state = session(request)
        try:
            result = download_citation_correlator(
                state.corpus, dl_window=(dl_from, dl_to),
                cit_window=(cit_from, cit_to))
        except DegenerateInputError as exc:
            # the only degenerate case here is a bad window, which is the
            # caller's query, not the corpus
            raise HTTPException(400, str(exc)) from None
        except InsufficientDataError as exc:
            raise HTTPException(422, str(exc)) from None
        return _json(result)

    @app.get("/api/factor")
    def factor(request: Request, discipline: str, metrics: str | None = None):
        state = session(request)
        names = tuple(metrics.split(",")) if metrics else None
        matrix = load_matrix(state, discipline, names=names)
        try:
            result = factor_analysis(matrix)
        except (InsufficientDataError, DegenerateInputError) as exc:
            raise HTTPException(422, str(exc)) from None
        return _json(result)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="ui")

    return app
