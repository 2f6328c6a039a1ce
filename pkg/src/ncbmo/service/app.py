"""FastAPI application exposing the library over HTTP."""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..harness.config import ConfigError
from . import handlers, schemas


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def create_app() -> FastAPI:
    app = FastAPI(title="ncbmo", version=__version__)

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/config/default")
    def default_config():
        return handlers.handle_default_config()

    @app.post("/verify", response_model=schemas.VerifyResponse)
    def verify(req: schemas.VerifyRequest):
        return handlers.handle_verify(req.seed)

    @app.post("/bench/{name}", response_model=schemas.BenchResponse,
              response_model_by_alias=True)
    def bench(name: str, req: schemas.BenchRequest):
        try:
            return handlers.handle_bench(name, req.config)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except (ConfigError, ValueError) as exc:
            raise _bad_request(exc) from None

    @app.post("/dilation", response_model=schemas.BenchResponse,
              response_model_by_alias=True)
    def dilation(req: schemas.BenchRequest):
        try:
            return handlers.handle_dilation(req.config)
        except (ConfigError, ValueError) as exc:
            raise _bad_request(exc) from None

    @app.post("/ops/eig", response_model=schemas.EigResponse)
    def ops_eig(req: schemas.EigRequest):
        try:
            return handlers.handle_eig(req.model_dump())
        except (ConfigError, ValueError) as exc:
            raise _bad_request(exc) from None

    @app.post("/ops/markov-defects", response_model=schemas.ReportResponse)
    def ops_markov(req: schemas.MarkovRequest):
        try:
            return handlers.handle_markov(req.model_dump())
        except (ConfigError, ValueError) as exc:
            raise _bad_request(exc) from None

    @app.post("/ops/bmo-report", response_model=schemas.ReportResponse)
    def ops_bmo(req: schemas.BmoReportRequest):
        try:
            return handlers.handle_bmo_report(req.model_dump())
        except (ConfigError, ValueError) as exc:
            raise _bad_request(exc) from None

    return app


app = create_app()
