"""HTTP API: data upload, index rebuild, recommendations and evaluation jobs."""

from __future__ import annotations

import os

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response

from ..ingestion import ParseError, load_jsonl
from ..jsonfmt import recommendations_to_json
from ..model import MARKETPLACE_KINDS, SOCIAL_KINDS, AlgorithmId, DatasetError
from .engine import Engine, EngineEmpty, EvaluationRunning, RebuildInProgress, UnknownUser
from .schemas import Accepted, EvaluationRequest, Health, JobCreated, JobPending, Version

DEFAULT_ADDR = "127.0.0.1:8080"
VERSION_HEADER = "X-Snapshot-Version"


def create_app(engine: Engine = None) -> FastAPI:
    engine = engine or Engine()
    app = FastAPI(title="socrec", version="0.1.0")
    app.state.engine = engine

    @app.exception_handler(RequestValidationError)
    async def bad_request(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc.errors())})

    @app.exception_handler(EngineEmpty)
    async def engine_empty(request, exc):
        return JSONResponse(status_code=503, content={"detail": str(exc)})

    @app.get("/health", response_model=Health)
    def health():
        return Health(version=engine.version)

    async def _upload(request: Request, stream: str, kinds) -> Accepted:
        body = await request.body()
        try:
            records = load_jsonl(body, kinds)
        except ParseError as exc:
            raise HTTPException(400, str(exc))
        return Accepted(accepted=engine.stage(stream, records))

    @app.post("/data/marketplace", status_code=202, response_model=Accepted)
    async def upload_marketplace(request: Request):
        return await _upload(request, "marketplace", MARKETPLACE_KINDS)

    @app.post("/data/social", status_code=202, response_model=Accepted)
    async def upload_social(request: Request):
        return await _upload(request, "social", SOCIAL_KINDS)

    @app.post("/index/rebuild", response_model=Version)
    def rebuild():
        try:
            return Version(version=engine.rebuild())
        except RebuildInProgress as exc:
            raise HTTPException(409, str(exc))
        except DatasetError as exc:
            raise HTTPException(422, str(exc))

    @app.get("/recommend/{algorithm}/{user_id}")
    def get_recommendations(algorithm: str, user_id: str, k: int = 10):
        try:
            alg = AlgorithmId.parse(algorithm)
        except ValueError as exc:
            raise HTTPException(404, str(exc))
        if k < 1:
            raise HTTPException(400, "k must be >= 1")
        try:
            version, recs = engine.recommend(alg, user_id, k)
        except UnknownUser:
            raise HTTPException(404, f"unknown user {user_id!r}")
        return Response(recommendations_to_json(recs), media_type="application/json",
                        headers={VERSION_HEADER: str(version)})

    @app.post("/evaluation/run", status_code=202, response_model=JobCreated)
    def run_evaluation(body: EvaluationRequest):
        try:
            algorithms = [AlgorithmId.parse(a) for a in body.algorithms or [a.value for a in AlgorithmId]]
        except ValueError as exc:
            raise HTTPException(400, str(exc))
        try:
            job_id = engine.start_evaluation(algorithms, body.k, body.seed, body.measure_runtime)
        except EvaluationRunning as exc:
            raise HTTPException(409, str(exc))
        return JobCreated(jobId=job_id)

    @app.get("/evaluation/report/{job_id}")
    def evaluation_report(job_id: str):
        try:
            job = engine.job(job_id)
        except KeyError:
            raise HTTPException(404, f"unknown job {job_id!r}")
        if job.status == "pending":
            return JSONResponse(status_code=202, content=JobPending(jobId=job.id).model_dump())
        if job.status == "failed":
            raise HTTPException(500, job.error)
        return Response(job.report_json, media_type="application/json",
                        headers={VERSION_HEADER: str(job.version)})

    return app


def parse_addr(addr: str):
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"address must look like HOST:PORT, got {addr!r}")
    return host, int(port)


def serve(addr: str = None):
    import uvicorn

    host, port = parse_addr(addr or os.environ.get("SOCREC_ADDR", DEFAULT_ADDR))
    uvicorn.run(create_app(), host=host, port=port)
