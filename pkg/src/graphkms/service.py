"""FastAPI service exposing the pipeline.

Domain errors surface as HTTP 400/422 with a structured body
{"detail": {"code": ..., "message": ...}}; the CLI maps these codes to
its exit-code contract.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import pipeline
from .builtin_graphs import builtin_names
from .errors import GraphKMSError, SchemaViolation
from .schemas import (
    BuiltinsResponse,
    ClassifyRequest,
    RunReport,
    SolveRequest,
    SpectrumRequest,
    TowerRequest,
    TransferRequest,
    VerifyRequest,
)

app = FastAPI(
    title="graphkms",
    description=(
        "KMS-weight structure of discrete graph algebras: vertex "
        "classification, transfer operator, sub-invariance cones and "
        "boundary measure towers, all in exact rational arithmetic."
    ),
)


def _run(fn) -> dict:
    try:
        return fn()
    except SchemaViolation as exc:
        raise HTTPException(
            status_code=422, detail={"code": "SchemaViolation", "message": str(exc)}
        )
    except GraphKMSError as exc:
        raise HTTPException(
            status_code=400,
            detail={"code": type(exc).__name__, "message": str(exc)},
        )
    except ValueError as exc:
        raise HTTPException(
            status_code=422, detail={"code": "SchemaViolation", "message": str(exc)}
        )


def _graph(req):
    return pipeline.resolve_graph(req.builtin, req.graph)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/builtins", response_model=BuiltinsResponse)
def builtins() -> BuiltinsResponse:
    return BuiltinsResponse(builtins=builtin_names())


@app.post("/classify", response_model=RunReport)
def classify(req: ClassifyRequest) -> dict:
    return _run(lambda: pipeline.run_classify(_graph(req)))


@app.post("/transfer", response_model=RunReport)
def transfer(req: TransferRequest) -> dict:
    return _run(lambda: pipeline.run_transfer(_graph(req)))


@app.post("/spectrum", response_model=RunReport)
def spectrum(req: SpectrumRequest) -> dict:
    return _run(
        lambda: pipeline.run_spectrum(
            _graph(req), req.mode, req.qmin, req.qmax, req.steps, req.workers
        )
    )


@app.post("/solve", response_model=RunReport)
def solve(req: SolveRequest) -> dict:
    return _run(lambda: pipeline.run_solve(_graph(req), req.q))


@app.post("/tower", response_model=RunReport)
def tower(req: TowerRequest) -> dict:
    return _run(
        lambda: pipeline.run_tower(
            _graph(req), req.q, req.depth, req.seed_index, req.seed_weights
        )
    )


@app.post("/verify", response_model=RunReport)
def verify(req: VerifyRequest) -> dict:
    return _run(lambda: pipeline.run_verify(_graph(req), req.q, req.depth))
