"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class GraphInput(BaseModel):
    """Exactly one of a builtin name or an inline graph document."""

    builtin: Optional[str] = None
    graph: Optional[dict] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.builtin is None) == (self.graph is None):
            raise ValueError("provide exactly one of 'builtin' or 'graph'")
        return self


class ClassifyRequest(GraphInput):
    pass


class TransferRequest(GraphInput):
    pass


class SpectrumRequest(GraphInput):
    mode: str = Field(pattern="^(exact|scan)$")
    qmin: Optional[str] = None
    qmax: Optional[str] = None
    steps: Optional[int] = Field(default=None, ge=1)
    workers: Optional[int] = Field(default=None, ge=1)


class SolveRequest(GraphInput):
    q: str


class TowerRequest(GraphInput):
    q: str
    depth: int = Field(ge=0)
    seed_index: int = Field(default=0, ge=0)
    seed_weights: Optional[Dict[str, str]] = None


class VerifyRequest(GraphInput):
    q: str
    depth: int = Field(ge=0)


class ErrorBody(BaseModel):
    code: str
    message: str


class RunReport(BaseModel):
    command: str
    inputs_digest: str
    results: dict


class BuiltinsResponse(BaseModel):
    builtins: List[str]
