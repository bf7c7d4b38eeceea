"""Request and response bodies for the HTTP API."""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class Health(BaseModel):
    status: str = "ok"
    version: int


class Accepted(BaseModel):
    accepted: int


class Version(BaseModel):
    version: int


class EvaluationRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    algorithms: Optional[List[str]] = None
    k: int = Field(10, ge=1)
    seed: int = 0
    measure_runtime: bool = False


class JobCreated(BaseModel):
    jobId: str


class JobPending(BaseModel):
    jobId: str
    status: str = "pending"
