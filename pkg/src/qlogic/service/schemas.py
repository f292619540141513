"""Pydantic request/response models for the evaluation service."""

from __future__ import annotations

from pydantic import BaseModel, Field

SCHEMA_VERSION = "1"


class DiagnosticModel(BaseModel):
    severity: str
    message: str
    line: int
    column: int
    phase: str


class QueryResultModel(BaseModel):
    query_text: str
    mode: str
    value: str
    rule: str
    warnings: list[str] = Field(default_factory=list)


class StepModel(BaseModel):
    label: str
    subject: str
    value: str
    rule: str
    warnings: list[str] = Field(default_factory=list)


class ComplementarityModel(BaseModel):
    holds: bool
    vacuous: bool
    detail: str


class ParadoxModel(BaseModel):
    mode: str
    resolution: str
    steps: list[StepModel]
    assignments: list[dict[str, int]]
    paradox: bool
    complementarity: ComplementarityModel
    annotations: list[str]
    surviving: dict[str, str] | None = None
    kolmogorov: str | None = None


class ReportModel(BaseModel):
    schema_version: str = SCHEMA_VERSION
    ok: bool
    queries: list[QueryResultModel] = Field(default_factory=list)
    paradox: ParadoxModel | None = None
    diagnostics: list[DiagnosticModel] = Field(default_factory=list)


class ValidateRequest(BaseModel):
    source: str


class ValidateResponse(BaseModel):
    ok: bool
    diagnostics: list[DiagnosticModel] = Field(default_factory=list)


class EvalRequest(BaseModel):
    source: str
    tolerance: float | None = Field(default=None, gt=0)


class DemoRequest(BaseModel):
    dim_plate: int = 4
    dim_particle: int = 4
    interval: list[int] = Field(default_factory=lambda: [0, 1])
    mode: str = "hilbert_lattice"
    correspondence: bool = False
    kolmogorov: bool = False
    tolerance: float | None = Field(default=None, gt=0)


class LatticeDumpRequest(BaseModel):
    source: str
    context: str
    tolerance: float | None = Field(default=None, gt=0)


class LatticeElementModel(BaseModel):
    atoms: list[int]
    dimension: int
    is_zero: bool
    is_full: bool


class LatticeDumpResponse(BaseModel):
    schema_version: str = SCHEMA_VERSION
    ok: bool
    context: str | None = None
    dim: int | None = None
    atom_count: int | None = None
    elements: list[LatticeElementModel] = Field(default_factory=list)
    diagnostics: list[DiagnosticModel] = Field(default_factory=list)
    error: str | None = None
