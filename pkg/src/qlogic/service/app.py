"""FastAPI service exposing the valuation engine.

Every endpoint wraps a pure library call, so the service is stateless and
safe for concurrent clients.  Scenario files are submitted as source text;
responses are stable for identical requests.
"""

from __future__ import annotations

from contextlib import nullcontext

from fastapi import FastAPI, HTTPException

from ..dsl import (
    Diagnostic,
    ElaborationResult,
    ParseResult,
    ScenarioProgram,
    elaborate,
    parse,
    run_queries,
)
from ..epr import MODE_COLLECTION, MODE_HILBERT, ParadoxReport, ScenarioConfig, run_pipeline
from ..tolerances import membership_tolerance
from .schemas import (
    SCHEMA_VERSION,
    ComplementarityModel,
    DemoRequest,
    DiagnosticModel,
    EvalRequest,
    LatticeDumpRequest,
    LatticeDumpResponse,
    LatticeElementModel,
    ParadoxModel,
    QueryResultModel,
    ReportModel,
    StepModel,
    ValidateRequest,
    ValidateResponse,
)

app = FastAPI(
    title="qlogic",
    description="Truth-value assignment engine over finite-dimensional quantum logic",
    version="0.1.0",
)


def _tolerance_scope(tolerance: float | None):
    return membership_tolerance(tolerance) if tolerance is not None else nullcontext()


def _diag_model(diag: Diagnostic) -> DiagnosticModel:
    return DiagnosticModel(
        severity=diag.severity,
        message=diag.message,
        line=diag.line,
        column=diag.column,
        phase=diag.phase,
    )


def _check_source(source: str) -> tuple[ParseResult, ElaborationResult | None]:
    parsed = parse(source)
    if not parsed.ok:
        return parsed, None
    return parsed, elaborate(parsed.document)


def _collect_diagnostics(
    parsed: ParseResult, elaborated: ElaborationResult | None
) -> list[DiagnosticModel]:
    diagnostics = [_diag_model(d) for d in parsed.diagnostics]
    if elaborated is not None:
        diagnostics.extend(_diag_model(d) for d in elaborated.diagnostics)
    return diagnostics


def _paradox_model(report: ParadoxReport) -> ParadoxModel:
    payload = report.as_dict()
    return ParadoxModel(
        mode=payload["mode"],
        resolution=payload["resolution"],
        steps=[StepModel(**step) for step in payload["steps"]],
        assignments=payload["assignments"],
        paradox=payload["paradox"],
        complementarity=ComplementarityModel(**payload["complementarity"]),
        annotations=payload["annotations"],
        surviving=payload["surviving"],
        kolmogorov=payload["kolmogorov"],
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "schema_version": SCHEMA_VERSION}


@app.post("/validate", response_model=ValidateResponse)
def validate(request: ValidateRequest) -> ValidateResponse:
    parsed, elaborated = _check_source(request.source)
    diagnostics = _collect_diagnostics(parsed, elaborated)
    ok = parsed.ok and (elaborated is None or elaborated.ok)
    return ValidateResponse(ok=ok, diagnostics=diagnostics)


@app.post("/eval", response_model=ReportModel)
def evaluate(request: EvalRequest) -> ReportModel:
    with _tolerance_scope(request.tolerance):
        parsed, elaborated = _check_source(request.source)
        diagnostics = _collect_diagnostics(parsed, elaborated)
        if not parsed.ok or elaborated is None or not elaborated.ok:
            return ReportModel(ok=False, diagnostics=diagnostics)
        outcomes = run_queries(elaborated.program)
    queries = [
        QueryResultModel(
            query_text=o.text,
            mode=o.mode,
            value=str(o.result.value),
            rule=str(o.result.rule),
            warnings=list(o.result.warnings),
        )
        for o in outcomes
    ]
    return ReportModel(ok=True, queries=queries, diagnostics=diagnostics)


@app.post("/epr-demo", response_model=ReportModel)
def epr_demo(request: DemoRequest) -> ReportModel:
    if request.mode not in (MODE_HILBERT, MODE_COLLECTION):
        raise HTTPException(status_code=422, detail=f"unknown mode {request.mode!r}")
    try:
        config = ScenarioConfig(
            dim_plate=request.dim_plate,
            dim_particle=request.dim_particle,
            interval=tuple(request.interval),
            mode=request.mode,
            correspondence=request.correspondence,
            kolmogorov=request.kolmogorov,
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    with _tolerance_scope(request.tolerance):
        report = run_pipeline(config)
    return ReportModel(ok=True, paradox=_paradox_model(report))


@app.post("/lattice-dump", response_model=LatticeDumpResponse)
def lattice_dump(request: LatticeDumpRequest) -> LatticeDumpResponse:
    with _tolerance_scope(request.tolerance):
        parsed, elaborated = _check_source(request.source)
        diagnostics = _collect_diagnostics(parsed, elaborated)
        if not parsed.ok or elaborated is None or not elaborated.ok:
            return LatticeDumpResponse(ok=False, diagnostics=diagnostics)
        program: ScenarioProgram = elaborated.program
        if request.context not in program.contexts:
            return LatticeDumpResponse(
                ok=False,
                diagnostics=diagnostics,
                error=f"context {request.context!r} is not declared in the file",
            )
        lattice = program.lattice(request.context)
    elements = [
        LatticeElementModel(
            atoms=sorted(el.atom_indices),
            dimension=el.subspace.dim,
            is_zero=el.subspace.is_zero(),
            is_full=el.subspace.is_full(),
        )
        for el in lattice.elements
    ]
    return LatticeDumpResponse(
        ok=True,
        context=request.context,
        dim=lattice.dim,
        atom_count=lattice.k,
        elements=elements,
        diagnostics=diagnostics,
    )
