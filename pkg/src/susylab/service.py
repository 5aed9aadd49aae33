"""FastAPI service exposing the laboratory operations.

Every command endpoint returns a ReportEnvelope: the full report dict plus
the exit code a batch caller should propagate (0 all verdicts true, 1 a
verdict failed, 3 a numerical phase failed). Configuration problems are
HTTP 400/422; they map to exit code 2 on the client side.
"""
from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .eigensolve import DEFAULT_SEED
from .errors import ConfigurationError, SusyLabError
from .scenarios import (
    BUILTIN_SCENARIOS,
    ScenarioConfig,
    builtin_config,
    exit_code_for,
    run_deform,
    run_gozzi,
    run_partners,
    run_scenario,
    run_spectrum,
    run_winding,
)


class ReportEnvelope(BaseModel):
    report: dict
    exit_code: int


class PartnersRequest(BaseModel):
    config: ScenarioConfig
    include_curves: bool = True


class SpectrumRequest(BaseModel):
    config: ScenarioConfig
    seed: int = DEFAULT_SEED
    include_curves: bool = False


class GozziRequest(BaseModel):
    config: ScenarioConfig
    seed: int = DEFAULT_SEED


class DeformRequest(BaseModel):
    config: ScenarioConfig
    seed: int = DEFAULT_SEED
    include_curves: bool = False


class WindingRequest(BaseModel):
    omega: float = Field(default=2.0, gt=0)
    n_max: int = Field(default=8, ge=0, le=16)


class ScenarioRunRequest(BaseModel):
    scenario_id: Optional[str] = None
    config: Optional[ScenarioConfig] = None
    seed: int = DEFAULT_SEED
    include_curves: bool = False
    tol_solver: Optional[float] = Field(default=None, gt=0)


class RunAllRequest(BaseModel):
    seed: int = DEFAULT_SEED
    include_curves: bool = False


class ScenarioListResponse(BaseModel):
    scenarios: list[str]


def _envelope(report: dict) -> ReportEnvelope:
    return ReportEnvelope(report=report, exit_code=exit_code_for(report))


def create_app() -> FastAPI:
    app = FastAPI(
        title="susylab",
        version=__version__,
        description="Partner-potential spectra, node-count criteria, "
                    "logarithmic-derivative residuals, winding integrals and "
                    "isospectral deformation as a service.",
    )

    @app.exception_handler(ConfigurationError)
    async def _config_error(request: Request, exc: ConfigurationError):
        return JSONResponse(status_code=400, content={"detail": str(exc), "kind": "configuration"})

    @app.exception_handler(SusyLabError)
    async def _numerical_error(request: Request, exc: SusyLabError):
        return JSONResponse(status_code=500, content={"detail": str(exc), "kind": "numerical"})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/scenarios", response_model=ScenarioListResponse)
    def scenarios() -> ScenarioListResponse:
        return ScenarioListResponse(scenarios=sorted(BUILTIN_SCENARIOS))

    @app.post("/partners", response_model=ReportEnvelope)
    def partners(req: PartnersRequest) -> ReportEnvelope:
        return _envelope(run_partners(req.config, include_curves=req.include_curves))

    @app.post("/spectrum", response_model=ReportEnvelope)
    def spectrum(req: SpectrumRequest) -> ReportEnvelope:
        return _envelope(run_spectrum(req.config, seed=req.seed,
                                      include_curves=req.include_curves))

    @app.post("/gozzi", response_model=ReportEnvelope)
    def gozzi(req: GozziRequest) -> ReportEnvelope:
        return _envelope(run_gozzi(req.config, seed=req.seed))

    @app.post("/deform", response_model=ReportEnvelope)
    def deform(req: DeformRequest) -> ReportEnvelope:
        return _envelope(run_deform(req.config, seed=req.seed,
                                    include_curves=req.include_curves))

    @app.post("/winding", response_model=ReportEnvelope)
    def winding(req: WindingRequest) -> ReportEnvelope:
        return _envelope(run_winding(omega=req.omega, n_max=req.n_max))

    @app.post("/scenario/run", response_model=ReportEnvelope)
    def scenario_run(req: ScenarioRunRequest) -> ReportEnvelope:
        if (req.scenario_id is None) == (req.config is None):
            raise ConfigurationError("provide exactly one of scenario_id or config")
        config = req.config if req.config is not None else builtin_config(req.scenario_id)
        if req.tol_solver is not None:
            config.tolerances.solver = req.tol_solver
        return _envelope(run_scenario(config, seed=req.seed,
                                      include_curves=req.include_curves))

    @app.post("/scenario/run-all", response_model=list[ReportEnvelope])
    def scenario_run_all(req: RunAllRequest) -> list[ReportEnvelope]:
        return [
            _envelope(run_scenario(builtin_config(sid), seed=req.seed,
                                   include_curves=req.include_curves))
            for sid in sorted(BUILTIN_SCENARIOS)
        ]

    return app


app = create_app()
