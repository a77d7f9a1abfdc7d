"""FastAPI service wrapping the simulator.

Experiments run synchronously in the request; sweeps with many points can
take minutes, so clients should disable read timeouts.
"""

from __future__ import annotations

import dataclasses
import math

from fastapi import FastAPI, HTTPException, Query

from .. import __version__
from ..errors import McMimoError
from ..experiments import ResultRow, run_experiment
from ..model import ScenarioSpec, SystemConfig, build_scenario, db_to_linear, shared_reuse_map
from ..rates import asymptotic_rate, closed_form_rate, theta_moments
from .schemas import (
    ClosedFormRequest,
    ClosedFormResponse,
    ExperimentRequest,
    ExperimentResponse,
    HealthResponse,
    ResultRowModel,
    ThetaMomentsResponse,
)


def execute(request: ExperimentRequest) -> list[ResultRow]:
    """Resolve defaults and run the experiment (shared by HTTP and local clients)."""
    spec = request.to_spec()
    return run_experiment(spec, workers=request.workers)


def create_app() -> FastAPI:
    app = FastAPI(title="mcmimo", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.get("/theta-moments", response_model=ThetaMomentsResponse)
    def theta(m: int = Query(ge=1)):
        tm = theta_moments(m)
        return ThetaMomentsResponse(m=m, mean=tm.m1, second_moment=tm.m2, variance=tm.var)

    @app.post("/rates/closed-form", response_model=ClosedFormResponse)
    def closed_form(req: ClosedFormRequest):
        config = SystemConfig(
            L=req.L, K=1, M=req.M, tau=req.tau,
            p_f=db_to_linear(req.p_f_db), p_r=db_to_linear(req.p_r_db),
        )
        scenario = ScenarioSpec(req.a, req.b, shared_reuse_map(req.L))
        try:
            betas, _ = build_scenario(scenario, config)
            rates = [closed_form_rate(betas, config, j) for j in range(req.L)]
            limits = [asymptotic_rate(betas, config, j) for j in range(req.L)]
        except (McMimoError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return ClosedFormResponse(
            rates=rates,
            asymptotic=[None if math.isinf(r) else r for r in limits],
        )

    @app.post("/experiments/run", response_model=ExperimentResponse)
    def run(req: ExperimentRequest):
        try:
            rows = execute(req)
        except (McMimoError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return ExperimentResponse(rows=[ResultRowModel(**dataclasses.asdict(r)) for r in rows])

    return app


app = create_app()
