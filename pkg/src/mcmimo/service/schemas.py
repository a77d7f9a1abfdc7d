"""Pydantic request/response models for the simulation service.

The wire format quotes powers in dB; conversion to the linear quantities the
simulator works with happens exactly once, in ``ExperimentRequest.to_spec``.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..model import ScenarioSpec, SystemConfig, db_to_linear, paired_reuse_map, shared_reuse_map
from ..experiments import EXPERIMENT_NAMES, ExperimentSpec

ExperimentName = Literal["theorem1_verify", "fig3_sweep", "fig4_msweep", "asymptote_demo"]

# per-experiment defaults for every config-file key plus the sweep axes
EXPERIMENT_DEFAULTS: dict[str, dict] = {
    "theorem1_verify": dict(
        L=2, K=1, M=8, tau=4, p_f_db=20.0, p_r_db=10.0, gamma=1.0,
        a=0.5, b=0.0, seed=12345, trials=100_000, m_values=(1, 4, 8, 32),
    ),
    "fig3_sweep": dict(
        L=4, K=2, M=8, tau=4, p_f_db=20.0, p_r_db=10.0, gamma=1.0,
        a=0.8, b=0.08, seed=12345, trials=100_000,
        a_values=(0.2, 0.4, 0.6, 0.8), b_values=(0.05, 0.1),
    ),
    "fig4_msweep": dict(
        L=4, K=2, M=8, tau=4, p_f_db=20.0, p_r_db=10.0, gamma=1.0,
        a=0.8, b=None,  # None -> b = 0.1 * a
        seed=12345, trials=100_000, m_values=(2, 4, 8, 16),
    ),
    "asymptote_demo": dict(
        L=2, K=1, M=8, tau=4, p_f_db=20.0, p_r_db=10.0, gamma=1.0,
        a=0.5, b=0.0, seed=12345, trials=2,
        m_values=(4, 16, 64, 256, 1024, 4096, 16384, 65536),
    ),
}
assert set(EXPERIMENT_DEFAULTS) == set(EXPERIMENT_NAMES)

# experiments whose closed form requires one pilot pool shared by all cells
_SHARED_PILOT_EXPERIMENTS = ("theorem1_verify", "asymptote_demo")


class SystemConfigModel(BaseModel):
    L: Optional[int] = Field(None, ge=1)
    K: Optional[int] = Field(None, ge=1)
    M: Optional[int] = Field(None, ge=1)
    tau: Optional[int] = Field(None, ge=1)
    p_f_db: Optional[float] = None
    p_r_db: Optional[float] = None
    gamma: Optional[float] = Field(None, ge=0)
    seed: Optional[int] = None


class ExperimentRequest(BaseModel):
    """An experiment to run; unset fields fall back to the preset defaults."""

    name: ExperimentName
    config: SystemConfigModel = SystemConfigModel()
    a: Optional[float] = Field(None, ge=0, le=1)
    b: Optional[float] = Field(None, ge=0, le=1)
    a_values: Optional[list[float]] = None
    b_values: Optional[list[float]] = None
    m_values: Optional[list[int]] = None
    trials: Optional[int] = Field(None, ge=2)
    methods: Optional[list[str]] = None
    workers: int = Field(1, ge=1)

    def to_spec(self) -> ExperimentSpec:
        d = EXPERIMENT_DEFAULTS[self.name]
        pick = lambda v, key: d[key] if v is None else v
        cfg = self.config
        a = pick(self.a, "a")
        b = self.b
        if b is None:
            b = d["b"] if d["b"] is not None else 0.1 * a
        config = SystemConfig(
            L=pick(cfg.L, "L"), K=pick(cfg.K, "K"), M=pick(cfg.M, "M"),
            tau=pick(cfg.tau, "tau"),
            p_f=db_to_linear(pick(cfg.p_f_db, "p_f_db")),
            p_r=db_to_linear(pick(cfg.p_r_db, "p_r_db")),
            gamma=pick(cfg.gamma, "gamma"), seed=pick(cfg.seed, "seed"),
        )
        if self.name in _SHARED_PILOT_EXPERIMENTS:
            reuse = shared_reuse_map(config.L)
        else:
            reuse = paired_reuse_map(config.L)
        scenario = ScenarioSpec(a, b, reuse)
        return ExperimentSpec(
            name=self.name,
            scenario=scenario,
            config=config,
            a_values=tuple(pick(self.a_values, "a_values") if self.name == "fig3_sweep" else (self.a_values or ())),
            b_values=tuple(pick(self.b_values, "b_values") if self.name == "fig3_sweep" else (self.b_values or ())),
            m_values=tuple(self.m_values if self.m_values is not None else d.get("m_values", ())),
            n_trials=pick(self.trials, "trials"),
            methods=tuple(self.methods) if self.methods else (),
        )


class ResultRowModel(BaseModel):
    experiment: str
    method: str
    a: float
    b: float
    M: int
    K: int
    L: int
    tau: int
    p_f_db: float
    p_r_db: float
    gamma: float
    seed: int
    trials: int
    cell: Optional[int] = None
    user: Optional[int] = None
    rate: Optional[float] = None
    stderr: Optional[float] = None
    min_rate: Optional[float] = None
    closed_form: Optional[float] = None
    error: Optional[str] = None


class ExperimentResponse(BaseModel):
    rows: list[ResultRowModel]


class ThetaMomentsResponse(BaseModel):
    m: int
    mean: float
    second_moment: float
    variance: float


class ClosedFormRequest(BaseModel):
    """Single-user shared-pilot closed-form rate query (K = 1 implicitly)."""

    L: int = Field(2, ge=2)
    M: int = Field(8, ge=1)
    tau: int = Field(4, ge=1)
    p_f_db: float = 20.0
    p_r_db: float = 10.0
    a: float = Field(0.5, ge=0, le=1)
    b: float = Field(0.0, ge=0, le=1)


class ClosedFormResponse(BaseModel):
    rates: list[float]
    # None marks an unbounded limit (no interfering cross gain)
    asymptotic: list[Optional[float]]


class HealthResponse(BaseModel):
    status: str
    version: str
