"""Named experiments and CSV persistence.

Each experiment expands into a deterministic list of sweep points; every
point is simulated independently (common random numbers across methods, so
method comparisons at a point share channel draws) and flattened into
self-describing result rows.  Failures at one point surface in the row's
error column instead of aborting the sweep.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import InvalidSpec, McMimoError
from .model import (
    GainTensor,
    PilotBook,
    ScenarioSpec,
    SystemConfig,
    build_scenario,
    linear_to_db,
)
from .precoding import METHOD_GPS, METHOD_MCMMSE, METHOD_ZF, METHODS
from .rates import asymptotic_rate, closed_form_rate, monte_carlo_rates

__all__ = [
    "ExperimentSpec",
    "ResultRow",
    "run_experiment",
    "write_results",
    "read_results",
    "EXPERIMENT_NAMES",
    "CSV_HEADER",
    "METHOD_CLOSED_FORM",
]

EXPERIMENT_NAMES = ("theorem1_verify", "fig3_sweep", "fig4_msweep", "asymptote_demo")
METHOD_CLOSED_FORM = "CLOSED_FORM"

CSV_HEADER = (
    "experiment", "method", "a", "b", "M", "K", "L", "tau", "p_f_db", "p_r_db",
    "gamma", "seed", "trials", "cell", "user", "rate", "stderr", "min_rate",
    "closed_form", "error",
)

_INT_COLUMNS = {"M", "K", "L", "tau", "seed", "trials", "cell", "user"}
_FLOAT_COLUMNS = {"a", "b", "p_f_db", "p_r_db", "gamma", "rate", "stderr", "min_rate", "closed_form"}


@dataclass(frozen=True)
class ExperimentSpec:
    """A named experiment: scenario template, system config, sweep axes."""

    name: str
    scenario: ScenarioSpec
    config: SystemConfig
    a_values: tuple[float, ...] = ()
    b_values: tuple[float, ...] = ()
    m_values: tuple[int, ...] = ()
    n_trials: int = 100_000
    methods: tuple[str, ...] = ()
    out_path: str | None = None


@dataclass(frozen=True)
class ResultRow:
    """One (sweep point, method, user) result; self-describing for re-plotting."""

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
    cell: int | None = None  # 1-based
    user: int | None = None  # 1-based
    rate: float | None = None
    stderr: float | None = None
    min_rate: float | None = None
    closed_form: float | None = None
    error: str | None = None


_DEFAULT_METHODS = {
    "theorem1_verify": (METHOD_ZF,),
    "fig3_sweep": (METHOD_ZF, METHOD_MCMMSE),
    "fig4_msweep": (METHOD_GPS, METHOD_MCMMSE),
    "asymptote_demo": (METHOD_CLOSED_FORM,),
}


def _validate(spec: ExperimentSpec) -> tuple[str, ...]:
    if spec.name not in EXPERIMENT_NAMES:
        raise InvalidSpec(f"unknown experiment {spec.name!r}; expected one of {EXPERIMENT_NAMES}")
    if spec.name == "fig3_sweep":
        if not spec.a_values or not spec.b_values:
            raise InvalidSpec("fig3_sweep needs non-empty a_values and b_values")
    elif not spec.m_values:
        raise InvalidSpec(f"{spec.name} needs a non-empty m_values axis")
    if spec.name in ("theorem1_verify", "asymptote_demo"):
        if spec.config.K != 1:
            raise InvalidSpec(f"{spec.name} requires K=1 (closed form), got K={spec.config.K}")
        reuse = spec.scenario.pilot_reuse_map
        if reuse and max(reuse) != 0:
            raise InvalidSpec(f"{spec.name} requires one shared pilot pool across all cells")
    if spec.n_trials < 2 and spec.name != "asymptote_demo":
        raise InvalidSpec("n_trials must be at least 2")
    methods = spec.methods or _DEFAULT_METHODS[spec.name]
    allowed = METHODS + (METHOD_CLOSED_FORM,)
    for m in methods:
        if m not in allowed:
            raise InvalidSpec(f"unknown method {m!r}")
    return tuple(methods)


def _points(spec: ExperimentSpec) -> list[tuple[float, float, int]]:
    """Sweep points as (a, b, M) tuples, in deterministic order."""
    a0, b0 = spec.scenario.cross_gain_a, spec.scenario.cross_gain_b
    if spec.name == "fig3_sweep":
        return [(a, b, spec.config.M) for a in spec.a_values for b in spec.b_values]
    return [(a0, b0, m) for m in spec.m_values]


def _context(spec: ExperimentSpec, method: str, a: float, b: float, m: int) -> dict:
    cfg = spec.config
    return dict(
        experiment=spec.name, method=method, a=a, b=b, M=m, K=cfg.K, L=cfg.L,
        tau=cfg.tau, p_f_db=linear_to_db(cfg.p_f), p_r_db=linear_to_db(cfg.p_r),
        gamma=cfg.gamma, seed=cfg.seed, trials=spec.n_trials,
    )


def _run_point(spec: ExperimentSpec, methods: tuple[str, ...], a: float, b: float, m: int) -> list[ResultRow]:
    rows: list[ResultRow] = []
    for method in methods:
        ctx = _context(spec, method, a, b, m)
        try:
            cfg = replace(spec.config, M=m)
            scenario = replace(spec.scenario, cross_gain_a=a, cross_gain_b=b)
            betas, pilots = build_scenario(scenario, cfg)
            if method == METHOD_CLOSED_FORM:
                rows.extend(_closed_form_rows(ctx, betas, cfg))
            else:
                rows.extend(_monte_carlo_rows(spec, ctx, betas, pilots, cfg, method))
        except (McMimoError, ValueError) as exc:
            rows.append(ResultRow(**ctx, error=str(exc)))
    return rows


def _closed_form_rows(ctx: dict, betas: GainTensor, cfg: SystemConfig) -> list[ResultRow]:
    rates = [closed_form_rate(betas, cfg, j) for j in range(cfg.L)]
    limits = [asymptotic_rate(betas, cfg, j) for j in range(cfg.L)]
    min_rate = min(rates)
    return [
        ResultRow(**ctx, cell=j + 1, user=1, rate=rates[j], min_rate=min_rate, closed_form=limits[j])
        for j in range(cfg.L)
    ]


def _monte_carlo_rows(spec, ctx, betas, pilots, cfg, method) -> list[ResultRow]:
    report = monte_carlo_rates(cfg, betas, pilots, method, spec.n_trials)
    reference = None
    if spec.name == "theorem1_verify":
        reference = [closed_form_rate(betas, cfg, j) for j in range(cfg.L)]
    rows = []
    for j in range(cfg.L):
        for k in range(cfg.K):
            rows.append(ResultRow(
                **ctx, cell=j + 1, user=k + 1,
                rate=float(report.rates[j, k]),
                stderr=float(report.rate_stderr[j, k]),
                min_rate=report.min_rate,
                closed_form=None if reference is None else reference[j],
            ))
    return rows


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> list[ResultRow]:
    """Run every sweep point x method and return rows in deterministic order."""
    methods = _validate(spec)
    points = _points(spec)
    if workers <= 1:
        batches = [_run_point(spec, methods, *pt) for pt in points]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_point, spec, methods, *pt) for pt in points]
            batches = [f.result() for f in futures]  # original sweep order
    return [row for batch in batches for row in batch]


# -- CSV persistence -----------------------------------------------------------


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def write_results(rows: list[ResultRow], path: str | Path) -> None:
    """Write rows as UTF-8 CSV with the fixed documented header."""
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in rows:
                writer.writerow([_format(getattr(row, col)) for col in CSV_HEADER])
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def read_results(path: str | Path) -> list[ResultRow]:
    """Parse a results CSV back into rows (inverse of :func:`write_results`)."""
    rows = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != list(CSV_HEADER):
            raise ValueError(f"unexpected CSV header in {path}: {reader.fieldnames}")
        for rec in reader:
            kwargs = {}
            for col, raw in rec.items():
                if raw == "":
                    kwargs[col] = None
                elif col in _INT_COLUMNS:
                    kwargs[col] = int(raw)
                elif col in _FLOAT_COLUMNS:
                    kwargs[col] = float(raw)
                else:
                    kwargs[col] = raw
            rows.append(ResultRow(**kwargs))
    return rows
