"""Command-line client for the simulation service.

One subcommand per experiment.  By default the experiment runs in-process
through the same request/response models the HTTP service uses; pass
``--server URL`` to submit it to a running service instead.  Results land in
a CSV file whose schema is documented in the README.
"""

from __future__ import annotations

import argparse
import sys

import httpx

from .experiments import EXPERIMENT_NAMES, ResultRow, write_results
from .model import load_config_file
from .service.schemas import ExperimentRequest, SystemConfigModel

_EXPERIMENT_HELP = {
    "theorem1_verify": "Monte Carlo vs closed-form rate, single-user shared-pilot ZF, swept over M",
    "fig3_sweep": "min-rate over a cross-gain (a, b) grid, ZF vs multi-cell MMSE",
    "fig4_msweep": "min-rate over antenna counts, GPS vs multi-cell MMSE",
    "asymptote_demo": "closed-form rate saturation in M against its large-M limit",
}


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcmimo",
        description="Multi-cell TDD MIMO simulator: training, precoding, achievable rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENT_NAMES:
        sp = sub.add_parser(name, help=_EXPERIMENT_HELP[name])
        sp.add_argument("--config", help="key=value scenario file (keys: L K M tau p_f_db p_r_db gamma a b seed trials)")
        sp.add_argument("--out", default=f"{name}.csv", help="output CSV path (default: %(default)s)")
        sp.add_argument("--seed", type=int, help="override master seed")
        sp.add_argument("--trials", type=int, help="override Monte Carlo trial count")
        sp.add_argument("--a", type=float, help="override partner-cell cross gain")
        sp.add_argument("--b", type=float, help="override far-cell cross gain")
        sp.add_argument("--a-values", type=_float_list, help="comma-separated a sweep grid")
        sp.add_argument("--b-values", type=_float_list, help="comma-separated b sweep grid")
        sp.add_argument("--m-values", type=_int_list, help="comma-separated antenna-count sweep")
        sp.add_argument("--methods", help="comma-separated precoder subset (ZF,GPS,MCMMSE)")
        sp.add_argument("--workers", type=int, default=1, help="sweep-point worker threads")
        sp.add_argument("--server", help="base URL of a running service (default: run in-process)")
    sp = sub.add_parser("serve", help="launch the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    return parser


def build_request(args: argparse.Namespace) -> ExperimentRequest:
    file_vals = load_config_file(args.config) if args.config else {}
    cfg = SystemConfigModel(
        L=file_vals.get("L"), K=file_vals.get("K"), M=file_vals.get("M"),
        tau=file_vals.get("tau"), p_f_db=file_vals.get("p_f_db"),
        p_r_db=file_vals.get("p_r_db"), gamma=file_vals.get("gamma"),
        seed=args.seed if args.seed is not None else file_vals.get("seed"),
    )
    return ExperimentRequest(
        name=args.command,
        config=cfg,
        a=args.a if args.a is not None else file_vals.get("a"),
        b=args.b if args.b is not None else file_vals.get("b"),
        a_values=args.a_values,
        b_values=args.b_values,
        m_values=args.m_values,
        trials=args.trials if args.trials is not None else file_vals.get("trials"),
        methods=args.methods.split(",") if args.methods else None,
        workers=args.workers,
    )


def run_request(request: ExperimentRequest, server: str | None) -> list[ResultRow]:
    if server is None:
        from .service.app import execute

        return execute(request)
    url = server.rstrip("/") + "/experiments/run"
    timeout = httpx.Timeout(10.0, read=None)  # sweeps can take minutes
    resp = httpx.post(url, json=request.model_dump(), timeout=timeout)
    if resp.status_code >= 400:
        detail = resp.json().get("detail", resp.text) if resp.headers.get("content-type", "").startswith("application/json") else resp.text
        raise SystemExit(f"server rejected the experiment ({resp.status_code}): {detail}")
    return [ResultRow(**row) for row in resp.json()["rows"]]


def _print_summary(rows: list[ResultRow]) -> None:
    seen = set()
    for row in rows:
        key = (row.a, row.b, row.M, row.method)
        if key in seen:
            continue
        seen.add(key)
        if row.error is not None:
            print(f"  {row.method:12s} a={row.a:g} b={row.b:g} M={row.M}: ERROR {row.error}", file=sys.stderr)
        else:
            print(f"  {row.method:12s} a={row.a:g} b={row.b:g} M={row.M}: min_rate={row.min_rate:.4f}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("mcmimo.service.app:app", host=args.host, port=args.port)
        return 0
    request = build_request(args)
    rows = run_request(request, args.server)
    _print_summary(rows)
    write_results(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
