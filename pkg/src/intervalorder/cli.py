"""Command-line client for the stochastic-order test service.

The CLI reads interval CSV files, builds the same request models the HTTP
API accepts, and by default executes the service handlers in-process; with
``--server URL`` it sends the request to a running service instead. All
tests are one-sided and argument order matters: the FIRST file is the
baseline sample X, the SECOND is the sample Y hypothesized to be
stochastically greater.

Exit codes: 0 computed, 2 usage error, 3 I/O error, 4 parse/validation
error, 5 degenerate statistic.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import pydantic

from . import __version__, csvio, schemas
from .service import ServiceError, run_describe, run_simulate, run_test
from .simulation import STUDY_CORRELATIONS, STUDY_DELTAS, STUDY_SIZES

__all__ = ["main"]

_EXIT_OK = 0
_EXIT_USAGE = 2
_EXIT_IO = 3
_EXIT_PARSE = 4
_EXIT_DEGENERATE = 5

_KIND_TO_EXIT = {
    "usage": _EXIT_USAGE,
    "io": _EXIT_IO,
    "parse": _EXIT_PARSE,
    "degenerate": _EXIT_DEGENERATE,
    "internal": 1,
}

_SIM_METHODS = ("u-perm", "u-asym", "b-ks")


class _CliFailure(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


def _read_pairs(path: str) -> list[tuple[float, float]]:
    try:
        return csvio.read_interval_pairs(path)
    except OSError as exc:
        raise _CliFailure(_EXIT_IO, f"cannot read {path}: {exc}") from exc
    except csvio.CsvFormatError as exc:
        raise _CliFailure(_EXIT_PARSE, str(exc)) from exc


def _call(args: argparse.Namespace, endpoint: str, request: pydantic.BaseModel, response_model):
    """Run an operation in-process or against ``--server``."""
    if not args.server:
        handlers = {"test": run_test, "describe": run_describe, "simulate": run_simulate}
        try:
            return handlers[endpoint](request)
        except ServiceError as exc:
            raise _CliFailure(_KIND_TO_EXIT.get(exc.kind, 1), exc.message) from exc
    import httpx

    url = args.server.rstrip("/") + f"/v1/{endpoint}"
    try:
        response = httpx.post(url, json=request.model_dump(), timeout=None)
    except httpx.HTTPError as exc:
        raise _CliFailure(_EXIT_IO, f"cannot reach {url}: {exc}") from exc
    if response.status_code != 200:
        try:
            error = schemas.ErrorResponse.model_validate(response.json()).error
            raise _CliFailure(_KIND_TO_EXIT.get(error.kind, 1), error.message)
        except (ValueError, pydantic.ValidationError):
            raise _CliFailure(_EXIT_USAGE, f"{url} returned {response.status_code}: {response.text[:500]}")
    return response_model.model_validate(response.json())


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def _format_float(value: float) -> str:
    return f"{value:.6g}"


def _cmd_test(args: argparse.Namespace) -> int:
    request = schemas.TestRequest(
        x=_read_pairs(args.x_csv),
        y=_read_pairs(args.y_csv),
        method=args.method,
        alpha=args.alpha,
        permutations=args.permutations,
        seed=args.seed,
        threads=args.threads,
    )
    report: schemas.ReportEnvelope = _call(args, "test", request, schemas.ReportEnvelope)
    if args.no_timestamp:
        report.generatedAt = None
    if args.format == "json":
        _print_json(report.model_dump(exclude_none=True))
        return _EXIT_OK
    print(f'one-sided test, alternative: "{args.y_csv}" stochastically greater than "{args.x_csv}"')
    print(f"method: {report.method}   m={report.sampleSizes.m}   n={report.sampleSizes.n}")
    print(f"statistic: {_format_float(report.statistic)}")
    print(f"p-value: {_format_float(report.pValue)}")
    decision = "reject" if report.pValue <= args.alpha else "retain"
    print(f"decision at alpha={_format_float(args.alpha)}: {decision}")
    if report.thetas is not None:
        t = report.thetas
        print(
            f"thetas: theta1={_format_float(t.theta1)} theta2={_format_float(t.theta2)} "
            f"theta3={_format_float(t.theta3)} variance_component={_format_float(t.varianceComponent)}"
        )
    if report.seed is not None:
        print(f"seed: {report.seed}   permutations: {report.permutationCount}")
    return _EXIT_OK


def _cmd_describe(args: argparse.Namespace) -> int:
    request = schemas.DescribeRequest(x=_read_pairs(args.x_csv), y=_read_pairs(args.y_csv))
    report: schemas.DescribeResponse = _call(args, "describe", request, schemas.DescribeResponse)
    if args.no_timestamp:
        report.generatedAt = None
    if args.format == "json":
        _print_json(report.model_dump(exclude_none=True))
        return _EXIT_OK
    print(f"x: {args.x_csv} (m={report.sampleSizes.m})   y: {args.y_csv} (n={report.sampleSizes.n})")
    header = f"{'measure':<12}{'x mean (sd)':<24}{'y mean (sd)':<24}{'p-value (y > x)'}"
    print(header)
    print("-" * len(header))
    for row in report.rows:
        x_cell = f"{row.meanX:.4g} ({row.sdX:.4g})"
        y_cell = f"{row.meanY:.4g} ({row.sdY:.4g})"
        print(f"{row.measure:<12}{x_cell:<24}{y_cell:<24}{_format_float(row.pValue)}")
    return _EXIT_OK


def _parse_cell(text: str) -> tuple[int, int]:
    cleaned = text.strip().strip("()")
    parts = [p.strip() for p in cleaned.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected a size pair like '(30,30)', got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integer sizes in {text!r}") from None


def _parse_methods(text: str) -> list[str]:
    names = [p.strip() for p in text.split(",") if p.strip()]
    bad = [name for name in names if name not in _SIM_METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown methods {bad}; choose from {list(_SIM_METHODS)}")
    if not names:
        raise argparse.ArgumentTypeError("at least one method is required")
    return names


def _simulate_scenarios(args: argparse.Namespace) -> list[schemas.ScenarioModel]:
    common = dict(
        replicates=args.replicates,
        permutations=args.permutations,
        alpha=args.alpha,
        methods=args.methods,
    )
    if not args.paper_grid:
        return [
            schemas.ScenarioModel(
                family=args.family or "normal",
                delta=args.delta if args.delta is not None else 0.0,
                correlation=args.rho if args.rho is not None else 0.0,
                m=args.m,
                n=args.n,
                **common,
            )
        ]
    families = [args.family] if args.family else ["normal", "t5"]
    sizes = [args.cell] if args.cell else list(STUDY_SIZES)
    deltas = [args.delta] if args.delta is not None else list(STUDY_DELTAS)
    rhos = [args.rho] if args.rho is not None else list(STUDY_CORRELATIONS)
    return [
        schemas.ScenarioModel(family=family, delta=delta, correlation=rho, m=m, n=n, **common)
        for family in families
        for (m, n) in sizes
        for delta in deltas
        for rho in rhos
    ]


def _render_power_table(reports: list[schemas.PowerReportModel]) -> str:
    rhos = sorted({rep.correlation for rep in reports})
    methods = [name for name in _SIM_METHODS if any(name in rep.rates for rep in reports)]
    cells = {}
    row_keys = []
    for rep in reports:
        key = (rep.family, rep.m, rep.n, rep.delta)
        if key not in cells:
            cells[key] = {}
            row_keys.append(key)
        cells[key][rep.correlation] = rep
    width = max(8, *(len(name) + 2 for name in methods))
    lines = []
    head = f"{'case':<8}{'(m, n)':<12}{'delta':<8}"
    for rho in rhos:
        block = "".join(f"{name:>{width}}" for name in methods)
        head += f"| rho={rho:<4g} {block} "
    lines.append(head)
    lines.append("-" * len(head))
    for family, m, n, delta in row_keys:
        row = f"{family:<8}{f'({m}, {n})':<12}{delta:<8g}"
        for rho in rhos:
            rep = cells[(family, m, n, delta)].get(rho)
            if rep is None:
                block = "".join(f"{'-':>{width}}" for _ in methods)
            else:
                block = "".join(
                    f"{rep.rates.get(name, float('nan')):>{width}.3f}" if name in rep.rates else f"{'-':>{width}}"
                    for name in methods
                )
            row += f"|{'':<10}{block} "
        lines.append(row)
    return "\n".join(lines)


def _cmd_simulate(args: argparse.Namespace) -> int:
    request = schemas.SimulateRequest(
        scenarios=_simulate_scenarios(args),
        seed=args.seed,
        threads=args.threads,
    )
    report: schemas.SimulateResponse = _call(args, "simulate", request, schemas.SimulateResponse)
    if args.no_timestamp:
        report.generatedAt = None
        for rep in report.reports:
            rep.elapsedSeconds = None
    if args.format == "json":
        for rep in report.reports:
            print(json.dumps(rep.model_dump(exclude_none=True), separators=(",", ":")))
        return _EXIT_OK
    print(f"power estimates ({report.reports[0].replicates} replicates, "
          f"B={report.reports[0].permutations}, alpha={report.reports[0].alpha:g}, seed={args.seed})")
    for rep in report.reports:
        if rep.replicates == 1:
            print("warning: a single replicate gives a degenerate 0/1 rate with no MC error", file=sys.stderr)
            break
    print(_render_power_table(report.reports))
    return _EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("intervalorder.service:app", host=args.host, port=args.port, log_level="info")
    return _EXIT_OK


def _add_common_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    parser.add_argument(
        "--no-timestamp",
        action="store_true",
        help="omit generatedAt/elapsedSeconds so identical flags and seed give byte-identical JSON",
    )
    parser.add_argument("--server", default=None, metavar="URL", help="send the request to a running service instead of computing in-process")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intervalorder",
        description=(
            "One-sided stochastic-order tests for interval-valued samples. "
            "Argument order is significant: the first CSV is the baseline sample X, "
            "the second is the sample Y hypothesized to be stochastically greater."
        ),
    )
    parser.add_argument("--version", action="version", version=f"intervalorder {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    test_p = sub.add_parser("test", help="test whether sample Y is stochastically greater than sample X")
    test_p.add_argument("x_csv", help="baseline sample X (CSV with 'lower,upper' header)")
    test_p.add_argument("y_csv", help="sample Y hypothesized to be stochastically greater")
    test_p.add_argument("--method", choices=("u-perm", "u-asym", "ks-perm"), default="u-perm")
    test_p.add_argument("--alpha", type=float, default=0.05, help="level for the printed reject/retain decision")
    test_p.add_argument("--permutations", type=int, default=20000, help="permutation count B for *-perm methods")
    test_p.add_argument("--seed", type=int, default=0, help="permutation stream seed (explicit flags only; no env vars)")
    test_p.add_argument("--threads", type=int, default=1, help="worker cap; never changes results")
    _add_common_output_flags(test_p)
    test_p.set_defaults(func=_cmd_test)

    describe_p = sub.add_parser("describe", help="per-sample endpoint statistics with one-sided Welch t-tests")
    describe_p.add_argument("x_csv")
    describe_p.add_argument("y_csv")
    _add_common_output_flags(describe_p)
    describe_p.set_defaults(func=_cmd_describe)

    sim_p = sub.add_parser("simulate", help="Monte Carlo power estimates for the stochastic-order tests")
    sim_p.add_argument("--family", choices=("normal", "t5"), default=None, help="generator family (default: normal; with --paper-grid, filters the grid)")
    sim_p.add_argument("--delta", type=float, default=None, help="center-mean shift of the alternative population (default 0; with --paper-grid, filters the grid)")
    sim_p.add_argument("--rho", type=float, default=None, help="center/log-range correlation (default 0; with --paper-grid, filters the grid)")
    sim_p.add_argument("--m", type=int, default=30, help="baseline sample size")
    sim_p.add_argument("--n", type=int, default=30, help="alternative sample size")
    sim_p.add_argument("--replicates", type=int, default=2000)
    sim_p.add_argument("--permutations", type=int, default=2000, help="permutation count per replicate")
    sim_p.add_argument("--alpha", type=float, default=0.05)
    sim_p.add_argument("--methods", type=_parse_methods, default=list(_SIM_METHODS), help="comma-separated subset of u-perm,u-asym,b-ks")
    sim_p.add_argument("--seed", type=int, default=0)
    sim_p.add_argument("--threads", type=int, default=1, help="worker cap; never changes results")
    sim_p.add_argument("--paper-grid", action="store_true", help="run the full built-in study grid (2 families x 4 size pairs x 4 deltas x 3 correlations)")
    sim_p.add_argument("--cell", type=_parse_cell, default=None, help="restrict --paper-grid to one size pair, e.g. \"(30,30)\"")
    _add_common_output_flags(sim_p)
    sim_p.set_defaults(func=_cmd_simulate)

    serve_p = sub.add_parser("serve", help="run the HTTP service")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8000)
    serve_p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except pydantic.ValidationError as exc:
        print(f"error: invalid request: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except BrokenPipeError:
        return _EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
