"""HTTP service wrapping the core tests; the CLI calls the same handlers.

Endpoints:
    GET  /v1/health    liveness probe
    GET  /v1/version   tool name and version
    POST /v1/test      one-sided stochastic-order test (u-perm, u-asym, ks-perm)
    POST /v1/describe  per-sample endpoint statistics with Welch t-tests
    POST /v1/simulate  Monte Carlo power estimates for scenario lists

Errors are reported as ``{"error": {"kind", "message", "rows"}}`` with kind
one of usage / io / parse / degenerate / internal, which clients map to
exit codes.
"""

from __future__ import annotations

import math
import warnings
from datetime import datetime, timezone

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from scipy import stats as scipy_stats

from . import __version__, schemas
from .intervals import IntervalSample, SampleValidationError, validate_sample
from .permutation import PermutationPlan, StatisticKind, permutation_test
from .simulation import Family, Method, PowerReport, Scenario, run_scenario
from .utest import DegenerateVarianceError, InsufficientDataError, asymptotic_test

__all__ = ["app", "ServiceError", "run_test", "run_describe", "run_simulate"]


class ServiceError(Exception):
    """Structured failure with an error kind clients map to exit codes."""

    def __init__(self, kind: str, message: str, rows: list[int] | None = None, status: int = 422):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.rows = rows
        self.status = status

    def to_response(self) -> schemas.ErrorResponse:
        return schemas.ErrorResponse(
            error=schemas.ErrorInfo(kind=self.kind, message=self.message, rows=self.rows)
        )


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _validated(pairs: list[tuple[float, float]], label: str) -> IntervalSample:
    try:
        return validate_sample(pairs, label=label)
    except SampleValidationError as exc:
        rows = [row for row, _ in exc.issues] or None
        raise ServiceError("parse", f"sample {label}: {exc}", rows=rows) from exc


def run_test(req: schemas.TestRequest) -> schemas.ReportEnvelope:
    x = _validated(req.x, "x")
    y = _validated(req.y, "y")
    sizes = schemas.SampleSizes(m=len(x), n=len(y))
    if req.method == "u-asym":
        try:
            outcome = asymptotic_test(x, y)
        except (DegenerateVarianceError, InsufficientDataError) as exc:
            raise ServiceError("degenerate", str(exc)) from exc
        return schemas.ReportEnvelope(
            method=req.method,
            statistic=outcome.t,
            pValue=outcome.p_value,
            sampleSizes=sizes,
            thetas=schemas.ThetaReport(
                theta1=outcome.thetas.theta1,
                theta2=outcome.thetas.theta2,
                theta3=outcome.thetas.theta3,
                varianceComponent=outcome.thetas.variance_component,
            ),
            toolVersion=__version__,
            generatedAt=_timestamp(),
        )
    kind = StatisticKind.U_STATISTIC if req.method == "u-perm" else StatisticKind.KS_D_PLUS
    plan = PermutationPlan(permutation_count=req.permutations, seed=req.seed, statistic_kind=kind)
    outcome = permutation_test(x, y, plan, threads=req.threads)
    return schemas.ReportEnvelope(
        method=req.method,
        statistic=outcome.observed,
        pValue=outcome.p_value,
        sampleSizes=sizes,
        seed=req.seed,
        permutationCount=req.permutations,
        toolVersion=__version__,
        generatedAt=_timestamp(),
    )


def _welch_greater(y_values: np.ndarray, x_values: np.ndarray) -> float:
    """One-sided Welch t-test p-value for "mean of y greater than mean of x".

    Zero-variance edge cases (constant columns) resolve deterministically by
    the sign of the mean difference.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        result = scipy_stats.ttest_ind(y_values, x_values, equal_var=False, alternative="greater")
    p = float(result.pvalue)
    if math.isnan(p):
        diff = float(np.mean(y_values)) - float(np.mean(x_values))
        return 0.5 if diff == 0.0 else (0.0 if diff > 0.0 else 1.0)
    return p


def run_describe(req: schemas.DescribeRequest) -> schemas.DescribeResponse:
    x = _validated(req.x, "x")
    y = _validated(req.y, "y")
    measures = [
        ("center", x.centers(), y.centers()),
        ("lower", x.lower, y.lower),
        ("upper", x.upper, y.upper),
        ("half_range", x.half_ranges(), y.half_ranges()),
    ]
    rows = []
    for name, xv, yv in measures:
        rows.append(
            schemas.DescribeRow(
                measure=name,
                meanX=float(np.mean(xv)),
                sdX=float(np.std(xv, ddof=1)) if xv.size > 1 else 0.0,
                meanY=float(np.mean(yv)),
                sdY=float(np.std(yv, ddof=1)) if yv.size > 1 else 0.0,
                pValue=_welch_greater(yv, xv),
            )
        )
    return schemas.DescribeResponse(
        rows=rows,
        sampleSizes=schemas.SampleSizes(m=len(x), n=len(y)),
        toolVersion=__version__,
        generatedAt=_timestamp(),
    )


def _scenario_from_model(model: schemas.ScenarioModel) -> Scenario:
    return Scenario(
        family=Family(model.family),
        delta=model.delta,
        correlation=model.correlation,
        m=model.m,
        n=model.n,
        replicates=model.replicates,
        permutations=model.permutations,
        alpha=model.alpha,
        methods=tuple(Method(name) for name in model.methods),
    )


def _report_model(report: PowerReport) -> schemas.PowerReportModel:
    sc = report.scenario
    names = [meth.value for meth in sc.methods]
    return schemas.PowerReportModel(
        family=sc.family.value,
        delta=sc.delta,
        correlation=sc.correlation,
        m=sc.m,
        n=sc.n,
        replicates=sc.replicates,
        permutations=sc.permutations,
        alpha=sc.alpha,
        methods=names,
        rejections={name: report.rejections[i] for i, name in enumerate(names)},
        rates={name: report.rate(meth) for name, meth in zip(names, sc.methods)},
        mcStandardErrors={name: report.mc_standard_error(meth) for name, meth in zip(names, sc.methods)},
        seed=report.seed,
        elapsedSeconds=report.elapsed_seconds,
    )


def run_simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    try:
        scenarios = [_scenario_from_model(model) for model in req.scenarios]
    except ValueError as exc:
        raise ServiceError("usage", str(exc)) from exc
    reports = [
        _report_model(run_scenario(sc, seed=req.seed + i, workers=req.threads))
        for i, sc in enumerate(scenarios)
    ]
    return schemas.SimulateResponse(reports=reports, toolVersion=__version__, generatedAt=_timestamp())


app = FastAPI(title="intervalorder", version=__version__)


@app.exception_handler(ServiceError)
async def _service_error_handler(request: Request, exc: ServiceError) -> JSONResponse:
    return JSONResponse(status_code=exc.status, content=exc.to_response().model_dump(exclude_none=True))


@app.get("/v1/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/v1/version", response_model=schemas.VersionResponse)
def version() -> schemas.VersionResponse:
    return schemas.VersionResponse(name="intervalorder", toolVersion=__version__)


@app.post("/v1/test", response_model=schemas.ReportEnvelope, response_model_exclude_none=True)
def test_endpoint(req: schemas.TestRequest) -> schemas.ReportEnvelope:
    return run_test(req)


@app.post("/v1/describe", response_model=schemas.DescribeResponse, response_model_exclude_none=True)
def describe_endpoint(req: schemas.DescribeRequest) -> schemas.DescribeResponse:
    return run_describe(req)


@app.post("/v1/simulate", response_model=schemas.SimulateResponse, response_model_exclude_none=True)
def simulate_endpoint(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    return run_simulate(req)
