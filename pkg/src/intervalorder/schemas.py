"""Request/response models for the HTTP service; the CLI speaks the same shapes.

Field names are the wire contract: reports serialize in declaration order
and round-trip losslessly, so a fixed seed yields byte-identical JSON
(modulo the ``generatedAt`` / ``elapsedSeconds`` timing fields, which the
CLI can suppress).
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

TestMethodName = Literal["u-perm", "u-asym", "ks-perm"]
SimMethodName = Literal["u-perm", "u-asym", "b-ks"]
FamilyName = Literal["normal", "t5"]

IntervalPair = tuple[float, float]


class SampleSizes(BaseModel):
    m: int
    n: int


class ThetaReport(BaseModel):
    theta1: float
    theta2: float
    theta3: float
    varianceComponent: float


class TestRequest(BaseModel):
    """Two raw samples and how to test "y stochastically greater than x"."""

    x: list[IntervalPair]
    y: list[IntervalPair]
    method: TestMethodName = "u-perm"
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    permutations: int = Field(default=20000, ge=1)
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)


class ReportEnvelope(BaseModel):
    """One test result; ``thetas`` only for u-asym, seed/permutationCount only
    for permutation-calibrated methods."""

    method: str
    statistic: float
    pValue: float
    sampleSizes: SampleSizes
    thetas: ThetaReport | None = None
    seed: int | None = None
    permutationCount: int | None = None
    toolVersion: str
    generatedAt: str | None = None


class DescribeRequest(BaseModel):
    x: list[IntervalPair]
    y: list[IntervalPair]


class DescribeRow(BaseModel):
    """Mean/SD per sample for one derived measure, with a one-sided Welch
    t-test p-value for "y's mean greater"."""

    measure: str
    meanX: float
    sdX: float
    meanY: float
    sdY: float
    pValue: float


class DescribeResponse(BaseModel):
    rows: list[DescribeRow]
    sampleSizes: SampleSizes
    toolVersion: str
    generatedAt: str | None = None


class ScenarioModel(BaseModel):
    """One power-grid cell: the baseline law is centered, the alternative
    shifts the center mean by delta."""

    family: FamilyName = "normal"
    delta: float = Field(default=0.0, ge=0.0)
    correlation: float = Field(default=0.0, gt=-1.0, lt=1.0)
    m: int = Field(default=30, ge=1)
    n: int = Field(default=30, ge=1)
    replicates: int = Field(default=2000, ge=1)
    permutations: int = Field(default=2000, ge=1)
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    methods: list[SimMethodName] = ["u-perm", "u-asym", "b-ks"]


class SimulateRequest(BaseModel):
    scenarios: list[ScenarioModel] = Field(min_length=1)
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)


class PowerReportModel(BaseModel):
    """Estimated rejection rates for one scenario; scenario i of a request
    runs with seed ``request.seed + i``."""

    family: FamilyName
    delta: float
    correlation: float
    m: int
    n: int
    replicates: int
    permutations: int
    alpha: float
    methods: list[SimMethodName]
    rejections: dict[str, int]
    rates: dict[str, float]
    mcStandardErrors: dict[str, float]
    seed: int
    elapsedSeconds: float | None = None


class SimulateResponse(BaseModel):
    reports: list[PowerReportModel]
    toolVersion: str
    generatedAt: str | None = None


class ErrorInfo(BaseModel):
    kind: Literal["usage", "io", "parse", "degenerate", "internal"]
    message: str
    rows: list[int] | None = None


class ErrorResponse(BaseModel):
    error: ErrorInfo


class VersionResponse(BaseModel):
    name: str
    toolVersion: str
