"""Pydantic wire models for the HTTP service."""
from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field

Number = Union[float, str]  # non-finite values travel as "inf"/"-inf"/"nan"


class MatrixDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    re: list[list[float]]
    im: Optional[list[list[float]]] = None


class KernelDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")
    spectrum: list[float]
    values_re: list[list[float]]
    values_im: Optional[list[list[float]]] = None
    blocks: Optional[list[int]] = None


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    seed: int = 0


class CheckDoc(BaseModel):
    name: str
    defect: float
    tol: float
    ok: bool


class VerifyResponse(BaseModel):
    ok: bool
    checks: list[CheckDoc]


class BenchRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: dict = Field(default_factory=dict)


class RowDoc(BaseModel):
    experiment: str
    n: int
    p: Optional[Number] = None
    trial: int
    ratio: Optional[Number] = None
    normalized_constant: Optional[Number] = None
    bound: Optional[Number] = None
    # "pass" is a Python keyword; alias keeps the wire name
    status: str = Field(alias="pass")
    model_config = ConfigDict(populate_by_name=True)


class BenchResponse(BaseModel):
    name: str
    ok: bool
    rows: list[RowDoc]
    summary: dict
    csv: str


class EigRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    matrix: MatrixDoc
    cluster_tol: Optional[float] = None


class EigResponse(BaseModel):
    dim: int
    spectrum: list[float]
    cluster_sizes: list[int]


class MarkovRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kernel: KernelDoc


class BmoReportRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    matrix: MatrixDoc
    x: MatrixDoc
    function: Optional[dict] = None
    kernel: Optional[KernelDoc] = None


class ReportResponse(BaseModel):
    report: dict
