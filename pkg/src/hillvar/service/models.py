"""Pydantic request/response schemas for the HTTP service.

Exact rationals travel as "num/den" strings; the wire name for the grading
parameter is "lambda", with the sentinel "m2" meaning m squared.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class _Base(BaseModel):
    model_config = ConfigDict(populate_by_name=True)


# ---- requests -------------------------------------------------------------


class CoeffsRequest(_Base):
    m: str
    J: int = 8


class CertifyRequest(_Base):
    m: Optional[str] = None
    lam: str = Field("m2", alias="lambda")
    condition: Literal["exact", "sufficient", "quadratic"] = "exact"
    complex_radius: Optional[str] = None
    tol: str = "1e-12"


class CriticalMRequest(_Base):
    tol: str = "1e-4"
    digits: int = 10


class BoundRequest(_Base):
    m: str
    lam: str = Field("m2", alias="lambda")
    J: int = 8
    N: int = 2
    n: int = 2
    tol: str = "1e-12"
    digits: int = 10


class OrbitRequest(_Base):
    m: str
    lam: str = Field("m2", alias="lambda")
    J: int = 8
    n_max: Optional[int] = None
    samples: int = 16
    digits: int = 10
    format: Literal["csv", "json"] = "csv"


class ReportRequest(_Base):
    m: str
    digits: int = 10


class ResidualRequest(_Base):
    m: str
    J: int = 8


# ---- responses ------------------------------------------------------------


class TableEntry(_Base):
    j: int
    sigma: int
    value: str


class TableResponse(_Base):
    m: str
    J: int
    entries: list[TableEntry]


class CertificateResponse(_Base):
    condition: str
    verdict: str
    margin_lo: str
    margin_hi: str
    m: Optional[str] = None
    M: Optional[str] = None
    lam: Optional[str] = Field(None, alias="lambda")
    epsilon: Optional[str] = None
    h: Optional[str] = None


class CriticalMResponse(_Base):
    lo: str
    hi: str
    width: str
    lo_decimal: str
    hi_decimal: str


class RenderedValue(_Base):
    text: str
    tag: str


class BoundResponse(_Base):
    N: int
    n: int
    l_terms: list[str]
    z_lo: str
    z_hi: str
    bound_lo: str
    bound_hi: str
    rendered: list[RenderedValue]


class OrbitResponse(_Base):
    format: str
    samples: int
    content: str


class ReportEntryOut(_Base):
    name: str
    text: str
    tag: str
    reference_text: Optional[str] = None
    reference_tag: Optional[str] = None
    matches: Optional[bool] = None


class ReportResponse(_Base):
    m: str
    lam: str = Field(alias="lambda")
    digits: int
    main: list[ReportEntryOut]
    z: ReportEntryOut
    bounds: list[ReportEntryOut]
    order3: list[ReportEntryOut]
    eps2: ReportEntryOut
    combined_n1: ReportEntryOut
    approximations: dict
    notes: list[str]
    text: str


class ResidualResponse(_Base):
    m: str
    J: int
    ode_zero_through: int
    defining_zero_through: int
    all_zero: bool
