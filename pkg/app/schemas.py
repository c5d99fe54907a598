"""Pydantic schemas for input files and report payloads.

Rationals are always written as "p/q" (also "3/1"); inputs accept "p",
"p/q" or an integer. Field elements are {"m", "bits"} objects with
degree-ascending bits; a Novikov polynomial is its list of {"exp", "coeff"}
terms.
"""

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.algebra.gf2bar import FieldElement, make_field
from app.algebra.novikov import NovikovPoly
from app.core.constants import (
    COMMANDS,
    FORMAT_JSON,
    FORMAT_TABLE,
    MAX_FIELD_DEGREE,
    RANK_EXACT,
    RANK_METHODS,
)
from app.settings import settings
from app.toric.floer import HFResult
from app.toric.polytope import (
    FanoPolytope,
    InteriorPoint,
    ValidationDiagnostics,
    energies,
    is_monotone,
)
from app.toric.potential import CriticalReport, RhoAssignment

RationalInput = Union[int, str]


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def parse_rational(value: RationalInput) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    text = str(value).strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational: {value!r}") from e


# ============================================================
# Field elements and Novikov polynomials
# ============================================================


class FieldElementModel(BaseModel):
    """{"m": int, "bits": "degree-ascending 0/1 string"}."""

    m: int = Field(ge=1, le=MAX_FIELD_DEGREE)
    bits: str

    @model_validator(mode="after")
    def _check_bits(self) -> "FieldElementModel":
        if len(self.bits) != self.m or any(b not in "01" for b in self.bits):
            raise ValueError(f"expected {self.m} bits, got {self.bits!r}")
        return self

    @classmethod
    def from_element(cls, a: FieldElement) -> "FieldElementModel":
        return cls(m=a.field.degree, bits=a.to_bits())

    def to_element(self) -> FieldElement:
        return make_field(self.m).from_bits(self.bits)


class NovikovTermModel(BaseModel):
    exp: str
    coeff: FieldElementModel


def novikov_terms(poly: NovikovPoly) -> List[NovikovTermModel]:
    """Terms sorted by exponent; the zero polynomial is the empty list."""
    return [
        NovikovTermModel(exp=format_rational(e), coeff=FieldElementModel.from_element(c))
        for e, c in poly.items()
    ]


# ============================================================
# Input files
# ============================================================


class FacetModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    v: List[int]
    lambda_: RationalInput = Field(alias="lambda")

    @field_validator("lambda_")
    @classmethod
    def _rational(cls, value: RationalInput) -> RationalInput:
        parse_rational(value)
        return value


class PolytopeFile(BaseModel):
    """{"n": int, "facets": [{"v": [...], "lambda": "p/q"}], "c": [...], "name": str?}."""

    n: int = Field(ge=1)
    facets: List[FacetModel]
    c: List[RationalInput]
    name: Optional[str] = None

    @model_validator(mode="after")
    def _check_lengths(self) -> "PolytopeFile":
        for j, facet in enumerate(self.facets, start=1):
            if len(facet.v) != self.n:
                raise ValueError(f"facet {j}: normal has length {len(facet.v)}, expected {self.n}")
        if len(self.c) != self.n:
            raise ValueError(f"c has length {len(self.c)}, expected {self.n}")
        for value in self.c:
            parse_rational(value)
        return self

    def to_domain(self) -> Tuple[FanoPolytope, InteriorPoint]:
        polytope = FanoPolytope.from_data(
            [f.v for f in self.facets],
            [parse_rational(f.lambda_) for f in self.facets],
            name=self.name,
        )
        return polytope, InteriorPoint(tuple(parse_rational(x) for x in self.c))


class RhoFile(BaseModel):
    """{"m": int, "values": [{"m": int, "bits": str}, ...]}.

    A bare bit string is accepted for a value and read in GF(2^m).
    """

    m: int = Field(ge=1, le=MAX_FIELD_DEGREE)
    values: List[Union[FieldElementModel, str]] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_values(self) -> "RhoFile":
        elements = []
        for i, value in enumerate(self.values, start=1):
            if isinstance(value, str):
                if len(value) != self.m or any(b not in "01" for b in value):
                    raise ValueError(f"rho_{i}: expected {self.m} bits, got {value!r}")
                value = FieldElementModel(m=self.m, bits=value)
            if value.m != self.m:
                raise ValueError(f"rho_{i}: element of GF(2^{value.m}), expected m = {self.m}")
            if "1" not in value.bits:
                raise ValueError(f"rho_{i} is zero")
            elements.append(value)
        self.values = elements
        return self

    @classmethod
    def from_rho(cls, rho: RhoAssignment) -> "RhoFile":
        return cls(
            m=rho.field.degree,
            values=[FieldElementModel.from_element(v) for v in rho.values],
        )

    def to_rho(self) -> RhoAssignment:
        field = make_field(self.m)
        return RhoAssignment(field, tuple(v.to_element() for v in self.values))


# ============================================================
# Result payloads
# ============================================================


class DiagnosticsModel(BaseModel):
    valid: bool
    messages: List[str] = Field(default_factory=list)
    violated_facets: List[int] = Field(default_factory=list)
    unimodular_basis: Optional[List[int]] = None

    @classmethod
    def from_diagnostics(cls, d: ValidationDiagnostics) -> "DiagnosticsModel":
        return cls(
            valid=d.valid,
            messages=d.messages,
            violated_facets=d.violated_facets,
            unimodular_basis=[i + 1 for i in d.unimodular_basis]
            if d.unimodular_basis is not None
            else None,
        )


class EnergiesModel(BaseModel):
    energies: List[str]
    monotone: bool

    @classmethod
    def from_polytope(cls, polytope: FanoPolytope, point: InteriorPoint) -> "EnergiesModel":
        return cls(
            energies=[format_rational(x) for x in energies(polytope, point)],
            monotone=is_monotone(polytope, point),
        )


class CriticalReportModel(BaseModel):
    rho: RhoFile
    w_value: List[NovikovTermModel]
    z_values: List[List[NovikovTermModel]]
    defined: bool
    nonvanishing: bool

    @classmethod
    def from_report(cls, r: CriticalReport) -> "CriticalReportModel":
        return cls(
            rho=RhoFile.from_rho(r.rho),
            w_value=novikov_terms(r.w_value),
            z_values=[novikov_terms(z) for z in r.z_values],
            defined=r.defined,
            nonvanishing=r.nonvanishing,
        )


class HFResultModel(BaseModel):
    defined: bool
    obstruction: List[NovikovTermModel]
    delta_rank: Optional[int] = Field(default=None, ge=0)
    hf_rank: Optional[int] = Field(default=None, ge=0)
    bound: Optional[int] = Field(default=None, ge=0)
    nondisplaceable: bool = False
    rho: Optional[RhoFile] = None

    @classmethod
    def from_result(
        cls, result: HFResult, rho: Optional[RhoAssignment] = None
    ) -> "HFResultModel":
        return cls(
            defined=result.defined,
            obstruction=novikov_terms(result.obstruction),
            delta_rank=result.delta_rank,
            hf_rank=result.hf_rank,
            bound=result.bound,
            nondisplaceable=result.nondisplaceable,
            rho=RhoFile.from_rho(rho) if rho is not None else None,
        )


class SelftestItemModel(BaseModel):
    name: str
    passed: bool
    detail: str = ""


# ============================================================
# Jobs and reports
# ============================================================


class JobSpecModel(BaseModel):
    """Echo of the job in every report."""

    command: Literal[tuple(COMMANDS)]  # type: ignore[valid-type]
    polytope: Optional[str] = None
    rho: Optional[str] = None
    max_degree: int = Field(default=8, ge=1, le=MAX_FIELD_DEGREE)
    method: Literal[tuple(RANK_METHODS)] = RANK_EXACT  # type: ignore[valid-type]
    format: Literal[FORMAT_JSON, FORMAT_TABLE] = FORMAT_JSON
    seed: int = Field(default_factory=lambda: settings.default_seed)


class Report(BaseModel):
    """One job's output. results holds plain JSON values so reports round-trip."""

    tool: str
    version: str
    job: JobSpecModel
    status: Literal["ok", "failed", "error"] = "ok"
    results: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None
    timing_seconds: Optional[float] = None
