from typing import ClassVar, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .channels import ProtocolKind


class RunConfig(BaseModel):
    """Echo of the parameters a table was computed with."""

    command: Literal["rate", "pmax", "capacity", "schur"]
    protocol: Optional[ProtocolKind] = None
    m: Optional[int] = Field(default=None, ge=1)
    m1: Optional[int] = Field(default=None, ge=1)
    m2: Optional[int] = Field(default=None, ge=1)
    p: Optional[float] = None
    p_range: Optional[tuple[float, float, float]] = None
    q: Optional[float] = None
    Q: Optional[float] = None
    optimize_q: bool = False
    tol: float = 1e-7
    threads: Optional[int] = Field(default=None, ge=1)
    output_format: Literal["json", "csv"] = "json"

    model_config = ConfigDict(use_enum_values=True)

    @model_validator(mode="after")
    def check_exclusive(self) -> "RunConfig":
        if self.p is not None and self.p_range is not None:
            raise ValueError("Give either p or p_range, not both")
        if self.optimize_q and (self.q is not None or self.Q is not None):
            raise ValueError("optimize_q excludes fixed q and Q")
        return self


class RateRow(BaseModel):
    p: float
    q: float
    Q: float
    rate: float
    i_xy: float
    i_xe: float


class PmaxRow(BaseModel):
    protocol: str
    m1: int
    m2: int
    q: Optional[float] = None
    Q: Optional[float] = None
    optimized: bool = False
    p_max: float


class CapacityRow(BaseModel):
    p: float
    rate: float


class SchurVectorOut(BaseModel):
    nu: list[int]
    gelfand: list[list[int]]
    tableau: list[list[int]]
    coeffs: list[tuple[str, float, float]]


class SchurBasisOut(BaseModel):
    n: int
    q: int
    vectors: list[SchurVectorOut]


class _SweepRequest(BaseModel):
    p: Optional[float] = None
    p_range: Optional[tuple[float, float, float]] = None
    threads: Optional[int] = Field(default=None, ge=1)

    p_upper: ClassVar[float] = 1.0
    p_upper_inclusive: ClassVar[bool] = True

    def _p_allowed(self, value: float) -> bool:
        if self.p_upper_inclusive:
            return 0.0 <= value <= self.p_upper
        return 0.0 <= value < self.p_upper

    @model_validator(mode="after")
    def check_p(self):
        if (self.p is None) == (self.p_range is None):
            raise ValueError("Exactly one of p and p_range is required")
        endpoints = [self.p] if self.p is not None else list(self.p_range[:2])
        for value in endpoints:
            if not self._p_allowed(value):
                bracket = "]" if self.p_upper_inclusive else ")"
                raise ValueError(f"p={value} outside [0, {self.p_upper}{bracket}")
        return self


class RateRequest(_SweepRequest):
    p_upper: ClassVar[float] = 0.5
    p_upper_inclusive: ClassVar[bool] = False

    protocol: ProtocolKind = ProtocolKind.BB84
    m: Optional[int] = Field(default=None, ge=1)
    m1: Optional[int] = Field(default=None, ge=1)
    m2: Optional[int] = Field(default=None, ge=1)
    q: Optional[float] = Field(default=None, ge=0.0, le=0.5)
    Q: Optional[float] = Field(default=None, ge=0.0, le=0.5)
    optimize_q: bool = False


class PmaxRequest(BaseModel):
    protocol: Optional[ProtocolKind] = ProtocolKind.BB84
    capacity: bool = False
    m: Optional[int] = Field(default=None, ge=1)
    m1: Optional[int] = Field(default=None, ge=1)
    m2: Optional[int] = Field(default=None, ge=1)
    q: Optional[float] = Field(default=None, ge=0.0, le=0.5)
    Q: Optional[float] = Field(default=None, ge=0.0, le=0.5)
    optimize_q: bool = False
    tol: float = Field(default=1e-7, gt=0.0)
    threads: Optional[int] = Field(default=None, ge=1)


class CapacityRequest(_SweepRequest):
    m1: int = Field(default=1, ge=1)
    m2: int = Field(default=1, ge=1)
