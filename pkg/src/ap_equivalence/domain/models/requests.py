from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class SumRequest(BaseModel):
    """.apeq source text plus the name of the sum to work on."""

    model_config = ConfigDict(extra="forbid")

    source: str
    sum: str


class PairRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: str
    sum1: str
    sum2: str


class IntegralBasisRequest(SumRequest):
    trace: Optional[int] = Field(default=None, ge=1)


class EquivalenceRequest(PairRequest):
    definition: Literal["star", "bohr"] = "star"
    trace: Optional[int] = Field(default=None, ge=1)


class BochnerFejerRequest(SumRequest):
    orders: List[int] = Field(min_length=1)
    schedule: bool = False


class MeanValueRequest(SumRequest):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    sigma: float
    frequency: float = Field(alias="lambda")
    T: float = Field(gt=0)
    step: Optional[float] = Field(default=None, gt=0)


class AlmostPeriodRequest(SumRequest):
    epsilon: float = Field(gt=0)
    sigma_lo: float
    sigma_hi: float
    t_max: float = Field(gt=0)


class ValueSetRequest(PairRequest):
    sigma_lo: float
    sigma_hi: float
    samples: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
    tol: Optional[float] = Field(default=None, gt=0)
    t_cap: Optional[float] = Field(default=None, gt=0)
    substrips: Optional[int] = Field(default=None, ge=1)


class TranslationRequest(PairRequest):
    sigma_lo: float
    sigma_hi: float
    t_max: float = Field(gt=0)
