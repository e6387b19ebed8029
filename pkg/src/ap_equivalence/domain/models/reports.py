from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ap_equivalence.domain.models.types import ComplexPair, Rational


class QBasisReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    sum: str
    symbols: List[str]
    basis_indices: List[int]
    basis: List[List[Rational]]
    basis_labels: List[str]
    representation: List[List[Rational]]


class IntegralBasisSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    dimension: int
    basis: List[List[Rational]]
    basis_labels: List[str]
    denominator: int


class IntegralBasisReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    sum: str
    symbols: List[str]
    basis: List[List[Rational]]
    basis_labels: List[str]
    representation: List[List[int]]
    denominator: int
    trace: List[IntegralBasisSummary] = Field(default_factory=list)


class BFOrders(BaseModel):
    model_config = ConfigDict(frozen=True)

    orders: List[int]

    @field_validator("orders")
    @classmethod
    def _positive(cls, v: List[int]) -> List[int]:
        if not v or any(n < 1 for n in v):
            raise ValueError("Bochner-Fejer orders must all be >= 1")
        return v


class DeviationStage(BaseModel):
    model_config = ConfigDict(frozen=True)

    order: int
    sup_deviation: float


class BochnerFejerReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    orders: List[int]
    weights: List[Rational]
    coordinates: List[List[int]]
    kept_terms: int
    sigma_range: Optional[Tuple[float, float]] = None
    schedule: List[DeviationStage] = Field(default_factory=list)


class MeanValueEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    frequency: float
    sigma: float
    T: float
    step: float
    value: ComplexPair

    @model_validator(mode="after")
    def _positive_window(self) -> "MeanValueEstimate":
        if self.T <= 0 or self.step <= 0:
            raise ValueError("T and step must be positive")
        return self


class CoefficientEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    frequency: float
    coefficient: ComplexPair


class AlmostPeriod(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau: float
    defect: float
    verified_defect: float


class AlmostPeriodReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    epsilon: float
    sigma_lo: float
    sigma_hi: float
    t_window: Tuple[float, float]
    search_max: float
    scan_step: float
    grid: Tuple[int, int]
    periods: List[AlmostPeriod]
    inclusion_length: Optional[float]

    @property
    def empty(self) -> bool:
        return not self.periods


class Rectangle(BaseModel):
    model_config = ConfigDict(frozen=True)

    sigma_lo: float
    sigma_hi: float
    t_lo: float
    t_hi: float

    @model_validator(mode="after")
    def _ordered(self) -> "Rectangle":
        if not (self.sigma_lo < self.sigma_hi and self.t_lo < self.t_hi):
            raise ValueError("rectangle needs sigma_lo < sigma_hi and t_lo < t_hi")
        return self

    def shifted(self, offset: complex) -> "Rectangle":
        return Rectangle(
            sigma_lo=self.sigma_lo + offset.real,
            sigma_hi=self.sigma_hi + offset.real,
            t_lo=self.t_lo + offset.imag,
            t_hi=self.t_hi + offset.imag,
        )

    def contains(self, s: complex) -> bool:
        return self.sigma_lo < s.real < self.sigma_hi and self.t_lo < s.imag < self.t_hi

    @property
    def area(self) -> float:
        return (self.sigma_hi - self.sigma_lo) * (self.t_hi - self.t_lo)


class AttainmentReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: ComplexPair
    rectangle: Rectangle
    count: int
    boundary_margin: float
    boundary_samples: int
    roots: List[ComplexPair]
    newton_tol: float
    dedup_radius: float

    @model_validator(mode="after")
    def _consistent(self) -> "AttainmentReport":
        if self.count < 0 or self.count < len(self.roots):
            raise ValueError("root count must be nonnegative and cover the located roots")
        return self


AttainmentStatus = Literal["found", "unresolved", "excluded"]


class AttainmentResult(BaseModel):
    """Outcome of a windowed search; "unresolved" means not found up to explored_t, nothing more."""

    model_config = ConfigDict(frozen=True)

    target: ComplexPair
    status: AttainmentStatus
    point: Optional[ComplexPair] = None
    residual: Optional[float] = None
    explored_t: float


class SampleOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    direction: Literal["f1_attains_f2", "f2_attains_f1"]
    source_point: ComplexPair
    target: ComplexPair
    status: AttainmentStatus
    found_point: Optional[ComplexPair] = None
    residual: Optional[float] = None
    explored_t: float


class ValueSetComparison(BaseModel):
    model_config = ConfigDict(frozen=True)

    sigma_lo: float
    sigma_hi: float
    n_samples: int
    seed: int
    tol: float
    t_cap: float
    fraction_f1_attains_f2: float
    fraction_f2_attains_f1: float
    outcomes: List[SampleOutcome]
    worst: List[SampleOutcome]

    @property
    def complete(self) -> bool:
        return self.fraction_f1_attains_f2 == 1.0 and self.fraction_f2_attains_f1 == 1.0


class ExperimentReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    sigma_lo: float
    sigma_hi: float
    n_substrips: int
    comparisons: List[ValueSetComparison]
    consistent_with_equivalence: bool
    exact_verdict: Optional[bool] = None
    agrees_with_exact: Optional[bool] = None


class TranslationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    sigma_lo: float
    sigma_hi: float
    t_max: float
    scan_step: float
    best_t: float
    deviation: float
