from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, computed_field, model_validator

from ap_equivalence.domain.models.types import Rational, Turns


class PhaseVector(BaseModel):
    """q_j = turns(b_j) - turns(a_j) mod 1 on the common nonzero support."""

    model_config = ConfigDict(frozen=True)

    indices: List[int]
    q: List[Turns]


class Witness(BaseModel):
    """psi(g_k) = 2*pi*turns[k] on the basis g_k = support[basis_indices[k]]."""

    model_config = ConfigDict(frozen=True)

    basis_indices: List[int]
    basis: List[List[Rational]]
    representation: List[List[Rational]]
    turns: List[Turns]


class Certificate(BaseModel):
    """A relation sum_j c_j lambda_j = 0 with sum_j c_j q_j not an integer."""

    model_config = ConfigDict(frozen=True)

    relation: List[int]
    defect: Rational


class EquivalenceVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    definition: Literal["star", "bohr"]
    equivalent: bool
    symbols: List[str]
    support: List[List[Rational]]
    support_labels: List[str]
    zero_filled: bool = False
    phases: Optional[PhaseVector] = None
    witness: Optional[Witness] = None
    certificate: Optional[Certificate] = None
    modulus_mismatch: Optional[int] = None

    @model_validator(mode="after")
    def _one_outcome(self) -> "EquivalenceVerdict":
        populated = [x is not None for x in (self.witness, self.certificate, self.modulus_mismatch)]
        if sum(populated) != 1:
            raise ValueError("exactly one of witness, certificate, modulus_mismatch must be set")
        if self.equivalent != (self.witness is not None):
            raise ValueError("a verdict is equivalent exactly when it carries a witness")
        return self


class TraceEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    verdict: EquivalenceVerdict


class EquivalenceTrace(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_max: int
    entries: List[TraceEntry]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def equivalent(self) -> bool:
        return all(entry.verdict.equivalent for entry in self.entries)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def first_failure(self) -> Optional[int]:
        return next((entry.n for entry in self.entries if not entry.verdict.equivalent), None)
