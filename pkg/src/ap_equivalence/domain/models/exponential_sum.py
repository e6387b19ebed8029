"""Finite exponential sums f(s) = sum_j a_j e^{lambda_j s} over a symbol table."""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Literal, Optional, Tuple, Union

import mpmath

from ap_equivalence.config import get_settings
from ap_equivalence.domain.exceptions import MixedCoefficientModes, MixedSymbolTables
from ap_equivalence.domain.models.exponent import Exponent, IntegralBasis, SymbolTable


@dataclass(frozen=True)
class ExactCoefficient:
    """modulus * e^{2 pi i turns} with both parts rational; zero is canonically (0, 0)."""

    modulus: Fraction
    turns: Fraction = Fraction(0)

    def __post_init__(self):
        modulus, turns = Fraction(self.modulus), Fraction(self.turns)
        if modulus < 0:
            modulus, turns = -modulus, turns + Fraction(1, 2)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "turns", turns % 1 if modulus else Fraction(0))

    @classmethod
    def zero(cls) -> "ExactCoefficient":
        return cls(Fraction(0))

    def is_zero(self) -> bool:
        return self.modulus == 0

    def to_complex(self) -> complex:
        with mpmath.workdps(get_settings().symbol_digits):
            z = mpmath.mpf(self.modulus.numerator) / self.modulus.denominator * mpmath.expjpi(2 * mpmath.mpf(self.turns.numerator) / self.turns.denominator)
            return complex(z)

    def __mul__(self, other: "ExactCoefficient") -> "ExactCoefficient":
        return ExactCoefficient(self.modulus * other.modulus, self.turns + other.turns)

    def rotated(self, turns: Fraction) -> "ExactCoefficient":
        return ExactCoefficient(self.modulus, self.turns + turns)

    def conjugate(self) -> "ExactCoefficient":
        return ExactCoefficient(self.modulus, -self.turns)

    def __str__(self) -> str:
        return f"{self.modulus}@{self.turns}"


@dataclass(frozen=True)
class NumericCoefficient:
    value: complex

    def __post_init__(self):
        value = complex(self.value)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ValueError(f"numeric coefficient must be finite, got {value}")
        object.__setattr__(self, "value", value)

    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def modulus(self) -> float:
        return abs(self.value)

    def to_complex(self) -> complex:
        return self.value

    def conjugate(self) -> "NumericCoefficient":
        return NumericCoefficient(self.value.conjugate())

    def __str__(self) -> str:
        return f"({self.value.real!r}, {self.value.imag!r})"


Coefficient = Union[ExactCoefficient, NumericCoefficient]
CoefficientMode = Literal["exact", "numeric"]


def coefficient_mode(c: Coefficient) -> CoefficientMode:
    return "exact" if isinstance(c, ExactCoefficient) else "numeric"


@dataclass(frozen=True)
class Term:
    exponent: Exponent
    coefficient: Coefficient


@dataclass(frozen=True)
class ExponentialSum:
    """Terms kept in declaration order; sorted_terms gives the ascending-exponent view.

    strip is the declared half-plane intersection (alpha, beta) the sum lives on; finite sums
    default to the whole plane.
    """

    table: SymbolTable = field(repr=False)
    terms: Tuple[Term, ...]
    name: str = "f"
    strip: Tuple[float, float] = (-math.inf, math.inf)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for term in self.terms:
            if term.exponent.table != self.table:
                raise MixedSymbolTables(f"sum '{self.name}' has a term over another symbol table")
        if len({coefficient_mode(t.coefficient) for t in self.terms}) > 1:
            raise MixedCoefficientModes(self.name)
        if not self.strip[0] < self.strip[1]:
            raise ValueError(f"sum '{self.name}' has an empty strip {self.strip}")

    @property
    def mode(self) -> CoefficientMode:
        return coefficient_mode(self.terms[0].coefficient) if self.terms else "exact"

    @property
    def is_exact(self) -> bool:
        return self.mode == "exact"

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def exponents(self) -> Tuple[Exponent, ...]:
        return tuple(t.exponent for t in self.terms)

    @cached_property
    def sorted_terms(self) -> Tuple[Term, ...]:
        return tuple(sorted(self.terms, key=lambda t: t.exponent.numeric_value))

    @cached_property
    def coefficient_map(self) -> Dict[Tuple[Fraction, ...], Coefficient]:
        return {t.exponent.coords: t.coefficient for t in self.terms}

    def coefficient_of(self, exponent: Exponent) -> Optional[Coefficient]:
        return self.coefficient_map.get(exponent.coords)

    def renamed(self, name: str) -> "ExponentialSum":
        return ExponentialSum(self.table, self.terms, name, self.strip)

    def with_terms(self, terms, name: Optional[str] = None) -> "ExponentialSum":
        return ExponentialSum(self.table, tuple(terms), name or self.name, self.strip)


@dataclass(frozen=True)
class ComplexPoint:
    sigma: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise ValueError(f"point ({self.sigma}, {self.t}) is not finite")

    @classmethod
    def of(cls, s: Union[complex, "ComplexPoint"]) -> "ComplexPoint":
        if isinstance(s, ComplexPoint):
            return s
        s = complex(s)
        return cls(s.real, s.imag)

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)


@dataclass(frozen=True)
class BFPolynomial:
    """A Bochner-Fejer polynomial: the base sum with term j scaled by weights[j]."""

    base: ExponentialSum
    orders: Tuple[int, ...]
    module: Optional[IntegralBasis]
    weights: Tuple[Fraction, ...]
    realized: ExponentialSum

    @property
    def kept_terms(self) -> int:
        return sum(1 for w in self.weights if w)
