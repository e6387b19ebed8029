"""Exact exponents: rational coordinate vectors over declared real symbols.

Declared symbols are assumed Q-linearly independent; that is the caller's contract and is
never checked. Two exponents are equal exactly when their coordinates are equal, whatever
their numeric values.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Mapping, Sequence, Tuple

import mpmath

from ap_equivalence.config import get_settings
from ap_equivalence.domain.exceptions import DimensionMismatch, DuplicateName, MixedSymbolTables
from ap_equivalence.domain.models.matrices import IntegerMatrix, RationalMatrix

UNIT = "1"


def _parse_literal(literal: str) -> mpmath.mpf:
    with mpmath.workdps(get_settings().symbol_digits):
        return mpmath.mpf(literal)


@dataclass(frozen=True)
class SymbolTable:
    """Ordered symbols; index 0 is the implicit unit symbol "1" with value 1."""

    names: Tuple[str, ...] = (UNIT,)
    literals: Tuple[str, ...] = ("1",)

    def __post_init__(self):
        if not self.names or self.names[0] != UNIT or self.literals[0] != "1":
            raise ValueError("symbol table must start with the unit symbol '1' = 1")
        if len(self.names) != len(self.literals):
            raise DimensionMismatch(len(self.names), len(self.literals))
        if len(set(self.names)) != len(self.names):
            raise DuplicateName(f"duplicate symbol names in {self.names}")
        for name, value in zip(self.names, self.values):
            if not mpmath.isfinite(value) or value == 0:
                raise ValueError(f"symbol '{name}' must have a finite nonzero value")

    @classmethod
    def from_declarations(cls, declarations: Iterable[Tuple[str, str]]) -> "SymbolTable":
        names, literals = [UNIT], ["1"]
        for name, literal in declarations:
            if name == UNIT:
                raise DuplicateName("the unit symbol '1' is implicit")
            names.append(name)
            literals.append(literal.strip())
        return cls(tuple(names), tuple(literals))

    @classmethod
    def prime_logs(cls, primes: Sequence[int]) -> "SymbolTable":
        digits = get_settings().symbol_digits
        with mpmath.workdps(digits + 5):
            literals = [mpmath.nstr(mpmath.log(p), digits, strip_zeros=False) for p in primes]
        return cls.from_declarations((f"L{p}", lit) for p, lit in zip(primes, literals))

    @cached_property
    def values(self) -> Tuple[mpmath.mpf, ...]:
        return tuple(_parse_literal(lit) for lit in self.literals)

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def rescaled(self, factor: str) -> "SymbolTable":
        """Same symbols with every declared (non-unit) value multiplied by factor."""
        with mpmath.workdps(get_settings().symbol_digits):
            scaled = [mpmath.nstr(v * mpmath.mpf(factor), get_settings().symbol_digits) for v in self.values[1:]]
        return SymbolTable(self.names, ("1", *scaled))

    def exponent(self, coords: Sequence[Fraction | int | str]) -> "Exponent":
        return Exponent(self, tuple(Fraction(c) for c in coords))

    def rational(self, value: Fraction | int | str) -> "Exponent":
        return self.exponent([value] + [0] * (self.size - 1))

    def from_parts(self, parts: Mapping[str, Fraction | int]) -> "Exponent":
        coords = [Fraction(0)] * self.size
        for name, c in parts.items():
            coords[self.index(name)] += Fraction(c)
        return Exponent(self, tuple(coords))

    def zero(self) -> "Exponent":
        return Exponent(self, (Fraction(0),) * self.size)


@dataclass(frozen=True)
class Exponent:
    table: SymbolTable = field(repr=False)
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.table.size:
            raise DimensionMismatch(self.table.size, len(self.coords))

    @cached_property
    def numeric_value(self) -> mpmath.mpf:
        with mpmath.workdps(get_settings().symbol_digits):
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * v for c, v in zip(self.coords, self.table.values) if c)

    def __float__(self) -> float:
        return float(self.numeric_value)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        """True when only the unit coordinate is nonzero."""
        return not any(self.coords[1:])

    def __add__(self, other: "Exponent") -> "Exponent":
        _check_same_table(self, other)
        return Exponent(self.table, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Exponent") -> "Exponent":
        _check_same_table(self, other)
        return Exponent(self.table, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Exponent":
        return Exponent(self.table, tuple(-a for a in self.coords))

    def scaled(self, q: Fraction | int) -> "Exponent":
        return Exponent(self.table, tuple(a * q for a in self.coords))

    def label(self) -> str:
        parts = []
        for name, c in zip(self.table.names, self.coords):
            if c:
                parts.append(str(c) if name == UNIT else f"{c}*{name}")
        return " + ".join(parts) if parts else "0"


def _check_same_table(a: Exponent, b: Exponent) -> None:
    if a.table != b.table:
        raise MixedSymbolTables("exponents live over different symbol tables")


@dataclass(frozen=True)
class QBasis:
    """A Q-basis chosen among the input exponents, with row j of representation giving lambda_j."""

    exponents: Tuple[Exponent, ...]
    basis_indices: Tuple[int, ...]
    representation: RationalMatrix

    @property
    def basis(self) -> Tuple[Exponent, ...]:
        return tuple(self.exponents[i] for i in self.basis_indices)

    @property
    def dimension(self) -> int:
        return len(self.basis_indices)

    def reconstruct(self, j: int) -> Tuple[Fraction, ...]:
        row = self.representation.entries[j]
        size = self.exponents[0].table.size if self.exponents else 0
        return tuple(sum((r * g.coords[k] for r, g in zip(row, self.basis)), Fraction(0)) for k in range(size))


@dataclass(frozen=True)
class IntegralBasis:
    """A Z-module basis of the module generated by the exponents; every r_{j,k} is an integer."""

    exponents: Tuple[Exponent, ...]
    basis: Tuple[Exponent, ...]
    representation: IntegerMatrix

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def denominator(self) -> int:
        """Common denominator of the basis coordinates."""
        return lcm(*(c.denominator for g in self.basis for c in g.coords))

    def reconstruct(self, j: int) -> Tuple[Fraction, ...]:
        row = self.representation.entries[j]
        size = self.exponents[0].table.size if self.exponents else 0
        return tuple(sum((r * g.coords[k] for r, g in zip(row, self.basis)), Fraction(0)) for k in range(size))
