from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from ap_equivalence.domain.exceptions import DimensionMismatch


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense row-major matrix of Python ints (arbitrary precision)."""

    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("nonnegative dimensions", (self.rows, self.cols))
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise DimensionMismatch((self.rows, self.cols), [len(row) for row in self.entries])

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, entries)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def to_domain(self) -> DomainMatrix:
        if not self.rows or not self.cols:
            return DomainMatrix.zeros(self.shape, ZZ)
        return DomainMatrix([[ZZ(x) for x in row] for row in self.entries], self.shape, ZZ)

    @classmethod
    def from_domain(cls, m: DomainMatrix) -> "IntegerMatrix":
        rows, cols = m.shape
        if not rows:
            return cls.zeros(0, cols)
        return cls(rows, cols, tuple(tuple(int(x) for x in row) for row in m.to_list()))

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(self.cols, other.rows)
        if not self.rows or not other.cols or not self.cols:
            return IntegerMatrix.zeros(self.rows, other.cols)
        return IntegerMatrix.from_domain(self.to_domain().matmul(other.to_domain()))

    def apply(self, v: Sequence[int | Fraction]) -> Tuple:
        if len(v) != self.cols:
            raise DimensionMismatch(self.cols, len(v))
        return tuple(sum((a * b for a, b in zip(row, v)), 0) for row in self.entries)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)


@dataclass(frozen=True)
class RationalMatrix:
    """Dense row-major matrix of Fractions; houses the representation coefficients r_{j,k}."""

    rows: int
    cols: int
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("nonnegative dimensions", (self.rows, self.cols))
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise DimensionMismatch((self.rows, self.cols), [len(row) for row in self.entries])

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int | Fraction | str]], cols: int | None = None) -> "RationalMatrix":
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, entries)

    @classmethod
    def from_integer(cls, m: IntegerMatrix) -> "RationalMatrix":
        return cls(m.rows, m.cols, tuple(tuple(Fraction(x) for x in row) for row in m.entries))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def to_lists(self) -> list[list[Fraction]]:
        return [list(row) for row in self.entries]

    def to_domain(self) -> DomainMatrix:
        if not self.rows or not self.cols:
            return DomainMatrix.zeros(self.shape, QQ)
        return DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in self.entries], self.shape, QQ)

    @classmethod
    def from_domain(cls, m: DomainMatrix) -> "RationalMatrix":
        rows, cols = m.shape
        if not rows:
            return cls(0, cols, ())
        field = m.convert_to(QQ).to_list()
        return cls(rows, cols, tuple(tuple(Fraction(int(x.numerator), int(x.denominator)) for x in row) for row in field))

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def apply(self, v: Sequence[int | Fraction]) -> Tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise DimensionMismatch(self.cols, len(v))
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.entries)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    def to_integer(self) -> IntegerMatrix:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return IntegerMatrix(self.rows, self.cols, tuple(tuple(x.numerator for x in row) for row in self.entries))
