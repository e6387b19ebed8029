import logging
from fractions import Fraction
from math import lcm
from typing import Callable, Dict, List, Sequence, Tuple

from sympy import factorint

from ap_equivalence.domain.exceptions import DuplicateExponent, MixedSymbolTables, UnknownName
from ap_equivalence.domain.models.exponent import Exponent, IntegralBasis, QBasis, SymbolTable
from ap_equivalence.domain.models.matrices import IntegerMatrix, RationalMatrix
from ap_equivalence.domain.models.reports import IntegralBasisSummary
from ap_equivalence.services.linear_algebra_service import hnf, inverse_unimodular

logger = logging.getLogger(__name__)


def check_exponents(exponents: Sequence[Exponent], where: str = "exponent list") -> SymbolTable:
    """Shared table and pairwise distinct coordinates, or raise."""
    if not exponents:
        raise ValueError(f"{where} is empty")
    table = exponents[0].table
    seen: Dict[Tuple[Fraction, ...], int] = {}
    for j, e in enumerate(exponents):
        if e.table != table:
            raise MixedSymbolTables(f"{where} mixes symbol tables")
        if e.coords in seen:
            raise DuplicateExponent(j, seen[e.coords], where)
        seen[e.coords] = j
    return table


def qbasis(exponents: Sequence[Exponent]) -> QBasis:
    """Q-basis picked from the input in order (first independent exponent wins), with exact r_{j,k}.

    The pivot columns of the reduced echelon form of the coordinate matrix (one column per
    exponent) are the basis; column j of the reduced form holds the representation of exponent j.
    """
    table = check_exponents(exponents)
    columns = RationalMatrix.from_rows([list(e.coords) for e in exponents], cols=table.size).transpose()
    reduced, pivots = columns.to_domain().rref()
    echelon = RationalMatrix.from_domain(reduced)
    basis_indices = tuple(pivots)
    representation = RationalMatrix(
        len(exponents),
        len(basis_indices),
        tuple(tuple(echelon.entries[i][j] for i in range(len(basis_indices))) for j in range(len(exponents))),
    )
    logger.debug(f"Q-basis of {len(exponents)} exponents has dimension {len(basis_indices)}")
    return QBasis(tuple(exponents), basis_indices, representation)


def integral_basis(exponents: Sequence[Exponent]) -> IntegralBasis:
    """Z-module basis of the module the exponents generate (common denominator, then HNF)."""
    table = check_exponents(exponents)
    d = lcm(*(c.denominator for e in exponents for c in e.coords))
    scaled = IntegerMatrix.from_rows([[(c * d).numerator for c in e.coords] for e in exponents], cols=table.size)
    h, t = hnf(scaled)
    rank = sum(1 for row in h.entries if any(row))
    basis = tuple(table.exponent([Fraction(x, d) for x in row]) for row in h.entries[:rank])
    t_inv = inverse_unimodular(t)
    representation = IntegerMatrix.from_rows([row[:rank] for row in t_inv.entries], cols=rank)
    return IntegralBasis(tuple(exponents), basis, representation)


def integral_basis_trace(generator: Callable[[int], Exponent], n_max: int) -> List[IntegralBasisSummary]:
    """Integral basis of the first n exponents for n = 1..n_max.

    Nested sets generate nested modules, so each step only reduces the previous basis together
    with the new exponent.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    summaries: List[IntegralBasisSummary] = []
    exponents: List[Exponent] = []
    previous_basis: Tuple[Exponent, ...] = ()
    for n in range(1, n_max + 1):
        new = generator(n)
        exponents.append(new)
        check_exponents(exponents, where=f"first {n} generated exponents")
        candidates = list(previous_basis) + ([new] if new not in previous_basis else [])
        module = integral_basis(candidates)
        previous_basis = module.basis
        summaries.append(
            IntegralBasisSummary(
                n=n,
                dimension=module.dimension,
                basis=[list(g.coords) for g in module.basis],
                basis_labels=[g.label() for g in module.basis],
                denominator=module.denominator,
            )
        )
    logger.info(f"Integral basis trace up to n = {n_max}: final denominator {summaries[-1].denominator}")
    return summaries


def lambda_zero(table: SymbolTable) -> Callable[[int], Exponent]:
    """The exponents 2j - 1 + 1/(2(2j - 1)), j >= 1."""

    def generator(j: int) -> Exponent:
        odd = 2 * j - 1
        return table.rational(odd + Fraction(1, 2 * odd))

    return generator


def factorize(n: int) -> Dict[int, int]:
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    return {int(p): int(k) for p, k in factorint(n).items()}


def log_coordinates(table: SymbolTable, n: int, scale: Fraction | int = 1) -> Dict[str, Fraction]:
    """scale * log n written over the prime-log symbols L<p> of the table."""
    parts: Dict[str, Fraction] = {}
    for p, k in factorize(n).items():
        name = f"L{p}"
        if name not in table.names:
            raise UnknownName(name, kind="symbol")
        parts[name] = Fraction(scale) * k
    return parts


def prime_log_exponent(table: SymbolTable, n: int, sign: int = -1) -> Exponent:
    """sign * log n, e.g. the exponent of n^{-s} for sign = -1."""
    return table.from_parts(log_coordinates(table, n, sign))
