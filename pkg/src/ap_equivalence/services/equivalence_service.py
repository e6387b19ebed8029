"""Deciding *-equivalence and finite Bohr equivalence of exponential sums.

Phases are handled in turns, so the congruence mod 2 pi becomes mod 1 and the whole decision is
exact rational arithmetic. For f1 = sum a_j e^{lambda_j s} and f2 = sum b_j e^{lambda_j s}:

    q_j = turns(b_j) - turns(a_j) mod 1           on the common nonzero support
    R   = coordinates of lambda_j over a Q-basis drawn from the support
    U   = basis of the relations {c in Z^N : c^T R = 0}

A Q-linear psi with b_j = a_j e^{i psi(lambda_j)} exists iff U q is integral.
"""
import logging
from fractions import Fraction
from typing import Callable, List, Literal, Optional, Sequence, Tuple

from ap_equivalence.config import get_settings
from ap_equivalence.domain.exceptions import (
    InternalInvariantError,
    MixedSymbolTables,
    NonExactInput,
    TruncationOutOfRange,
    VerdictMismatch,
)
from ap_equivalence.domain.models.exponent import Exponent, SymbolTable
from ap_equivalence.domain.models.exponential_sum import Coefficient, ExponentialSum
from ap_equivalence.domain.models.matrices import RationalMatrix
from ap_equivalence.domain.models.verdict import (
    Certificate,
    EquivalenceTrace,
    EquivalenceVerdict,
    PhaseVector,
    TraceEntry,
    Witness,
)
from ap_equivalence.services.basis_service import check_exponents, qbasis
from ap_equivalence.services.linear_algebra_service import kernel_lattice, solve_mod_one, solve_rational
from ap_equivalence.services.sum_service import truncate

logger = logging.getLogger(__name__)

Definition = Literal["star", "bohr"]


def aligned_support(f1: ExponentialSum, f2: ExponentialSum) -> Tuple[List[Exponent], bool]:
    """f1's exponents in order, then f2's extras; the flag is set when zero fill was needed."""
    if f1.table != f2.table:
        raise MixedSymbolTables(f"sums '{f1.name}' and '{f2.name}' use different symbol tables")
    for f in (f1, f2):
        if f.terms:
            check_exponents(f.exponents, where=f"sum '{f.name}'")
    support = list(f1.exponents)
    known = {e.coords for e in support}
    support += [e for e in f2.exponents if e.coords not in known]
    zero_filled = len(support) != len(f1.terms) or len(support) != len(f2.terms)
    return support, zero_filled


def _modulus(c: Optional[Coefficient]):
    return Fraction(0) if c is None else c.modulus


def _moduli_differ(a: Optional[Coefficient], b: Optional[Coefficient]) -> bool:
    ma, mb = _modulus(a), _modulus(b)
    if isinstance(ma, Fraction) and isinstance(mb, Fraction):
        return ma != mb
    ma, mb = float(ma), float(mb)
    if ma == 0 or mb == 0:
        return ma != mb
    return abs(ma - mb) > get_settings().modulus_rtol * max(ma, mb)


def _is_zero(c: Optional[Coefficient]) -> bool:
    return c is None or c.is_zero()


def _verdict(definition: Definition, f1: ExponentialSum, support: List[Exponent], zero_filled: bool, **outcome) -> EquivalenceVerdict:
    return EquivalenceVerdict(
        definition=definition,
        equivalent=outcome.get("witness") is not None,
        symbols=list(f1.table.names),
        support=[list(e.coords) for e in support],
        support_labels=[e.label() for e in support],
        zero_filled=zero_filled,
        **outcome,
    )


def _decide(f1: ExponentialSum, f2: ExponentialSum, definition: Definition) -> EquivalenceVerdict:
    support, zero_filled = aligned_support(f1, f2)
    a = [f1.coefficient_of(e) for e in support]
    b = [f2.coefficient_of(e) for e in support]

    for j, (aj, bj) in enumerate(zip(a, b)):
        if _moduli_differ(aj, bj):
            logger.info(f"'{f1.name}' vs '{f2.name}': moduli differ at support index {j}")
            return _verdict(definition, f1, support, zero_filled, modulus_mismatch=j)

    if not (f1.is_exact and f2.is_exact):
        raise NonExactInput(
            f"'{f1.name}' and '{f2.name}' have equal moduli but numeric coefficients; "
            "phase relations are only decided for exact coefficients"
        )

    indices = [j for j in range(len(support)) if not _is_zero(a[j])]
    q = [(b[j].turns - a[j].turns) % 1 for j in indices]
    phases = PhaseVector(indices=indices, q=q)
    if not indices:
        witness = Witness(basis_indices=[], basis=[], representation=[], turns=[])
        return _verdict(definition, f1, support, zero_filled, phases=phases, witness=witness)

    exponents = [support[j] for j in indices]
    basis = qbasis(exponents)
    r = basis.representation
    u = kernel_lattice(r)
    uq = u.apply(q)
    violated = next((i for i, value in enumerate(uq) if Fraction(value).denominator != 1), None)

    if violated is not None:
        relation = [0] * len(support)
        for j, c in zip(indices, u.entries[violated]):
            relation[j] = c
        certificate = Certificate(relation=relation, defect=Fraction(uq[violated]) % 1)
        logger.info(f"'{f1.name}' vs '{f2.name}': relation {relation} violated with defect {certificate.defect}")
        return _verdict(definition, f1, support, zero_filled, phases=phases, certificate=certificate)

    y = solve_mod_one(r, q)
    if y is None:
        raise InternalInvariantError(f"U q = {uq} is integral but R y = q has no solution mod 1")
    witness = Witness(
        basis_indices=[indices[i] for i in basis.basis_indices],
        basis=[list(g.coords) for g in basis.basis],
        representation=[list(row) for row in r.entries],
        turns=[yk % 1 for yk in y],
    )
    logger.info(f"'{f1.name}' vs '{f2.name}': equivalent on a basis of dimension {basis.dimension}")
    return _verdict(definition, f1, support, zero_filled, phases=phases, witness=witness)


def star_equivalent(f1: ExponentialSum, f2: ExponentialSum) -> EquivalenceVerdict:
    return _decide(f1, f2, "star")


def bohr_equivalent_finite(f1: ExponentialSum, f2: ExponentialSum) -> EquivalenceVerdict:
    """Bohr equivalence over the finite support: one psi on the whole span."""
    return _decide(f1, f2, "bohr")


def equivalence_trace(f1: ExponentialSum, f2: ExponentialSum, n_max: int) -> EquivalenceTrace:
    """star_equivalent on the n-term truncations (declaration order), n = 1..n_max."""
    if n_max < 1 or n_max > min(len(f1.terms), len(f2.terms)):
        raise TruncationOutOfRange(
            f"n_max = {n_max} outside 1..{min(len(f1.terms), len(f2.terms))} for '{f1.name}' and '{f2.name}'"
        )
    entries = [TraceEntry(n=n, verdict=star_equivalent(truncate(f1, n), truncate(f2, n))) for n in range(1, n_max + 1)]
    trace = EquivalenceTrace(n_max=n_max, entries=entries)
    logger.info(f"Trace of '{f1.name}' vs '{f2.name}' up to {n_max}: first failure at {trace.first_failure}")
    return trace


def _psi(witness: Witness, row: Sequence[Fraction]) -> Fraction:
    return sum((r * y for r, y in zip(row, witness.turns)), Fraction(0))


def verify_verdict(verdict: EquivalenceVerdict, f1: ExponentialSum, f2: ExponentialSum) -> bool:
    """Re-check a verdict from scratch in exact arithmetic; raise VerdictMismatch if it fails."""
    support, _ = aligned_support(f1, f2)
    if verdict.support != [list(e.coords) for e in support]:
        raise VerdictMismatch("support differs from the sums' exponents")
    a = [f1.coefficient_of(e) for e in support]
    b = [f2.coefficient_of(e) for e in support]

    if verdict.modulus_mismatch is not None:
        j = verdict.modulus_mismatch
        if not 0 <= j < len(support) or not _moduli_differ(a[j], b[j]):
            raise VerdictMismatch(f"moduli agree at support index {j}")
        return True

    if not (f1.is_exact and f2.is_exact):
        raise VerdictMismatch("phase verdicts need exact coefficients")
    if any(_moduli_differ(aj, bj) for aj, bj in zip(a, b)):
        raise VerdictMismatch("a phase verdict was issued for sums with different moduli")
    nonzero = [j for j in range(len(support)) if not _is_zero(a[j])]

    if verdict.certificate is not None:
        c = verdict.certificate.relation
        if len(c) != len(support) or any(c[j] for j in range(len(support)) if j not in nonzero):
            raise VerdictMismatch("relation is not indexed by the common nonzero support")
        size = f1.table.size
        if any(sum((cj * e.coords[k] for cj, e in zip(c, support)), Fraction(0)) for k in range(size)):
            raise VerdictMismatch(f"{c} is not a relation among the exponents")
        defect = sum((c[j] * (b[j].turns - a[j].turns) for j in nonzero), Fraction(0)) % 1
        if defect == 0 or defect != verdict.certificate.defect:
            raise VerdictMismatch(f"defect recomputes to {defect}, verdict says {verdict.certificate.defect}")
        return True

    witness = verdict.witness
    if witness is None:
        raise VerdictMismatch("verdict carries no outcome")
    if len(witness.representation) != len(nonzero):
        raise VerdictMismatch("representation does not cover the common nonzero support")
    for k, i in enumerate(witness.basis_indices):
        if not 0 <= i < len(support) or list(support[i].coords) != witness.basis[k]:
            raise VerdictMismatch(f"basis element {k} is not support exponent {i}")
    for j, row in zip(nonzero, witness.representation):
        rebuilt = [sum((r * g[k] for r, g in zip(row, witness.basis)), Fraction(0)) for k in range(f1.table.size)]
        if rebuilt != list(support[j].coords):
            raise VerdictMismatch(f"representation row does not rebuild exponent {support[j].label()}")
        if (a[j].turns + _psi(witness, row)) % 1 != b[j].turns:
            raise VerdictMismatch(f"b_j != a_j e^(i psi(lambda_j)) at {support[j].label()}")
    return True


def compose_witnesses(
    v12: EquivalenceVerdict, v23: EquivalenceVerdict, f1: ExponentialSum, f3: ExponentialSum
) -> EquivalenceVerdict:
    """Witness for (f1, f3) from witnesses for (f1, f2) and (f2, f3) on the same basis."""
    if v12.witness is None or v23.witness is None:
        raise ValueError("both verdicts must be equivalent to compose their witnesses")
    w12, w23 = v12.witness, v23.witness
    if w12.basis != w23.basis or w12.representation != w23.representation or v12.support != v23.support:
        raise ValueError("witnesses are expressed over different supports or bases")
    support, zero_filled = aligned_support(f1, f3)
    witness = Witness(
        basis_indices=w12.basis_indices,
        basis=w12.basis,
        representation=w12.representation,
        turns=[(y12 + y23) % 1 for y12, y23 in zip(w12.turns, w23.turns)],
    )
    phases = PhaseVector(
        indices=v12.phases.indices,
        q=[(q12 + q23) % 1 for q12, q23 in zip(v12.phases.q, v23.phases.q)],
    )
    return _verdict(v12.definition, f1, support, zero_filled, phases=phases, witness=witness)


def phase_map(witness: Witness, table: SymbolTable) -> Callable[[Exponent], Fraction]:
    """psi/2pi as a function on the Q-span of the witness basis."""
    basis_t = RationalMatrix(
        table.size,
        len(witness.basis),
        tuple(tuple(g[k] for g in witness.basis) for k in range(table.size)),
    )

    def psi_turns(e: Exponent) -> Fraction:
        r = solve_rational(basis_t, e.coords)
        if r is None:
            raise ValueError(f"{e.label()} is outside the span of the witness basis")
        return _psi(witness, r) % 1

    return psi_turns
