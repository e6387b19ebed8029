import logging
import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

import mpmath
import numpy as np

from ap_equivalence.config import get_settings
from ap_equivalence.domain.exceptions import ExactPhaseClosure, MagnitudeOverflow, TruncationOutOfRange
from ap_equivalence.domain.models.exponent import Exponent
from ap_equivalence.domain.models.exponential_sum import (
    Coefficient,
    ComplexPoint,
    ExactCoefficient,
    ExponentialSum,
    NumericCoefficient,
    Term,
)

logger = logging.getLogger(__name__)

# exp(709.78) is the largest finite double
OVERFLOW_LOG = 700.0


def _merge_exact(contributions: List[ExactCoefficient], label: str) -> ExactCoefficient:
    """Add exact coefficients that lie on one line through the origin.

    Each nonzero contribution sits on the line of angle turns mod 1/2; on a common line the sum
    is a signed sum of moduli. Contributions on two different lines would need an irrational
    modulus or phase in general and are refused.
    """
    nonzero = [c for c in contributions if not c.is_zero()]
    if not nonzero:
        return ExactCoefficient.zero()
    line = nonzero[0].turns % Fraction(1, 2)
    total = Fraction(0)
    for c in nonzero:
        if c.turns % Fraction(1, 2) != line:
            raise ExactPhaseClosure(
                f"coefficients {nonzero[0]} and {c} of e^({label} s) have incompatible phases; "
                "their sum has no exact (rational modulus, rational turns) form"
            )
        total += c.modulus if c.turns == line else -c.modulus
    return ExactCoefficient(total, line)


def normalize(f: ExponentialSum) -> ExponentialSum:
    """Merge repeated exponents, drop zero terms; first-occurrence order is kept."""
    groups: Dict[Tuple[Fraction, ...], List[Term]] = {}
    for term in f.terms:
        groups.setdefault(term.exponent.coords, []).append(term)

    merged: List[Term] = []
    for group in groups.values():
        exponent = group[0].exponent
        if f.is_exact:
            coefficient: Coefficient = _merge_exact([t.coefficient for t in group], exponent.label())
        else:
            coefficient = NumericCoefficient(sum((t.coefficient.to_complex() for t in group), 0j))
        if not coefficient.is_zero():
            merged.append(Term(exponent, coefficient))
    if len(merged) != len(f.terms):
        logger.debug(f"Normalizing '{f.name}' went from {len(f.terms)} to {len(merged)} terms")
    return f.with_terms(merged)


def _check_overflow(lams: np.ndarray, sigma: np.ndarray) -> None:
    if not sigma.size:
        return
    logs = np.maximum(lams * float(np.max(sigma)), lams * float(np.min(sigma)))
    if logs.size and np.max(logs) > OVERFLOW_LOG:
        j = int(np.argmax(logs))
        raise MagnitudeOverflow(j, float(logs[j]))


def evaluate(f: ExponentialSum, s: Union[ComplexPoint, complex]) -> complex:
    """f(s) with compensated summation of the real and imaginary parts."""
    point = ComplexPoint.of(s)
    values: List[complex] = []
    for j, term in enumerate(f.terms):
        lam = float(term.exponent)
        if lam * point.sigma > OVERFLOW_LOG:
            raise MagnitudeOverflow(j, lam * point.sigma)
        values.append(term.coefficient.to_complex() * np.exp(lam * point.s))
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


class SumEvaluator:
    """Vectorized f and f' on numpy arrays of points."""

    def __init__(self, f: ExponentialSum):
        self.sum = f
        self.lams = np.array([float(t.exponent) for t in f.terms], dtype=float)
        self.coefficients = np.array([t.coefficient.to_complex() for t in f.terms], dtype=complex)
        self.moduli = np.abs(self.coefficients)

    def phase_matrix(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=complex)
        _check_overflow(self.lams, s.real)
        return np.exp(np.multiply.outer(s, self.lams))

    def __call__(self, s: np.ndarray) -> np.ndarray:
        return self.phase_matrix(s) @ self.coefficients

    def derivative(self, s: np.ndarray) -> np.ndarray:
        return self.phase_matrix(s) @ (self.coefficients * self.lams)

    def value_and_derivative(self, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        e = self.phase_matrix(s)
        return e @ self.coefficients, e @ (self.coefficients * self.lams)

    def upper_bound(self, sigma: np.ndarray) -> np.ndarray:
        """sum_j |a_j| e^{lambda_j sigma}, a bound for |f| on the line Re s = sigma."""
        sigma = np.asarray(sigma, dtype=float)
        _check_overflow(self.lams, sigma)
        return np.exp(np.multiply.outer(sigma, self.lams)) @ self.moduli

    def lower_bound(self, sigma: np.ndarray) -> np.ndarray:
        """max over j of |a_j| e^{lambda_j sigma} minus the rest, clipped at 0."""
        sigma = np.asarray(sigma, dtype=float)
        _check_overflow(self.lams, sigma)
        sizes = np.exp(np.multiply.outer(sigma, self.lams)) * self.moduli
        if not sizes.shape[-1]:
            return np.zeros(sigma.shape)
        top = np.max(sizes, axis=-1)
        return np.clip(2 * top - np.sum(sizes, axis=-1), 0.0, None)


def translate(f: ExponentialSum, tau: float, tau_turns: Optional[Fraction] = None) -> ExponentialSum:
    """f(s + i tau) as a sum: a_j becomes a_j e^{i lambda_j tau}.

    When tau = 2 pi tau_turns and every exponent is rational, lambda_j tau is an exact number of
    turns and exact coefficients stay exact.
    """
    name = f"{f.name}_shift"
    if tau_turns is not None:
        tau = 2 * math.pi * float(tau_turns)
        if f.is_exact and all(t.exponent.is_rational() for t in f.terms):
            return f.with_terms(
                [Term(t.exponent, t.coefficient.rotated(t.exponent.coords[0] * tau_turns)) for t in f.terms], name
            )
    if tau == 0:
        return f.renamed(name)

    terms = []
    with mpmath.workdps(get_settings().symbol_digits):
        for t in f.terms:
            rotation = complex(mpmath.expj(t.exponent.numeric_value * mpmath.mpf(tau)))
            terms.append(Term(t.exponent, NumericCoefficient(t.coefficient.to_complex() * rotation)))
    return f.with_terms(terms, name)


def truncate(f: ExponentialSum, n: int) -> ExponentialSum:
    """First n terms in declaration order."""
    if not 1 <= n <= len(f.terms):
        raise TruncationOutOfRange(f"cannot truncate '{f.name}' with {len(f.terms)} terms to n = {n}")
    return f.with_terms(f.terms[:n])


def conjugate(f: ExponentialSum) -> ExponentialSum:
    """The sum g with g(s) = conj(f(conj(s)))."""
    return f.with_terms([Term(t.exponent, t.coefficient.conjugate()) for t in f.terms], f"{f.name}_conj")


def scale(f: ExponentialSum, factor: Union[ExactCoefficient, complex]) -> ExponentialSum:
    if isinstance(factor, ExactCoefficient) and f.is_exact:
        terms = [Term(t.exponent, t.coefficient * factor) for t in f.terms]
    else:
        z = factor.to_complex() if isinstance(factor, ExactCoefficient) else complex(factor)
        terms = [Term(t.exponent, NumericCoefficient(t.coefficient.to_complex() * z)) for t in f.terms]
    return normalize(f.with_terms(terms))


def twist(f: ExponentialSum, psi_turns: Callable[[Exponent], Fraction], name: Optional[str] = None) -> ExponentialSum:
    """Multiply each a_j by e^{2 pi i psi_turns(lambda_j)}."""
    if f.is_exact:
        terms = [Term(t.exponent, t.coefficient.rotated(Fraction(psi_turns(t.exponent)))) for t in f.terms]
    else:
        terms = []
        for t in f.terms:
            rotation = ExactCoefficient(Fraction(1), Fraction(psi_turns(t.exponent))).to_complex()
            terms.append(Term(t.exponent, NumericCoefficient(t.coefficient.to_complex() * rotation)))
    return f.with_terms(terms, name or f"{f.name}_twist")


def negate(f: ExponentialSum, name: Optional[str] = None) -> ExponentialSum:
    return scale(f, ExactCoefficient(Fraction(1), Fraction(1, 2)) if f.is_exact else -1).renamed(name or f"neg_{f.name}")
