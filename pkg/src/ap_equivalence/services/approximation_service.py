import logging
import math
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import minimize_scalar

from ap_equivalence.config import get_settings
from ap_equivalence.domain.exceptions import (
    DimensionMismatch,
    QuadraturePrecondition,
    SeparationPrecondition,
    StripPrecondition,
)
from ap_equivalence.domain.models.exponential_sum import (
    BFPolynomial,
    ExactCoefficient,
    ExponentialSum,
    NumericCoefficient,
    Term,
)
from ap_equivalence.domain.models.reports import (
    AlmostPeriod,
    AlmostPeriodReport,
    BFOrders,
    BochnerFejerReport,
    CoefficientEstimate,
    DeviationStage,
    MeanValueEstimate,
    TranslationReport,
)
from ap_equivalence.services.basis_service import integral_basis
from ap_equivalence.services.chunk_runner import run_in_chunks
from ap_equivalence.services.sum_service import SumEvaluator

logger = logging.getLogger(__name__)

Evaluator = Union[ExponentialSum, SumEvaluator, Callable[[np.ndarray], np.ndarray]]

DEFAULT_STEP_DIVISOR = 100_000
MAX_STEP_FRACTION = 1 / 100
SEPARATION_FACTOR = 100
DEFAULT_ORDER_SCHEDULE = tuple(2**k for k in range(1, 11))
DEFAULT_GRID = (11, 101)
DEFAULT_T_WINDOW = (0.0, 100.0)
DEFAULT_SEARCH_MAX = 100.0
SCAN_POINTS_PER_TURN = 100
SCAN_BLOCK = 2048
# local minima up to this multiple of epsilon on the coarse scan are refined
REFINE_FACTOR = 4.0


def as_evaluator(f: Evaluator) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(f, ExponentialSum):
        return SumEvaluator(f)
    return f


def sample_grid(sigma_range: Tuple[float, float], t_range: Tuple[float, float], shape: Tuple[int, int]) -> np.ndarray:
    sigmas = np.linspace(sigma_range[0], sigma_range[1], shape[0])
    ts = np.linspace(t_range[0], t_range[1], shape[1])
    return (sigmas[:, None] + 1j * ts[None, :]).ravel()


def check_reduced_strip(f: ExponentialSum, sigma_lo: float, sigma_hi: float) -> None:
    alpha, beta = f.strip
    if not (sigma_lo <= sigma_hi and alpha < sigma_lo and sigma_hi < beta):
        raise StripPrecondition(f"[{sigma_lo}, {sigma_hi}] is not a reduced strip of '{f.name}' on ({alpha}, {beta})")


def bochner_fejer_weights(coordinates: Sequence[Sequence[int]], orders: Sequence[int]) -> Tuple[Fraction, ...]:
    """p_j = prod_i max(0, 1 - |m_ji| / N_i)."""
    weights = []
    for row in coordinates:
        p = Fraction(1)
        for m, n in zip(row, orders):
            p *= max(Fraction(0), 1 - Fraction(abs(m), n))
        weights.append(p)
    return tuple(weights)


class ApproximationService:
    """Bochner-Fejer polynomials, mean values and almost periods of finite exponential sums."""

    def __init__(self, num_threads: Optional[int] = None):
        self.num_threads = num_threads or get_settings().num_threads

    def bochner_fejer(self, f: ExponentialSum, orders: Union[BFOrders, Sequence[int], int]) -> BFPolynomial:
        """Fejer-kernel weights on the integral-basis coordinates of the exponents."""
        if not f.terms:
            return BFPolynomial(f, (), None, (), f.with_terms([], f"P_{f.name}"))
        module = integral_basis(f.exponents)
        if isinstance(orders, int):
            orders = [orders] * max(1, module.dimension)
        elif isinstance(orders, BFOrders):
            orders = orders.orders
        orders = BFOrders(orders=list(orders)).orders
        if module.dimension and len(orders) == 1:
            orders = orders * module.dimension
        if module.dimension and len(orders) != module.dimension:
            raise DimensionMismatch(module.dimension, len(orders))

        weights = bochner_fejer_weights(module.representation.entries, orders)
        terms = []
        for term, p in zip(f.terms, weights):
            if not p:
                continue
            if isinstance(term.coefficient, ExactCoefficient):
                coefficient = ExactCoefficient(term.coefficient.modulus * p, term.coefficient.turns)
            else:
                coefficient = NumericCoefficient(term.coefficient.value * float(p))
            terms.append(Term(term.exponent, coefficient))
        realized = f.with_terms(terms, f"P_{f.name}")
        logger.debug(f"Bochner-Fejer polynomial of '{f.name}' at orders {orders} keeps {len(terms)} of {len(f.terms)} terms")
        return BFPolynomial(f, tuple(orders), module, weights, realized)

    def bochner_fejer_schedule(
        self,
        f: ExponentialSum,
        orders: Sequence[int] = DEFAULT_ORDER_SCHEDULE,
        sigma_range: Tuple[float, float] = (-1.0, 1.0),
        t_range: Tuple[float, float] = (-50.0, 50.0),
        grid: Tuple[int, int] = DEFAULT_GRID,
    ) -> BochnerFejerReport:
        """sup over a (sigma, t) grid of |P_N - f| for each order N of the schedule."""
        check_reduced_strip(f, *sigma_range)
        points = sample_grid(sigma_range, t_range, grid)
        target = SumEvaluator(f)(points)
        schedule = []
        polynomial = None
        for n in orders:
            polynomial = self.bochner_fejer(f, n)
            deviation = float(np.max(np.abs(SumEvaluator(polynomial.realized)(points) - target))) if points.size else 0.0
            schedule.append(DeviationStage(order=n, sup_deviation=deviation))
        logger.info(f"Bochner-Fejer schedule for '{f.name}': final deviation {schedule[-1].sup_deviation:.3e}")
        return BochnerFejerReport(
            orders=list(polynomial.orders),
            weights=list(polynomial.weights),
            coordinates=polynomial.module.representation.to_lists() if polynomial.module else [],
            kept_terms=polynomial.kept_terms,
            sigma_range=sigma_range,
            schedule=schedule,
        )

    def mean_value(self, f: Evaluator, sigma: float, frequency: float, T: float, step: Optional[float] = None) -> MeanValueEstimate:
        """Trapezoidal (1/2T) int_{-T}^{T} f(sigma + it) e^{-i frequency t} dt."""
        step = T / DEFAULT_STEP_DIVISOR if step is None else step
        if not (T > 0 and step > 0 and step <= T * MAX_STEP_FRACTION):
            raise QuadraturePrecondition(f"need T > 0 and 0 < step <= T/100, got T = {T}, step = {step}")
        n = math.ceil(2 * T / step)
        t = np.linspace(-T, T, n + 1)
        values = as_evaluator(f)(sigma + 1j * t) * np.exp(-1j * frequency * t)
        value = complex(trapezoid(values, t) / (2 * T))
        return MeanValueEstimate(frequency=frequency, sigma=sigma, T=T, step=2 * T / n, value=value)

    def recover_coefficients(
        self, f: Evaluator, sigma: float, candidates: Sequence[float], T: float, step: Optional[float] = None
    ) -> List[CoefficientEstimate]:
        """Dirichlet coefficients a(lambda) = M{f(sigma + it) e^{-i lambda t}} / e^{lambda sigma}."""
        if not candidates:
            return []
        ordered = sorted(candidates)
        if len(ordered) > 1:
            delta = min(b - a for a, b in zip(ordered, ordered[1:]))
            if delta <= 0 or T < SEPARATION_FACTOR / delta:
                raise SeparationPrecondition(f"candidate separation {delta} needs T >= {SEPARATION_FACTOR}/delta, got T = {T}")
        evaluator = as_evaluator(f)
        estimates = []
        for lam in candidates:
            mean = self.mean_value(evaluator, sigma, lam, T, step)
            estimates.append(CoefficientEstimate(frequency=lam, coefficient=mean.value / math.exp(lam * sigma)))
        return estimates

    def _defects(self, e: np.ndarray, lams: np.ndarray, offset: np.ndarray, taus: np.ndarray) -> np.ndarray:
        """max over sample rows of |e @ exp(i lams tau) - offset| for each tau."""

        def work(block: Sequence[float]) -> List[float]:
            out = []
            for start in range(0, len(block), SCAN_BLOCK):
                chunk = np.asarray(block[start:start + SCAN_BLOCK])
                rotations = np.exp(1j * np.multiply.outer(lams, chunk))
                out.extend(np.max(np.abs(e @ rotations - offset[:, None]), axis=0).tolist())
            return out

        if len(taus) <= SCAN_BLOCK:
            return np.array(work(list(taus)))
        return np.array(run_in_chunks(work, list(taus), self.num_threads))

    def _prepare(self, f: ExponentialSum, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        evaluator = SumEvaluator(f)
        return evaluator.phase_matrix(points) * evaluator.coefficients, evaluator.lams

    def _refine(self, defect: Callable[[float], float], lo: float, hi: float) -> Tuple[float, float]:
        result = minimize_scalar(defect, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        return float(result.x), float(result.fun)

    def almost_periods(
        self,
        f: ExponentialSum,
        epsilon: float,
        sigma_range: Tuple[float, float],
        search_max: float = DEFAULT_SEARCH_MAX,
        scan_step: Optional[float] = None,
        grid: Tuple[int, int] = DEFAULT_GRID,
        t_window: Tuple[float, float] = DEFAULT_T_WINDOW,
    ) -> AlmostPeriodReport:
        """epsilon-almost periods tau in (0, search_max] measured on a (sigma, t) sample grid."""
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        check_reduced_strip(f, *sigma_range)
        lam_max = max((abs(float(t.exponent)) for t in f.terms), default=0.0) or 1.0
        scan_step = scan_step or 2 * math.pi / (SCAN_POINTS_PER_TURN * lam_max)

        points = sample_grid(sigma_range, t_window, grid)
        e, lams = self._prepare(f, points)
        base = e.sum(axis=1)
        taus = np.arange(scan_step, search_max + scan_step / 2, scan_step)
        coarse = self._defects(e, lams, base, taus)

        fine_points = sample_grid(sigma_range, t_window, (2 * grid[0] - 1, 2 * grid[1] - 1))
        fine_e, _ = self._prepare(f, fine_points)
        fine_base = fine_e.sum(axis=1)

        def defect(tau: float) -> float:
            return float(self._defects(e, lams, base, np.array([tau]))[0])

        periods: List[AlmostPeriod] = []
        padded = np.concatenate(([np.inf], coarse, [np.inf]))
        minima = np.flatnonzero((padded[1:-1] <= padded[:-2]) & (padded[1:-1] <= padded[2:]) & (coarse <= REFINE_FACTOR * epsilon))
        for i in minima:
            lo, hi = taus[i] - scan_step, min(taus[i] + scan_step, search_max)
            tau, value = self._refine(defect, max(lo, scan_step / 2), hi)
            if value > epsilon or (periods and tau - periods[-1].tau < scan_step):
                continue
            verified = float(self._defects(fine_e, lams, fine_base, np.array([tau]))[0])
            if verified > epsilon:
                logger.debug(f"tau = {tau:.6f} passes the sample grid ({value:.2e}) but not the finer grid ({verified:.2e})")
                continue
            periods.append(AlmostPeriod(tau=tau, defect=value, verified_defect=verified))

        inclusion = None
        if periods:
            taus_found = [p.tau for p in periods]
            gaps = [b - a for a, b in zip(taus_found, taus_found[1:])]
            inclusion = max([taus_found[0], search_max - taus_found[-1], *gaps])
        else:
            logger.warning(f"No {epsilon}-almost period of '{f.name}' found in (0, {search_max}]; try a larger search range")
        logger.info(f"Found {len(periods)} almost periods of '{f.name}' with epsilon = {epsilon}")
        return AlmostPeriodReport(
            epsilon=epsilon,
            sigma_lo=sigma_range[0],
            sigma_hi=sigma_range[1],
            t_window=t_window,
            search_max=search_max,
            scan_step=scan_step,
            grid=grid,
            periods=periods,
            inclusion_length=inclusion,
        )

    def translation_search(
        self,
        f1: ExponentialSum,
        f2: ExponentialSum,
        sigma_range: Tuple[float, float],
        t_max: float = DEFAULT_SEARCH_MAX,
        scan_step: Optional[float] = None,
        grid: Tuple[int, int] = DEFAULT_GRID,
        t_window: Tuple[float, float] = DEFAULT_T_WINDOW,
    ) -> TranslationReport:
        """Best t in [0, t_max] for sup over the sample grid of |f1(s + it) - f2(s)|."""
        check_reduced_strip(f1, *sigma_range)
        check_reduced_strip(f2, *sigma_range)
        lam_max = max((abs(float(t.exponent)) for t in f1.terms), default=0.0) or 1.0
        scan_step = scan_step or 2 * math.pi / (SCAN_POINTS_PER_TURN * lam_max)

        points = sample_grid(sigma_range, t_window, grid)
        e, lams = self._prepare(f1, points)
        target = SumEvaluator(f2)(points)
        ts = np.arange(0.0, t_max + scan_step / 2, scan_step)
        deviations = self._defects(e, lams, target, ts)
        best = int(np.argmin(deviations))

        def deviation(t: float) -> float:
            return float(self._defects(e, lams, target, np.array([t]))[0])

        best_t, best_value = self._refine(deviation, max(0.0, ts[best] - scan_step), min(t_max, ts[best] + scan_step))
        if best_value > deviations[best]:
            best_t, best_value = float(ts[best]), float(deviations[best])
        logger.info(f"Best translate of '{f1.name}' toward '{f2.name}': t = {best_t:.6f}, deviation {best_value:.3e}")
        return TranslationReport(
            sigma_lo=sigma_range[0],
            sigma_hi=sigma_range[1],
            t_max=t_max,
            scan_step=scan_step,
            best_t=best_t,
            deviation=best_value,
        )
