"""Which values does a sum take on a vertical substrip?

Root counts come from the argument principle on rectangle boundaries; roots are located by
Newton's method from an interior seed grid. A search that runs out of window reports
"unresolved", which is never the same as "not attained". Only a modulus bound can exclude a
value outright.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from ap_equivalence.config import get_settings
from ap_equivalence.domain.exceptions import BoundaryTooClose, NonExactInput, StripPrecondition
from ap_equivalence.domain.models.exponential_sum import ExponentialSum
from ap_equivalence.domain.models.reports import (
    AttainmentReport,
    AttainmentResult,
    ExperimentReport,
    Rectangle,
    SampleOutcome,
    ValueSetComparison,
)
from ap_equivalence.services.chunk_runner import run_in_chunks
from ap_equivalence.services.equivalence_service import star_equivalent
from ap_equivalence.services.sum_service import OVERFLOW_LOG, SumEvaluator

logger = logging.getLogger(__name__)

BOUNDARY_GUARD = 1e-9
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 60
DEDUP_RADIUS = 1e-8
MAX_ARG_STEP = math.pi / 2
EDGE_SAMPLES = 64
MAX_BOUNDARY_SAMPLES = 2_000_000
SLAB_HEIGHT = 8.0
FIRST_WINDOW = 16.0
SAMPLE_T_RANGE = (-100.0, 100.0)
SUBSTRIP_OVERLAP = 0.25
BOUNDARY_RETRIES = 3
WORST_KEPT = 3


def _nonconstant(f: ExponentialSum) -> bool:
    return any(not t.exponent.is_zero() for t in f.terms)


def _boundary_path(rect: Rectangle, per_edge: int) -> np.ndarray:
    """Closed counterclockwise boundary samples, first point repeated at the end."""
    u = np.linspace(0.0, 1.0, per_edge, endpoint=False)
    a, b, c, d = rect.sigma_lo, rect.sigma_hi, rect.t_lo, rect.t_hi
    bottom = (a + (b - a) * u) + 1j * c
    right = b + 1j * (c + (d - c) * u)
    top = (b - (b - a) * u) + 1j * d
    left = a + 1j * (d - (d - c) * u)
    path = np.concatenate([bottom, right, top, left])
    return np.append(path, path[0])


def _winding(g: Sequence[complex]) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.angle(np.asarray(g[1:]) / np.asarray(g[:-1]))


class ValueSetService:
    """Attainment of values on substrips and value-set comparison of two sums."""

    def __init__(self, num_threads: Optional[int] = None):
        self.num_threads = num_threads or get_settings().num_threads

    def attainment_count(self, f: ExponentialSum, w: complex, rect: Rectangle) -> AttainmentReport:
        """Number of solutions of f(s) = w inside rect (with multiplicity), and the located roots."""
        if not _nonconstant(f):
            raise ValueError(f"'{f.name}' is constant; its attainment count is not finite")
        evaluator = SumEvaluator(f)
        w = complex(w)

        path = _boundary_path(rect, EDGE_SAMPLES)
        g = evaluator(path) - w
        steps = _winding(g)
        while np.any(np.abs(steps) >= MAX_ARG_STEP):
            if path.size > MAX_BOUNDARY_SAMPLES:
                raise BoundaryTooClose(float(np.min(np.abs(g))), self._offset(rect), complex(path[int(np.argmin(np.abs(g)))]))
            coarse = np.flatnonzero(np.abs(steps) >= MAX_ARG_STEP)
            midpoints = (path[coarse] + path[coarse + 1]) / 2
            path = np.insert(path, coarse + 1, midpoints)
            g = np.insert(g, coarse + 1, evaluator(midpoints) - w)
            steps = _winding(g)

        margin = float(np.min(np.abs(g)))
        if margin < BOUNDARY_GUARD:
            raise BoundaryTooClose(margin, self._offset(rect), complex(path[int(np.argmin(np.abs(g)))]))
        count = int(round(float(np.sum(steps)) / (2 * math.pi)))
        roots = self._locate_roots(evaluator, w, rect, count) if count > 0 else []
        logger.debug(f"{count} solutions of {f.name}(s) = {w} in {rect}, {len(roots)} located, margin {margin:.2e}")
        return AttainmentReport(
            target=w,
            rectangle=rect,
            count=max(count, 0),
            boundary_margin=margin,
            boundary_samples=int(path.size - 1),
            roots=roots,
            newton_tol=NEWTON_TOL,
            dedup_radius=DEDUP_RADIUS,
        )

    @staticmethod
    def _offset(rect: Rectangle) -> complex:
        return complex(0.0, 0.0137 * min(rect.t_hi - rect.t_lo, 1.0))

    def _locate_roots(self, evaluator: SumEvaluator, w: complex, rect: Rectangle, count: int) -> List[complex]:
        width, height = rect.sigma_hi - rect.sigma_lo, rect.t_hi - rect.t_lo
        lam_max = float(np.max(np.abs(evaluator.lams))) or 1.0
        n_sigma = max(6, min(40, int(4 * width * lam_max) + 6))
        n_t = max(12, min(400, int(4 * height * lam_max) + 12))
        roots: List[complex] = []
        for density in (1, 3):
            sig = np.linspace(rect.sigma_lo, rect.sigma_hi, density * n_sigma + 2)[1:-1]
            ts = np.linspace(rect.t_lo, rect.t_hi, density * n_t + 2)[1:-1]
            z = (sig[:, None] + 1j * ts[None, :]).ravel()
            z = self._newton(evaluator, w, z)
            residual = np.abs(evaluator(z) - w)
            good = np.isfinite(z) & (residual <= 1e3 * NEWTON_TOL * max(1.0, abs(w)))
            inside = np.array([rect.contains(complex(x)) for x in z]) if z.size else np.zeros(0, bool)
            for candidate in z[good & inside][np.argsort(residual[good & inside])]:
                if all(abs(candidate - r) > DEDUP_RADIUS for r in roots):
                    roots.append(complex(candidate))
            if len(roots) >= count:
                break
        roots.sort(key=lambda r: (r.imag, r.real))
        return roots[:count]

    @staticmethod
    def _newton(evaluator: SumEvaluator, w: complex, z: np.ndarray) -> np.ndarray:
        active = np.ones(z.shape, dtype=bool)
        sigma_bound = 0.5 * OVERFLOW_LOG / max(1.0, float(np.max(np.abs(evaluator.lams))))
        with np.errstate(all="ignore"):
            for _ in range(NEWTON_MAX_ITER):
                if not np.any(active):
                    break
                value, slope = evaluator.value_and_derivative(z[active])
                step = (value - w) / slope
                step[~np.isfinite(step)] = np.nan
                z[active] = z[active] - step
                done = ~(np.abs(step) > NEWTON_TOL)
                idx = np.flatnonzero(active)
                active[idx[done]] = False
                # iterates stay where the evaluator cannot overflow
                z.real = np.clip(z.real, -sigma_bound, sigma_bound)
        return z

    def excluded(self, f: ExponentialSum, w: complex, sigma_interval: Tuple[float, float]) -> bool:
        """True when |w| is outside every modulus |f| can take on the sigma interval."""
        evaluator = SumEvaluator(f)
        ends = np.array(sigma_interval, dtype=float)
        sizes = np.exp(np.multiply.outer(ends, evaluator.lams)) * evaluator.moduli
        if float(np.max(np.sum(sizes, axis=1))) < abs(w):
            return True
        low, high = np.min(sizes, axis=0), np.max(sizes, axis=0)
        lower = max((low[k] - (np.sum(high) - high[k]) for k in range(len(low))), default=0.0)
        return bool(lower > abs(w))

    def attains(
        self,
        f: ExponentialSum,
        w: complex,
        sigma_interval: Tuple[float, float],
        t_cap: Optional[float] = None,
        tol: Optional[float] = None,
    ) -> AttainmentResult:
        """Search s with sigma in the interval and |f(s) - w| <= tol, over |t| <= T for T = 16, 32, ..., t_cap."""
        settings = get_settings()
        t_cap = settings.t_cap if t_cap is None else t_cap
        tol = settings.tol if tol is None else tol
        if tol <= 0:
            raise ValueError("tol must be positive")
        w = complex(w)
        lo, hi = sigma_interval

        if self.excluded(f, w, sigma_interval):
            return AttainmentResult(target=w, status="excluded", explored_t=0.0)
        if not _nonconstant(f):
            value = complex(SumEvaluator(f)(np.array([0j]))[0]) if f.terms else 0j
            if abs(value - w) <= tol:
                point = complex((lo + hi) / 2, 0.0)
                return AttainmentResult(target=w, status="found", point=point, residual=abs(value - w), explored_t=0.0)
            return AttainmentResult(target=w, status="excluded", explored_t=0.0)

        evaluator = SumEvaluator(f)
        explored, window = 0.0, min(FIRST_WINDOW, t_cap)
        while True:
            for t_lo, t_hi in self._new_slabs(explored, window):
                rect = Rectangle(sigma_lo=lo, sigma_hi=hi, t_lo=t_lo, t_hi=t_hi)
                try:
                    hit = self._search_slab(f, evaluator, w, rect, tol)
                except BoundaryTooClose as e:
                    logger.warning(f"Skipping slab t in [{t_lo}, {t_hi}]: boundary stays within {e.margin:.2e} of {w}")
                    continue
                if hit is not None:
                    residual = float(abs(evaluator(np.array([hit]))[0] - w))
                    return AttainmentResult(target=w, status="found", point=hit, residual=residual, explored_t=window)
            explored = window
            if window >= t_cap:
                break
            window = min(2 * window, t_cap)
        logger.debug(f"{f.name}(s) = {w} unresolved up to |t| = {explored}")
        return AttainmentResult(target=w, status="unresolved", explored_t=explored)

    @staticmethod
    def _new_slabs(explored: float, window: float) -> List[Tuple[float, float]]:
        """Height-8 slabs covering [-window, window] minus [-explored, explored], nearest to t = 0 first."""
        slabs: List[Tuple[float, float]] = []
        start = explored
        while start < window:
            end = min(start + SLAB_HEIGHT, window)
            slabs.append((start, end))
            slabs.append((-end, -start))
            start = end
        return slabs

    def _search_slab(
        self, f: ExponentialSum, evaluator: SumEvaluator, w: complex, rect: Rectangle, tol: float
    ) -> Optional[complex]:
        lo, hi = rect.sigma_lo, rect.sigma_hi
        for attempt in Retrying(
            retry=retry_if_exception_type(BoundaryTooClose),
            stop=stop_after_attempt(BOUNDARY_RETRIES),
            reraise=True,
        ):
            with attempt:
                try:
                    report = self.attainment_count(f, w, rect)
                except BoundaryTooClose as e:
                    if e.point is not None and e.margin <= tol and lo <= e.point.real <= hi:
                        return e.point
                    logger.warning(f"Boundary of {rect} passes within {e.margin:.2e} of {w}; shifting by {e.suggested_offset}")
                    rect = rect.shifted(e.suggested_offset)
                    raise
        for root in report.roots:
            if abs(complex(evaluator(np.array([root]))[0]) - w) <= tol and lo <= root.real <= hi:
                return root
        return None

    def sample_points(self, sigma_interval: Tuple[float, float], n_samples: int, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        sigma = rng.uniform(sigma_interval[0], sigma_interval[1], n_samples)
        t = rng.uniform(SAMPLE_T_RANGE[0], SAMPLE_T_RANGE[1], n_samples)
        return sigma + 1j * t

    def value_set_compare(
        self,
        f1: ExponentialSum,
        f2: ExponentialSum,
        substrip: Tuple[float, float],
        n_samples: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        t_cap: Optional[float] = None,
    ) -> ValueSetComparison:
        """Does f1 take f2's sampled values on the substrip, and vice versa?"""
        settings = get_settings()
        n_samples = settings.samples if n_samples is None else n_samples
        seed = settings.seed if seed is None else seed
        tol = settings.tol if tol is None else tol
        t_cap = settings.t_cap if t_cap is None else t_cap
        if n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        lo, hi = substrip
        for f in (f1, f2):
            if not (lo < hi and f.strip[0] < lo and hi < f.strip[1]):
                raise StripPrecondition(f"substrip ({lo}, {hi}) is not inside the strip of '{f.name}'")

        points = self.sample_points(substrip, n_samples, seed)
        values1, values2 = SumEvaluator(f1)(points), SumEvaluator(f2)(points)
        logger.info(f"Comparing value sets of '{f1.name}' and '{f2.name}' on ({lo}, {hi}) with {n_samples} samples")

        def work(indices: Sequence[int]) -> List[Tuple[SampleOutcome, SampleOutcome]]:
            out = []
            for i in indices:
                s = complex(points[i])
                one = self.attains(f1, complex(values2[i]), substrip, t_cap, tol)
                two = self.attains(f2, complex(values1[i]), substrip, t_cap, tol)
                out.append((self._outcome(i, "f1_attains_f2", s, one), self._outcome(i, "f2_attains_f1", s, two)))
            return out

        pairs = run_in_chunks(work, list(range(n_samples)), self.num_threads)
        outcomes = [o for pair in pairs for o in pair]
        found_12 = sum(1 for a, _ in pairs if a.status == "found")
        found_21 = sum(1 for _, b in pairs if b.status == "found")
        worst = sorted(outcomes, key=lambda o: -(o.residual if o.residual is not None else math.inf))[:WORST_KEPT]
        return ValueSetComparison(
            sigma_lo=lo,
            sigma_hi=hi,
            n_samples=n_samples,
            seed=seed,
            tol=tol,
            t_cap=t_cap,
            fraction_f1_attains_f2=found_12 / n_samples,
            fraction_f2_attains_f1=found_21 / n_samples,
            outcomes=outcomes,
            worst=worst,
        )

    @staticmethod
    def _outcome(index: int, direction: str, s: complex, result: AttainmentResult) -> SampleOutcome:
        return SampleOutcome(
            index=index,
            direction=direction,
            source_point=s,
            target=result.target,
            status=result.status,
            found_point=result.point,
            residual=result.residual,
            explored_t=result.explored_t,
        )

    @staticmethod
    def substrips(sigma_range: Tuple[float, float], n_substrips: int) -> List[Tuple[float, float]]:
        """n equal pieces of the interval, each widened by a quarter of its width of overlap."""
        lo, hi = sigma_range
        width = (hi - lo) / n_substrips
        pad = width * SUBSTRIP_OVERLAP / 2
        return [(max(lo, lo + k * width - pad), min(hi, lo + (k + 1) * width + pad)) for k in range(n_substrips)]

    def equivalence_principle_experiment(
        self,
        f1: ExponentialSum,
        f2: ExponentialSum,
        sigma_range: Tuple[float, float],
        n_substrips: int = 3,
        n_samples: Optional[int] = None,
        seed: Optional[int] = None,
        tol: Optional[float] = None,
        t_cap: Optional[float] = None,
    ) -> ExperimentReport:
        """value_set_compare on overlapping substrips, cross-checked against the exact verdict."""
        if n_substrips < 1:
            raise ValueError("n_substrips must be at least 1")
        seed = get_settings().seed if seed is None else seed
        comparisons = [
            self.value_set_compare(f1, f2, piece, n_samples, seed + k, tol, t_cap)
            for k, piece in enumerate(self.substrips(sigma_range, n_substrips))
        ]
        consistent = all(c.complete for c in comparisons)

        exact = None
        try:
            exact = star_equivalent(f1, f2).equivalent
        except NonExactInput:
            logger.info(f"No exact verdict for '{f1.name}' vs '{f2.name}': coefficients are numeric")
        agrees = None if exact is None else exact == consistent
        if agrees is False:
            logger.warning(f"Value sets of '{f1.name}' and '{f2.name}' {'match' if consistent else 'differ'} but the exact verdict is {exact}")
        return ExperimentReport(
            sigma_lo=sigma_range[0],
            sigma_hi=sigma_range[1],
            n_substrips=n_substrips,
            comparisons=comparisons,
            consistent_with_equivalence=consistent,
            exact_verdict=exact,
            agrees_with_exact=agrees,
        )
