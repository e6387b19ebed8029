"""Brute-force reference implementations for the test suite.

Nothing here imports the algebra or numerics it checks; oracles only read sum terms
(exponent coordinates, float exponent values, complex coefficients).
"""
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np


class OracleBudgetExceeded(Exception):
    pass


class SuspectedMultipleRoot(Exception):
    pass


@dataclass(frozen=True)
class OracleBudget:
    relation_bound: int = 30
    phase_grid_step: float = 1e-3
    phase_grid_step_2d: float = 1 / 200
    seed_grid: int = 50
    scan_range: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if self.relation_bound <= 0 or self.phase_grid_step <= 0 or self.phase_grid_step_2d <= 0 or self.seed_grid <= 0:
            raise ValueError("oracle budgets must be positive")


@dataclass(frozen=True)
class RelationResult:
    relations: List[Tuple[int, ...]]
    budget: OracleBudget


@dataclass(frozen=True)
class EquivResult:
    equivalent: bool
    margin: float
    budget: OracleBudget


def _integer_coords(coords: Sequence[Sequence[Fraction]]) -> np.ndarray:
    """Scale each coordinate column by the lcm of its denominators."""
    k = len(coords[0])
    scales = [lcm(*(Fraction(row[i]).denominator for row in coords)) for i in range(k)]
    return np.array([[int(Fraction(row[i]) * scales[i]) for i in range(k)] for row in coords], dtype=np.int64)


def oracle_relations(coords: Sequence[Sequence[Fraction]], bound: int = 30, budget: Optional[OracleBudget] = None) -> RelationResult:
    """All primitive c with |c_j| <= bound and sum_j c_j lambda_j = 0, found by exhaustive search."""
    budget = budget or OracleBudget(relation_bound=bound)
    n = len(coords)
    if n > 4 or bound > 60:
        raise OracleBudgetExceeded(f"relation search limited to 4 exponents and bound 60, got {n} and {bound}")
    m = _integer_coords(coords)
    nonzero = [j for j in range(n) if np.any(m[j])]
    if not nonzero:
        raise ValueError("at least one exponent must be nonzero")
    last = nonzero[-1]
    rest = [j for j in range(n) if j != last]
    p = int(np.flatnonzero(m[last])[0])

    span = np.arange(-bound, bound + 1, dtype=np.int64)
    if rest:
        grid = np.array(list(itertools.product(span, repeat=len(rest))), dtype=np.int64)
        v = grid @ m[rest]
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
        v = np.zeros((1, m.shape[1]), dtype=np.int64)
    numerator = -v[:, p]
    ok = numerator % m[last, p] == 0
    c_last = np.where(ok, numerator // m[last, p], 0)
    ok &= np.abs(c_last) <= bound
    ok &= np.all(np.outer(c_last, m[last]) == -v, axis=1)

    full = np.zeros((grid.shape[0], n), dtype=np.int64)
    full[:, rest] = grid
    full[:, last] = c_last
    full = full[ok]
    full = full[np.any(full != 0, axis=1)]
    full = full[np.gcd.reduce(np.abs(full), axis=1) == 1]
    relations = sorted(tuple(int(x) for x in row) for row in full)
    return RelationResult(relations, budget)


def relations_generate_kernel(coords: Sequence[Sequence[Fraction]], relations: Sequence[Sequence[int]]) -> bool:
    """True when the found relations generate the whole relation lattice.

    The lattice is saturated, so a full-rank set of its vectors generates it exactly when the gcd of
    their maximal minors is 1.
    """
    m = _integer_coords(coords).astype(float)
    expected = len(coords) - int(np.linalg.matrix_rank(m))
    if expected == 0:
        return not relations
    if not relations:
        return False
    rows = np.array(relations, dtype=float)
    if int(np.linalg.matrix_rank(rows)) != expected:
        return False
    g = 0
    for picked in itertools.combinations(range(len(rows)), expected):
        sub = rows[list(picked)]
        for cols in itertools.combinations(range(len(coords)), expected):
            g = gcd(g, abs(int(round(np.linalg.det(sub[:, list(cols)])))))
            if g == 1:
                return True
    return False


def integral_on_relations(relations: Sequence[Sequence[int]], q: Sequence[Fraction]) -> bool:
    return all(sum((c * qj for c, qj in zip(row, q)), Fraction(0)).denominator == 1 for row in relations)


def _candidates_rank_one(m: np.ndarray, q: Sequence[Fraction]) -> List[Tuple[Fraction, ...]]:
    first = int(next(j for j in range(len(m)) if np.any(m[j])))
    p = int(np.flatnonzero(m[first])[0])
    g = gcd(*(int(x) for x in m[first]))
    v = [int(x) // g for x in m[first]]
    a = [int(m[j][p]) // v[p] if np.any(m[j]) else 0 for j in range(len(m))]
    af = a[first]
    out = []
    for z in range(abs(af)):
        t = (q[first] + z) / af
        # u with u . v = t: put everything on the pivot coordinate
        u = [Fraction(0)] * m.shape[1]
        u[p] = t / v[p]
        out.append(tuple(u))
    return out


def _column_hnf_2x2(b: List[List[int]]) -> Tuple[int, int, int]:
    """(l11, l21, l22) with [[l11, 0], [l21, l22]] a column-Hermite form of b."""
    (b11, b12), (b21, b22) = b

    def egcd(x: int, y: int) -> Tuple[int, int, int]:
        if y == 0:
            return (abs(x), 1 if x >= 0 else -1, 0)
        g, s, t = egcd(y, x % y)
        return g, t, s - (x // y) * t

    g, x, y = egcd(b11, b12)
    l21 = b21 * x + b22 * y
    l22 = (-b21 * b12 + b22 * b11) // g
    return g, l21, abs(l22)


def _candidates_rank_two(m: np.ndarray, q: Sequence[Fraction]) -> List[Tuple[Fraction, ...]]:
    best = None
    for i, j in itertools.combinations(range(len(m)), 2):
        det = int(m[i][0]) * int(m[j][1]) - int(m[i][1]) * int(m[j][0])
        if det and (best is None or abs(det) < abs(best[2])):
            best = (i, j, det)
    i, j, det = best
    b = [[int(m[i][0]), int(m[i][1])], [int(m[j][0]), int(m[j][1])]]
    l11, _, l22 = _column_hnf_2x2(b)
    out = []
    for z1 in range(l11):
        for z2 in range(l22):
            r1, r2 = q[i] + z1, q[j] + z2
            u1 = Fraction(b[1][1] * r1 - b[0][1] * r2, det)
            u2 = Fraction(-b[1][0] * r1 + b[0][0] * r2, det)
            out.append((u1, u2))
    return out


def _errors(m: np.ndarray, moduli: np.ndarray, q: Sequence[Fraction], u: np.ndarray) -> np.ndarray:
    """max_j |a_j| |e^{2 pi i q_j} - e^{2 pi i m_j . u}| for each row of u."""
    target = np.exp(2j * np.pi * np.array([float(x) for x in q]))
    phases = np.exp(2j * np.pi * (u @ m.T.astype(float)))
    return np.max(moduli * np.abs(phases - target), axis=1)


def oracle_equiv(
    coords: Sequence[Sequence[Fraction]],
    moduli: Sequence[float],
    q: Sequence[Fraction],
    budget: Optional[OracleBudget] = None,
) -> EquivResult:
    """Is there psi with q_j = psi(lambda_j)/2pi mod 1 for all j?

    The yes/no answer does not come from a phase grid scan. psi is parametrized by its values u on
    the scaled coordinate axes, and the finitely many cosets u that solve one (rank one) or two
    (rank two) independent rows exactly mod 1 are enumerated and tested on every row in exact
    arithmetic. The grid scan only measures the margin of a negative answer: the smallest
    coefficient matching error over a grid of step phase_grid_step (phase_grid_step_2d in two
    coordinates), refined around its best point. For a positive answer the margin is the matching
    error at the solution found.
    """
    budget = budget or OracleBudget()
    if len(coords[0]) > 2:
        raise OracleBudgetExceeded("phase search is limited to two coordinates")
    m = _integer_coords(coords)
    moduli = np.asarray(moduli, dtype=float)
    q = [Fraction(x) % 1 for x in q]
    if any(not np.any(m[j]) and q[j] for j in range(len(m))):
        return EquivResult(False, _zero_row_margin(m, moduli, q), budget)
    if not np.any(m):
        return EquivResult(True, 0.0, budget)

    rank = int(np.linalg.matrix_rank(m.astype(float)))
    candidates = _candidates_rank_one(m, q) if rank == 1 else _candidates_rank_two(m, q)
    for u in candidates:
        if all((sum((int(mj) * uj for mj, uj in zip(m[j], u)), Fraction(0)) - q[j]).denominator == 1 for j in range(len(m))):
            error = float(_errors(m, moduli, q, np.array([[float(x) for x in u]]))[0])
            return EquivResult(True, error, budget)
    return EquivResult(False, _grid_margin(m, moduli, q, rank, budget), budget)


def _zero_row_margin(m: np.ndarray, moduli: np.ndarray, q: Sequence[Fraction]) -> float:
    return max(float(moduli[j] * abs(1 - np.exp(2j * np.pi * float(q[j])))) for j in range(len(m)) if not np.any(m[j]))


def _grid_margin(m: np.ndarray, moduli: np.ndarray, q: Sequence[Fraction], rank: int, budget: OracleBudget) -> float:
    k = m.shape[1]
    if rank == 1 and k == 1:
        u = np.arange(0.0, 1.0, budget.phase_grid_step)[:, None]
    else:
        axis = np.arange(0.0, 1.0, budget.phase_grid_step_2d)
        uu, vv = np.meshgrid(axis, axis, indexing="ij")
        u = np.column_stack([uu.ravel(), vv.ravel()])[:, :k]
    errors = _errors(m, moduli, q, u)
    best = u[int(np.argmin(errors))]
    step = budget.phase_grid_step if u.shape[1] == 1 else budget.phase_grid_step_2d
    offsets = np.linspace(-step, step, 21)
    local = np.array(list(itertools.product(offsets, repeat=u.shape[1]))) + best
    return float(min(np.min(errors), np.min(_errors(m, moduli, q, local))))


def oracle_root_count(
    lams: Sequence[float],
    coefficients: Sequence[complex],
    w: complex,
    rect: Tuple[float, float, float, float],
    budget: Optional[OracleBudget] = None,
) -> int:
    """Distinct roots of sum_j a_j e^{lambda_j s} = w inside rect, by Newton from a seed grid."""
    budget = budget or OracleBudget()
    sigma_lo, sigma_hi, t_lo, t_hi = rect
    if (sigma_hi - sigma_lo) * (t_hi - t_lo) > 100:
        raise OracleBudgetExceeded("rectangle area above 100")
    lams = np.asarray(lams, dtype=float)
    a = np.asarray(coefficients, dtype=complex)

    def f(z):
        return np.exp(np.multiply.outer(z, lams)) @ a - w

    def df(z):
        return np.exp(np.multiply.outer(z, lams)) @ (a * lams)

    n = budget.seed_grid
    sig = np.linspace(sigma_lo, sigma_hi, n)
    ts = np.linspace(t_lo, t_hi, n)
    z = (sig[:, None] + 1j * ts[None, :]).ravel()
    with np.errstate(all="ignore"):
        for _ in range(100):
            step = f(z) / df(z)
            step[~np.isfinite(step)] = 0
            z = z - step
            z.real = np.clip(z.real, sigma_lo - 5, sigma_hi + 5)
        good = np.isfinite(z) & (np.abs(f(z)) < 1e-9)
    roots: List[complex] = []
    for r in z[good]:
        if sigma_lo < r.real < sigma_hi and t_lo < r.imag < t_hi and all(abs(r - x) > 1e-8 for x in roots):
            if abs(df(np.array([r]))[0]) < 1e-8:
                raise SuspectedMultipleRoot(f"derivative vanishes near {r}")
            roots.append(complex(r))
    return len(roots)


def boundary_margin(lams: Sequence[float], coefficients: Sequence[complex], w: complex, rect, samples: int = 4000) -> float:
    sigma_lo, sigma_hi, t_lo, t_hi = rect
    u = np.linspace(0, 1, samples)
    edges = np.concatenate(
        [
            sigma_lo + (sigma_hi - sigma_lo) * u + 1j * t_lo,
            sigma_hi + 1j * (t_lo + (t_hi - t_lo) * u),
            sigma_lo + (sigma_hi - sigma_lo) * u + 1j * t_hi,
            sigma_lo + 1j * (t_lo + (t_hi - t_lo) * u),
        ]
    )
    values = np.exp(np.multiply.outer(edges, np.asarray(lams, dtype=float))) @ np.asarray(coefficients, dtype=complex)
    return float(np.min(np.abs(values - w)))


def cross_term_bound(delta: float, T: float) -> float:
    """|(1/2T) int_{-T}^{T} e^{i delta t} dt| <= 1/(|delta| T)."""
    return 1.0 / (abs(delta) * T)


def brute_force_phase_minimum(q: Sequence[float], exponents: Sequence[int], step: float = 1e-4) -> float:
    """min over x in [0, 2 pi) of max_j |e^{2 pi i q_j} - e^{i lambda_j x}| for integer exponents."""
    x = np.arange(0.0, 2 * math.pi, step)
    target = np.exp(2j * np.pi * np.asarray(q, dtype=float))
    values = np.exp(1j * np.multiply.outer(x, np.asarray(exponents, dtype=float)))
    return float(np.min(np.max(np.abs(values - target), axis=1)))
