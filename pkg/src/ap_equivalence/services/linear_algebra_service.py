"""Exact integer and rational linear algebra.

Rational elimination, determinants, inverses and Smith forms run on sympy's DomainMatrix over
ZZ and QQ. The row-style Hermite form with its unimodular transform is computed here on Python
ints; its pivoting is deterministic (smallest absolute value, ties broken by the first index),
which makes every output reproducible bit for bit.
"""
import logging
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError
from sympy.polys.matrices.normalforms import invariant_factors as _sympy_invariant_factors
from sympy.polys.matrices.normalforms import smith_normal_decomp

from ap_equivalence.config import get_settings
from ap_equivalence.domain.exceptions import DimensionMismatch, InternalInvariantError
from ap_equivalence.domain.models.matrices import IntegerMatrix, RationalMatrix

logger = logging.getLogger(__name__)


def _eye(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _row_sub(rows: List[List[int]], target: int, source: int, q: int) -> None:
    # rows[target] -= q * rows[source]
    src = rows[source]
    dst = rows[target]
    for k, x in enumerate(src):
        if x:
            dst[k] -= q * x


def _freeze(rows: List[List[int]], cols: int) -> IntegerMatrix:
    return IntegerMatrix(len(rows), cols, tuple(tuple(r) for r in rows))


def _hnf_lists(a: List[List[int]], cols: int, with_transform: bool) -> Tuple[List[List[int]], Optional[List[List[int]]]]:
    m = len(a)
    h = [row[:] for row in a]
    t = _eye(m) if with_transform else None
    pivot_row = 0
    for col in range(cols):
        if pivot_row == m:
            break
        found = False
        while True:
            nonzero = [i for i in range(pivot_row, m) if h[i][col] != 0]
            if not nonzero:
                break
            found = True
            best = min(nonzero, key=lambda i: (abs(h[i][col]), i))
            if best != pivot_row:
                h[best], h[pivot_row] = h[pivot_row], h[best]
                if t is not None:
                    t[best], t[pivot_row] = t[pivot_row], t[best]
            if len(nonzero) == 1:
                break
            p = h[pivot_row][col]
            for i in range(pivot_row + 1, m):
                if h[i][col]:
                    q = h[i][col] // p
                    _row_sub(h, i, pivot_row, q)
                    if t is not None:
                        _row_sub(t, i, pivot_row, q)
        if not found:
            continue
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            if t is not None:
                t[pivot_row] = [-x for x in t[pivot_row]]
        p = h[pivot_row][col]
        for i in range(pivot_row):
            q = h[i][col] // p
            if q:
                _row_sub(h, i, pivot_row, q)
                if t is not None:
                    _row_sub(t, i, pivot_row, q)
        pivot_row += 1
    return h, t


def hnf(a: IntegerMatrix) -> Tuple[IntegerMatrix, IntegerMatrix]:
    """Row-style Hermite normal form.

    Returns (H, T) with H = T·A, T unimodular, pivots positive, entries above each pivot
    reduced into [0, pivot) and zero rows last.
    """
    h, t = _hnf_lists(a.to_lists(), a.cols, with_transform=True)
    return _freeze(h, a.cols), _freeze(t, a.rows)


def hnf_basis(a: IntegerMatrix) -> IntegerMatrix:
    """Nonzero rows of the HNF of A (a canonical basis of its row lattice), without the transform."""
    h, _ = _hnf_lists(a.to_lists(), a.cols, with_transform=False)
    return _freeze([row for row in h if any(row)], a.cols)


def snf(a: IntegerMatrix) -> Tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Smith normal form (S, L, R) with S = L·A·R, L and R unimodular, d_1 | d_2 | ... and d_i >= 0."""
    smf, left, right = smith_normal_decomp(a.to_domain())
    s = IntegerMatrix.from_domain(smf).to_lists()
    l_rows = IntegerMatrix.from_domain(left).to_lists()
    for i in range(min(a.rows, a.cols)):
        if s[i][i] < 0:
            s[i] = [-x for x in s[i]]
            l_rows[i] = [-x for x in l_rows[i]]
    result = _freeze(s, a.cols), _freeze(l_rows, a.rows), IntegerMatrix.from_domain(right)
    if not is_snf(result[0]) or result[1] @ a @ result[2] != result[0]:
        raise InternalInvariantError(f"Smith decomposition of a {a.rows}x{a.cols} matrix failed its self-check")
    return result


def invariant_factors(a: IntegerMatrix) -> Tuple[int, ...]:
    if not a.rows or not a.cols:
        return ()
    return tuple(abs(int(d)) for d in _sympy_invariant_factors(a.to_domain()) if d)


def is_hnf(h: IntegerMatrix) -> bool:
    last_pivot = -1
    seen_zero_row = False
    for i, row in enumerate(h.entries):
        nonzero = [j for j, x in enumerate(row) if x]
        if not nonzero:
            seen_zero_row = True
            continue
        if seen_zero_row:
            return False
        p = nonzero[0]
        if p <= last_pivot or row[p] <= 0:
            return False
        if any(not 0 <= h.entries[k][p] < row[p] for k in range(i)):
            return False
        last_pivot = p
    return True


def is_snf(s: IntegerMatrix) -> bool:
    diag = []
    for i, row in enumerate(s.entries):
        for j, x in enumerate(row):
            if i != j and x:
                return False
            if i == j:
                diag.append(x)
    if any(d < 0 for d in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            return False
        if a != 0 and b % a:
            return False
    return True


def determinant(a: IntegerMatrix) -> int:
    if a.rows != a.cols:
        raise DimensionMismatch("square matrix", a.shape)
    if not a.rows:
        return 1
    return int(a.to_domain().det())


def rank(a: RationalMatrix | IntegerMatrix) -> int:
    if not a.rows or not a.cols:
        return 0
    return a.to_domain().convert_to(QQ).rank()


def solve_rational(a: RationalMatrix, b: Sequence[Fraction | int]) -> Optional[Tuple[Fraction, ...]]:
    """A particular solution x of A·x = b over Q (free variables set to 0), or None when inconsistent."""
    if len(b) != a.rows:
        raise DimensionMismatch(a.rows, len(b))
    if not a.rows:
        return (Fraction(0),) * a.cols
    augmented = RationalMatrix.from_rows([list(row) + [Fraction(v)] for row, v in zip(a.entries, b)], cols=a.cols + 1)
    reduced, pivots = augmented.to_domain().rref()
    if a.cols in pivots:
        return None
    rows = RationalMatrix.from_domain(reduced).entries
    x = [Fraction(0)] * a.cols
    for row, c in zip(rows, pivots):
        x[c] = row[a.cols]
    return tuple(x)


def inverse_unimodular(t: IntegerMatrix) -> IntegerMatrix:
    if t.rows != t.cols:
        raise DimensionMismatch("square matrix", t.shape)
    if not t.rows:
        return t
    try:
        inverse = RationalMatrix.from_domain(t.to_domain().convert_to(QQ).inv())
    except DMNonInvertibleMatrixError as e:
        raise InternalInvariantError("matrix is singular") from e
    if not inverse.is_integral():
        raise InternalInvariantError("matrix is not unimodular")
    return inverse.to_integer()


def clear_column_denominators(r: RationalMatrix) -> IntegerMatrix:
    """Scale each column by the lcm of its denominators; the left kernel is unchanged."""
    scales = [lcm(*(x.denominator for x in r.column(j))) if r.rows else 1 for j in range(r.cols)]
    return IntegerMatrix(
        r.rows,
        r.cols,
        tuple(tuple((x * scales[j]).numerator for j, x in enumerate(row)) for row in r.entries),
    )


def kernel_lattice(r: RationalMatrix, verify: Optional[bool] = None) -> IntegerMatrix:
    """Basis (rows of U) of the saturated lattice {c in Z^N : c^T R = 0}.

    The integer left kernel is read off the unimodular HNF transform (rows of T facing zero rows
    of H), which is saturated by construction; it is then HNF-reduced into canonical form.
    """
    n = r.rows
    m = clear_column_denominators(r)
    h, t = _hnf_lists(m.to_lists(), m.cols, with_transform=True)
    relation_rows = [t_row for h_row, t_row in zip(h, t) if not any(h_row)]
    if not relation_rows:
        return IntegerMatrix(0, n, ())
    u = hnf_basis(IntegerMatrix.from_rows(relation_rows, cols=n))

    for row in u.entries:
        if any(sum((c * x for c, x in zip(row, r.column(j))), Fraction(0)) != 0 for j in range(r.cols)):
            raise InternalInvariantError(f"relation {row} does not annihilate the coordinate matrix")
    if verify is None:
        verify = u.rows <= get_settings().saturation_check_limit
    if verify:
        factors = invariant_factors(u)
        if len(factors) != u.rows or any(d != 1 for d in factors):
            raise InternalInvariantError(f"relation lattice is not saturated: invariant factors {factors}")
    logger.debug(f"Relation lattice of a {n}x{r.cols} coordinate matrix has rank {u.rows}")
    return u


def solve_integer(u: IntegerMatrix, v: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """An integer z with U·z = v (via SNF), or None when no integer solution exists."""
    if len(v) != u.rows:
        raise DimensionMismatch(u.rows, len(v))
    if u.cols == 0:
        return () if all(x == 0 for x in v) else None
    if u.rows == 0:
        return (0,) * u.cols
    s, left, right = snf(u)
    lv = left.apply([int(x) for x in v])
    w = [0] * u.cols
    for i, value in enumerate(lv):
        d = s.entries[i][i] if i < u.cols else 0
        if d == 0:
            if value != 0:
                return None
            continue
        if value % d:
            return None
        w[i] = value // d
    return tuple(int(x) for x in right.apply(w))


def solve_mod_one(r: RationalMatrix, q: Sequence[Fraction]) -> Optional[Tuple[Fraction, ...]]:
    """A rational y with R·y - q integral, or None when there is none.

    With T·(R·D) = H (D the column scaling, T unimodular), T·(R·D·x - q) is integral exactly when
    the zero rows of H meet T·q in integers and the nonzero rows of H solve H·x = T·q; then y = D·x.
    """
    if len(q) != r.rows:
        raise DimensionMismatch(r.rows, len(q))
    scales = [lcm(*(x.denominator for x in r.column(j))) if r.rows else 1 for j in range(r.cols)]
    m = clear_column_denominators(r)
    h, t = _hnf_lists(m.to_lists(), m.cols, with_transform=True)
    pivot_rows: List[List[int]] = []
    targets: List[Fraction] = []
    for h_row, t_row in zip(h, t):
        tq = sum((c * Fraction(v) for c, v in zip(t_row, q)), Fraction(0))
        if any(h_row):
            pivot_rows.append(h_row)
            targets.append(tq)
        elif tq.denominator != 1:
            return None
    if not pivot_rows:
        return (Fraction(0),) * r.cols
    x = solve_rational(RationalMatrix.from_rows(pivot_rows, cols=r.cols), targets)
    if x is None:
        raise InternalInvariantError("nonzero Hermite rows are inconsistent")
    return tuple(scale * xk for scale, xk in zip(scales, x))
