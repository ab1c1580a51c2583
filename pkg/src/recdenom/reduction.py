"""Row and column reduction of operator matrices.

Reduction runs with respect to ``sigma`` (``orientation=1``) or ``sigma^-1``
(``orientation=-1``); degrees are then measured in that variable. Each
elimination step takes a kernel vector of the leading coefficient matrix
and replaces the pivot row (column) by a combination that lowers its degree
or annihilates it. Every step is recorded as an explicit unimodular pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import RatFunc
from .field import apply_sigma
from .linalg import left_kernel, rank as matrix_rank, right_kernel
from .ore import NEG_INF, OreMatrix, Transform, row_denominators


def _check_polynomial(A: OreMatrix, orientation: int) -> None:
    if any(orientation * k < 0 for k in A.coeffs):
        name = "sigma" if orientation > 0 else "sigma^-1"
        raise ValueError(f"operator is not polynomial in {name}")


def lrcm(A: OreMatrix, orientation: int = 1) -> list[list[RatFunc]]:
    """Leading row coefficient matrix: row i is the top coefficient of
    ``sigma^(s*(nu - nu_i))`` times row i, where ``nu`` is the largest row
    degree. Zero rows stay zero."""
    s = orientation
    degs = A.row_degrees(s)
    live = [d for d in degs if d != NEG_INF]
    out = []
    if not live:
        return [list(r) for r in A.coefficient(0)]
    nu = max(live)
    for i, d in enumerate(degs):
        if d == NEG_INF:
            out.append([RatFunc(A.field.ring.zero)] * A.cols)
            continue
        row = A.coeffs[s * d][i]
        shift = s * (nu - d)
        out.append([apply_sigma(A.field, x, shift) if not x.is_zero() else x for x in row])
    return out


def lccm(A: OreMatrix, orientation: int = 1) -> list[list[RatFunc]]:
    """Leading column coefficient matrix (right shifts leave coefficients unchanged)."""
    s = orientation
    degs = A.col_degrees(s)
    z = RatFunc(A.field.ring.zero)
    out = [[z] * A.cols for _ in range(A.rows)]
    for j, d in enumerate(degs):
        if d == NEG_INF:
            continue
        M = A.coeffs[s * d]
        for i in range(A.rows):
            out[i][j] = M[i][j]
    return out


def _metric(degs) -> int:
    return sum(d + 1 for d in degs if d != NEG_INF)


def is_row_reduced(A: OreMatrix, orientation: int = 1) -> bool:
    degs = A.row_degrees(orientation)
    live = [i for i, d in enumerate(degs) if d != NEG_INF]
    L = lrcm(A, orientation)
    return matrix_rank([L[i] for i in live], A.field.ring) == len(live) if live else True


@dataclass(frozen=True)
class RowReduction:
    """``P.fwd @ A == R``; nonzero rows of ``R`` come first and are row reduced."""

    P: Transform
    R: OreMatrix
    rank: int
    zero_rows: tuple[int, ...]
    orientation: int
    trace: tuple[int, ...]

    @property
    def steps(self) -> int:
        return len(self.trace) - 1


@dataclass(frozen=True)
class ColumnReduction:
    """``A @ Q.fwd == R``; nonzero columns of ``R`` come first and are column reduced."""

    Q: Transform
    R: OreMatrix
    rank: int
    zero_cols: tuple[int, ...]
    orientation: int
    trace: tuple[int, ...]


def row_reduce(A: OreMatrix, orientation: int = 1) -> RowReduction:
    _check_polynomial(A, orientation)
    s = orientation
    f = A.field
    m = A.rows
    R = A
    P = Transform.identity(f, m)
    trace = [_metric(R.row_degrees(s))]
    while True:
        degs = R.row_degrees(s)
        live = [i for i in range(m) if degs[i] != NEG_INF]
        if not live:
            break
        L = lrcm(R, s)
        kernel = left_kernel([L[i] for i in live], f.ring)
        if not kernel:
            break
        v = {live[idx]: x for idx, x in enumerate(kernel[0]) if not x.is_zero()}
        piv = max(v, key=lambda i: (degs[i], i))
        nu = max(degs[i] for i in live)
        c = {j: apply_sigma(f, x, s * (degs[piv] - nu)) for j, x in v.items()}
        shifts = {j: s * (degs[piv] - degs[j]) for j in c}
        E, Einv = _row_elimination(f, m, piv, c, shifts)
        new_row = (E @ R).submatrix([piv], range(R.cols))
        scale = row_denominators(new_row, [RatFunc(f.ring.zero)])[0]
        if scale != 1:
            c = {j: scale * x for j, x in c.items()}
            E, Einv = _row_elimination(f, m, piv, c, shifts)
        step = Transform(E, Einv)
        R = step.fwd @ R
        P = step @ P
        trace.append(_metric(R.row_degrees(s)))
        if trace[-1] >= trace[-2]:
            raise AssertionError("row reduction failed to lower the degree sum")
    degs = R.row_degrees(s)
    nonzero = [i for i in range(m) if degs[i] != NEG_INF]
    zero = [i for i in range(m) if degs[i] == NEG_INF]
    if zero and zero != list(range(len(nonzero), m)):
        perm = Transform.permutation(f, nonzero + zero)
        R = perm.fwd @ R
        P = perm @ P
    r = len(nonzero)
    return RowReduction(P, R, r, tuple(range(r, m)), s, tuple(trace))


def _row_elimination(f, m, piv, c, shifts):
    one = RatFunc(f.ring.one)
    entries = {(i, i): {0: one} for i in range(m) if i != piv}
    inv_entries = dict(entries)
    for j, cj in c.items():
        entries[(piv, j)] = {shifts[j]: cj}
    cinv = c[piv].inverse()
    inv_entries[(piv, piv)] = {0: cinv}
    for j, cj in c.items():
        if j != piv:
            inv_entries[(piv, j)] = {shifts[j]: -(cinv * cj)}
    return OreMatrix.from_entries(f, m, m, entries), OreMatrix.from_entries(f, m, m, inv_entries)


def column_reduce(A: OreMatrix, orientation: int = 1) -> ColumnReduction:
    _check_polynomial(A, orientation)
    s = orientation
    f = A.field
    n = A.cols
    R = A
    Q = Transform.identity(f, n)
    trace = [_metric(R.col_degrees(s))]
    while True:
        degs = R.col_degrees(s)
        live = [j for j in range(n) if degs[j] != NEG_INF]
        if not live:
            break
        L = lccm(R, s)
        kernel = right_kernel([[row[j] for j in live] for row in L], f.ring)
        if not kernel:
            break
        w = {live[idx]: x for idx, x in enumerate(kernel[0]) if not x.is_zero()}
        piv = max(w, key=lambda j: (degs[j], j))
        c = {j: apply_sigma(f, x, -s * degs[piv]) for j, x in w.items()}
        shifts = {j: s * (degs[piv] - degs[j]) for j in c}
        step = Transform(*_col_elimination(f, n, piv, c, shifts))
        R = R @ step.fwd
        Q = Q @ step
        trace.append(_metric(R.col_degrees(s)))
        if trace[-1] >= trace[-2]:
            raise AssertionError("column reduction failed to lower the degree sum")
    degs = R.col_degrees(s)
    nonzero = [j for j in range(n) if degs[j] != NEG_INF]
    zero = [j for j in range(n) if degs[j] == NEG_INF]
    if zero and zero != list(range(len(nonzero), n)):
        # right multiplication by the transposed permutation reorders columns
        perm = Transform.permutation(f, nonzero + zero)
        swap = Transform(perm.inv, perm.fwd)
        R = R @ swap.fwd
        Q = Q @ swap
    r = len(nonzero)
    return ColumnReduction(Q, R, r, tuple(range(r, n)), s, tuple(trace))


def _col_elimination(f, n, piv, c, shifts):
    one = RatFunc(f.ring.one)
    entries = {(j, j): {0: one} for j in range(n) if j != piv}
    inv_entries = dict(entries)
    for j, cj in c.items():
        d = shifts[j]
        entries[(j, piv)] = {d: apply_sigma(f, cj, d)}
    cinv = c[piv].inverse()
    inv_entries[(piv, piv)] = {0: cinv}
    for j, cj in c.items():
        if j != piv:
            d = shifts[j]
            inv_entries[(j, piv)] = {d: -apply_sigma(f, cj * cinv, d)}
    return OreMatrix.from_entries(f, n, n, entries), OreMatrix.from_entries(f, n, n, inv_entries)


def certify_row_reduction(A: OreMatrix, red: RowReduction) -> bool:
    """Ledger check: P A = R, P P^-1 = I, zero rows last, LRCM full row rank."""
    top = red.R.submatrix(range(red.rank), range(red.R.cols))
    zero_ok = all(d == NEG_INF for d in red.R.row_degrees()[red.rank:])
    return red.P.fwd @ A == red.R and red.P.certify() and zero_ok and is_row_reduced(top, red.orientation)


def certify_column_reduction(A: OreMatrix, red: ColumnReduction) -> bool:
    left = red.R.submatrix(range(red.R.rows), range(red.rank))
    zero_ok = all(d == NEG_INF for d in red.R.col_degrees()[red.rank:])
    L = lccm(left, red.orientation)
    full = matrix_rank(L, A.field.ring) == red.rank if red.rank else True
    return A @ red.Q.fwd == red.R and red.Q.certify() and zero_ok and full
