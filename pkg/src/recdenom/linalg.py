"""Fraction-free linear algebra over rational-function fields.

Matrices are plain lists (or tuples) of rows of :class:`RatFunc`. Rows are
first scaled to polynomial form; elimination then runs fraction-free
Gauss-Jordan (every division exact), so intermediate entries stay
polynomial and every pivot ends up equal to one common denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import flint

from .arith import MultiPoly, PolyRing, RatFunc, _main_vars, poly_gcd, poly_lcm

Matrix = Sequence[Sequence[RatFunc]]


class SingularMatrixError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LinearSolution:
    """Solution set of M x = rhs: ``particular`` is None when inconsistent."""

    particular: tuple[RatFunc, ...] | None
    nullspace: tuple[tuple[RatFunc, ...], ...]
    rank: int

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def _ring_of(M: Matrix, extra=()) -> PolyRing:
    for row in M:
        for x in row:
            return x.ring
    for x in extra:
        return x.ring
    raise ValueError("cannot infer the ring of an empty matrix")


def _cleared_rows(M: Matrix, ring: PolyRing) -> list[list[MultiPoly]]:
    rows = []
    for row in M:
        dens = [x.den for x in row if not x.den.is_one()]
        if not dens:
            rows.append([x.num for x in row])
            continue
        L = dens[0]
        for d in dens[1:]:
            L = poly_lcm(L, d, ring.names)
        rows.append([x.num * L.exquo(x.den) for x in row])
    return rows


def ff_rref(a: list[list[MultiPoly]], ncols: int | None = None) -> tuple[MultiPoly | None, list[int]]:
    """In-place fraction-free reduced row echelon form.

    Pivots are searched only in the first ``ncols`` columns (augmented
    columns beyond are carried along). Returns ``(den, pivots)``: after the
    call every pivot entry equals ``den`` and the pivot columns are zero
    elsewhere.
    """
    m = len(a)
    if not m:
        return None, []
    n = len(a[0]) if ncols is None else ncols
    width = len(a[0])
    d = None
    pivots: list[int] = []
    i = 0
    for j in range(n):
        candidates = [r for r in range(i, m) if not a[r][j].is_zero()]
        if not candidates:
            continue
        # small pivots keep the fraction-free growth down
        best = min(candidates, key=lambda r: (a[r][j].nterms(), a[r][j].degree()))
        a[i], a[best] = a[best], a[i]
        piv = a[i][j]
        prow = a[i]
        for r in range(m):
            if r == i:
                continue
            row = a[r]
            arj = row[j]
            for k in range(width):
                if k == j:
                    continue
                v = piv * row[k] - arj * prow[k] if not arj.is_zero() else piv * row[k]
                if d is not None and not v.is_zero():
                    v = v.exquo(d)
                row[k] = v
            row[j] = piv.ring.zero
        pivots.append(j)
        d = piv
        i += 1
        if i == m:
            break
    return d, pivots


def _rref_constant(a: list[list[MultiPoly]], ncols: int, ring: PolyRing) -> tuple[MultiPoly, list[int]]:
    """:func:`ff_rref` for matrices over Q: flint's rref, pivots scaled to one."""
    m, width = len(a), len(a[0])
    values = [x.constant_value() if not x.is_zero() else 0 for row in a for x in row]
    E = flint.fmpq_mat(m, width, [flint.fmpq(v.numerator, v.denominator) for v in values])
    R, _ = E.rref()
    pivots = []
    for i in range(m):
        lead = next((j for j in range(width) if R[i, j] != 0), None)
        if lead is not None and lead < ncols:
            pivots.append(lead)
        for j in range(width):
            a[i][j] = ring.const(R[i, j])
    return ring.one, pivots


def ff_solve(M: Matrix, rhs: Sequence[RatFunc] | None = None, ring: PolyRing | None = None) -> LinearSolution:
    """Solve ``M x = rhs`` exactly over the field of fractions.

    Returns a particular solution (free variables set to zero) and a basis
    of the homogeneous nullspace. Inconsistency is reported as
    ``particular is None``, never raised.
    """
    ring = ring or _ring_of(M, rhs or ())
    m = len(M)
    n = len(M[0]) if m else 0
    if rhs is None:
        rhs = [RatFunc(ring.zero)] * m
    if len(rhs) != m:
        raise ValueError("rhs length does not match the number of rows")
    if m == 0:
        basis = tuple(
            tuple(RatFunc(ring.one if k == j else ring.zero) for k in range(n)) for j in range(n)
        )
        return LinearSolution(tuple(RatFunc(ring.zero) for _ in range(n)), basis, 0)
    aug = _cleared_rows([list(row) + [b] for row, b in zip(M, rhs)], ring)
    if m > n + 1 and not all(x.is_constant() for row in aug for x in row):
        # eliminate on rows independent at a point, then check the rest exactly
        keep = _independent_rows(aug, ring)
        if len(keep) < m:
            sol = _solve_cleared([list(aug[r]) for r in keep], n, ring)
            if _satisfies(aug, n, sol):
                return sol
    return _solve_cleared(aug, n, ring)


def _independent_rows(aug: list[list[MultiPoly]], ring: PolyRing) -> list[int]:
    # sparse rows first, so small pivots stay available
    point = _evaluation_point(ring)
    order = sorted(range(len(aug)), key=lambda r: sum(x.nterms() for x in aug[r]))
    width = len(aug[0])
    E = flint.fmpq_mat(width, len(order), [aug[r][j].raw(*point) if not aug[r][j].is_zero() else 0 for j in range(width) for r in order])
    R, rk = E.rref()
    return [order[next(c for c in range(len(order)) if R[i, c] != 0)] for i in range(rk)]


def _satisfies(aug: list[list[MultiPoly]], n: int, sol: LinearSolution) -> bool:
    # an inconsistent subset already makes the whole system inconsistent
    zero = RatFunc(aug[0][0].ring.zero)
    for row in aug:
        coeffs = [RatFunc(a) for a in row[:n]]
        if sol.particular is not None and sum((a * x for a, x in zip(coeffs, sol.particular) if not a.is_zero()), zero) != RatFunc(row[n]):
            return False
        for v in sol.nullspace:
            if not sum((a * x for a, x in zip(coeffs, v) if not a.is_zero()), zero).is_zero():
                return False
    return True


def _solve_cleared(aug: list[list[MultiPoly]], n: int, ring: PolyRing) -> LinearSolution:
    m = len(aug)
    if all(x.is_constant() for row in aug for x in row):
        den, pivots = _rref_constant(aug, n, ring)
    else:
        den, pivots = ff_rref(aug, n)
    rank = len(pivots)
    zero = ring.zero
    for r in range(rank, m):
        if not aug[r][n].is_zero():
            particular = None
            break
    else:
        x = [RatFunc(zero)] * n
        for r, c in enumerate(pivots):
            x[c] = RatFunc(aug[r][n], den)
        particular = tuple(x)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = den if den is not None else ring.one
        for r, c in enumerate(pivots):
            v[c] = -aug[r][f]
        basis.append(_primitive_vector(v))
    return LinearSolution(particular, tuple(basis), rank)


def _primitive_vector(v: list[MultiPoly]) -> tuple[RatFunc, ...]:
    nz = [x for x in v if not x.is_zero()]
    g = nz[0]
    for x in nz[1:]:
        if g.is_constant():
            break
        g = g._wrap(g.raw.gcd(x.raw))
    lead = (nz[0].exquo(g)).leading_coefficient()
    return tuple(RatFunc(x.exquo(g) / lead) if not x.is_zero() else RatFunc(x) for x in v)


def rank(M: Matrix, ring: PolyRing | None = None) -> int:
    if not M or not M[0]:
        return 0
    ring = ring or _ring_of(M)
    a = _cleared_rows(M, ring)
    # a rank found at a point is a lower bound; full rank is then certain
    point = _evaluation_point(ring)
    E = flint.fmpq_mat(len(a), len(a[0]), [x.raw(*point) if not x.is_zero() else 0 for row in a for x in row])
    if E.rank() == min(len(a), len(a[0])):
        return E.rank()
    return len(ff_rref(a)[1])


def left_kernel(M: Matrix, ring: PolyRing | None = None) -> tuple[tuple[RatFunc, ...], ...]:
    """Basis of {v : v M = 0}."""
    ring = ring or _ring_of(M)
    T = transpose(M)
    if not T:
        return ff_solve([[RatFunc(ring.zero)] * len(M)], ring=ring).nullspace
    return right_kernel(T, ring)


def right_kernel(M: Matrix, ring: PolyRing | None = None) -> tuple[tuple[RatFunc, ...], ...]:
    """Basis of {w : M w = 0}."""
    ring = ring or _ring_of(M)
    if M and M[0]:
        basis = _kernel_by_minors(_cleared_rows(M, ring), ring)
        if basis is not None:
            return tuple(_primitive_vector(v) for v in basis)
    return ff_solve(M, ring=ring).nullspace


# small matrices: cofactors instead of elimination ------------------------------

MINOR_LIMIT = 4


def _evaluation_point(ring: PolyRing) -> list[flint.fmpq]:
    return [flint.fmpq(7 + 4 * i, 3 + 2 * i) for i in range(ring.nvars)]


def _laplace(a: list[list[MultiPoly]]) -> MultiPoly:
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    out = None
    for j, x in enumerate(a[0]):
        if x.is_zero():
            continue
        term = x * _laplace([row[:j] + row[j + 1:] for row in a[1:]])
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out if out is not None else a[0][0]


def _pivot_columns(E: flint.fmpq_mat, rank: int) -> list[int]:
    R = E.rref()[0]
    cols = []
    for i in range(rank):
        cols.append(next(j for j in range(E.ncols()) if R[i, j] != 0))
    return cols


def _kernel_by_minors(a: list[list[MultiPoly]], ring: PolyRing) -> list[list[MultiPoly]] | None:
    """Nullspace basis from Cramer's rule on a maximal nonsingular minor.

    The minor is located by evaluating at a fixed point, which can only
    underestimate the rank. Rows of the minor hold by Cramer's rule; each
    vector is checked exactly against the other rows, so a bad point
    returns None (and the caller eliminates instead).
    """
    m, n = len(a), len(a[0])
    # common factors of a row do not change the kernel; common factors of a
    # column are divided out of the vectors at the end
    a = [_strip_content(row) for row in a]
    col_content = [_content([row[j] for row in a]) for j in range(n)]
    a = [[x if c is None else x.exquo(c) for x, c in zip(row, col_content)] for row in a]
    point = _evaluation_point(ring)
    E = flint.fmpq_mat(m, n, [x.raw(*point) if not x.is_zero() else 0 for row in a for x in row])
    r = E.rank()
    if r > MINOR_LIMIT:
        return None
    cols = _pivot_columns(E, r)
    rows = _pivot_columns(E.transpose(), r)
    zero = ring.zero
    sub = [[a[i][j] for j in cols] for i in rows]
    det = _laplace(sub) if r else ring.one
    basis = []
    for f in (j for j in range(n) if j not in cols):
        v = [zero] * n
        v[f] = det
        for idx, c in enumerate(cols):
            replaced = [row[:idx] + [-a[i][f]] + row[idx + 1:] for i, row in zip(rows, sub)]
            v[c] = _laplace(replaced)
        for i, row in enumerate(a):
            if i in rows:
                continue
            acc = zero
            for x, y in zip(row, v):
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            if not acc.is_zero():
                return None
        basis.append(v)
    if any(c is not None for c in col_content):
        L = None
        for c in col_content:
            if c is not None:
                L = c if L is None else poly_lcm(L, c, ring.names)
        basis = [[x if x.is_zero() else x * L.exquo(c) if c is not None else x * L for x, c in zip(v, col_content)] for v in basis]
    return basis


def _content(entries: Sequence[MultiPoly]) -> MultiPoly | None:
    """Gcd of the nonzero entries, or None when it is a constant."""
    g = None
    for x in entries:
        if x.is_zero():
            continue
        g = x.raw if g is None else g.gcd(x.raw)
        if g.is_constant():
            return None
    return None if g is None else MultiPoly(entries[0].ring, g)


def _strip_content(row: list[MultiPoly]) -> list[MultiPoly]:
    g = _content(row)
    return row if g is None else [x if x.is_zero() else x.exquo(g) for x in row]


def transpose(M: Matrix) -> list[list[RatFunc]]:
    return [list(col) for col in zip(*M)]


def determinant(M: Matrix, ring: PolyRing | None = None) -> RatFunc:
    """Determinant via fraction-free (Bareiss) elimination."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    ring = ring or _ring_of(M)
    if n == 0:
        return RatFunc(ring.one)
    scale = RatFunc(ring.one)
    a = []
    for row in M:
        cleared = _cleared_rows([row], ring)[0]
        nz = [(x, c) for x, c in zip(row, cleared) if not x.is_zero()]
        if nz:
            x, c = nz[0]
            scale = scale * (x / c)
        a.append(cleared)
    if n <= MINOR_LIMIT:
        return scale * RatFunc(_laplace(a))
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return RatFunc(ring.zero)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).exquo(prev)
            a[i][k] = ring.zero
        prev = a[k][k]
    return scale * RatFunc(a[n - 1][n - 1] * sign)


@dataclass(frozen=True)
class InverseDenominator:
    denominator: MultiPoly
    det: MultiPoly


def matrix_inverse_denominator(M: Matrix, main_var=None) -> InverseDenominator:
    """Least common denominator of the reduced entries of M^-1, and det(M).

    ``M`` must be polynomial. The denominator is normalised w.r.t.
    ``main_var`` (default: all generators), i.e. factors that are units of
    the coefficient field are dropped.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("inverse of a non-square matrix")
    ring = _ring_of(M)
    if any(not x.is_polynomial() for row in M for x in row):
        raise ValueError("matrix_inverse_denominator expects a polynomial matrix")
    main = _main_vars(ring, main_var)
    # M = K * M1 with K the gcd of all entries; M^-1 = adj(M1) / (K det(M1)).
    # The entries share this denominator, so the reduced common denominator
    # is K det(M1) / gcd(K det(M1), G) with G the gcd of all (n-1)-minors
    # of M1 (the entries of adj(M1)).
    entries = [x.num for row in M for x in row]
    K = _content(entries)
    M1 = M if K is None else [[RatFunc(x.num.exquo(K)) if not x.is_zero() else x for x in row] for row in M]
    det1 = determinant(M1, ring).num
    if det1.is_zero():
        raise SingularMatrixError("matrix is singular")
    det = det1 if K is None else det1 * K ** n
    G = None
    for i in range(n):
        for j in range(n):
            sub = [[x for c, x in enumerate(row) if c != j] for r, row in enumerate(M1) if r != i]
            minor = determinant(sub, ring).num if sub else ring.one
            if minor.is_zero():
                continue
            G = minor.raw if G is None else G.gcd(minor.raw)
            if G.is_constant():
                break
        if G is not None and G.is_constant():
            break
    denom = det1
    if G is not None and not G.is_constant():
        # gcd(G, det1 K) = gcd(G, det1) * gcd(G / gcd(G, det1), K)
        h1 = G.gcd(det1.raw)
        denom = det1.exquo(MultiPoly(ring, h1))
        G = G / h1
    if K is not None:
        h2 = G.gcd(K.raw) if G is not None and not G.is_constant() else None
        denom = denom * (K if h2 is None or h2.is_constant() else K.exquo(MultiPoly(ring, h2)))
    denom = denom.normalized(main)
    det = RatFunc(det)
    return InverseDenominator(denom, det.num)


def mat_mul(A: Matrix, B: Matrix) -> list[list[RatFunc]]:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    ring = _ring_of(A, [x for row in B for x in row])
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = RatFunc(ring.zero)
            for k in range(inner):
                if not row[k].is_zero() and not B[k][j].is_zero():
                    acc = acc + row[k] * B[k][j]
            new.append(acc)
        out.append(new)
    return out


def mat_vec(A: Matrix, v: Sequence[RatFunc]) -> list[RatFunc]:
    return [row[0] for row in mat_mul(A, [[x] for x in v])]
