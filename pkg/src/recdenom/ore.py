"""Operator matrices over F(t)[sigma, sigma^-1].

An :class:`OreMatrix` stores one rational-function coefficient matrix per
power of sigma. Multiplication follows ``sigma * a = sigma(a) * sigma``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .arith import RatFunc, lcm_all
from .field import FieldSpec, apply_sigma

NEG_INF = float("-inf")


def _zero(field: FieldSpec) -> RatFunc:
    return RatFunc(field.ring.zero)


def _one(field: FieldSpec) -> RatFunc:
    return RatFunc(field.ring.one)


class OreMatrix:
    """A rows x cols operator matrix ``sum_k coeffs[k] * sigma^k``.

    Coefficient matrices are tuples of tuples of :class:`RatFunc`. Zero
    coefficient matrices are never stored, so the support ``[lo, hi]`` is
    tight; the zero operator has empty support.
    """

    __slots__ = ("field", "rows", "cols", "coeffs")

    def __init__(self, field: FieldSpec, rows: int, cols: int, coeffs: Mapping[int, Sequence[Sequence]] = ()):
        self.field = field
        self.rows = rows
        self.cols = cols
        ring = field.ring
        stored = {}
        for k, M in dict(coeffs).items():
            if len(M) != rows or any(len(r) != cols for r in M):
                raise ValueError(f"coefficient of sigma^{k} is not {rows}x{cols}")
            M = tuple(tuple(RatFunc.from_value(ring, x) for x in r) for r in M)
            if any(not x.is_zero() for r in M for x in r):
                stored[int(k)] = M
        self.coeffs = dict(sorted(stored.items()))

    # construction -----------------------------------------------------
    @classmethod
    def from_list(cls, field: FieldSpec, mats: Sequence[Sequence[Sequence]]) -> OreMatrix:
        """``mats[k]`` is the coefficient of sigma^k."""
        if not mats:
            raise ValueError("need at least one coefficient matrix")
        rows = len(mats[0])
        cols = len(mats[0][0]) if rows else 0
        return cls(field, rows, cols, dict(enumerate(mats)))

    @classmethod
    def zero(cls, field: FieldSpec, rows: int, cols: int) -> OreMatrix:
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> OreMatrix:
        return cls.shift(field, n, 0)

    @classmethod
    def shift(cls, field: FieldSpec, n: int, k: int) -> OreMatrix:
        """sigma^k times the n x n identity."""
        return cls.diagonal_shifts(field, [k] * n)

    @classmethod
    def diagonal_shifts(cls, field: FieldSpec, powers: Sequence[int]) -> OreMatrix:
        n = len(powers)
        coeffs: dict[int, list[list[RatFunc]]] = {}
        for i, k in enumerate(powers):
            M = coeffs.setdefault(k, [[_zero(field)] * n for _ in range(n)])
            M[i][i] = _one(field)
        return cls(field, n, n, coeffs)

    @classmethod
    def scalar(cls, field: FieldSpec, M: Sequence[Sequence], k: int = 0) -> OreMatrix:
        rows = len(M)
        return cls(field, rows, len(M[0]) if rows else 0, {k: M})

    @classmethod
    def from_entries(cls, field: FieldSpec, rows: int, cols: int, entries: Mapping[tuple[int, int], Mapping[int, RatFunc]]) -> OreMatrix:
        """Build from ``{(i, j): {k: coefficient}}``."""
        coeffs: dict[int, list[list[RatFunc]]] = {}
        for (i, j), poly in entries.items():
            for k, c in poly.items():
                M = coeffs.setdefault(k, [[_zero(field)] * cols for _ in range(rows)])
                M[i][j] = M[i][j] + c
        return cls(field, rows, cols, coeffs)

    # inspection -------------------------------------------------------
    @property
    def lo(self) -> int | None:
        return next(iter(self.coeffs), None)

    @property
    def hi(self) -> int | None:
        return next(reversed(self.coeffs), None) if self.coeffs else None

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_polynomial(self) -> bool:
        """True if no negative powers of sigma occur."""
        return self.is_zero() or self.lo >= 0

    def coefficient(self, k: int) -> tuple[tuple[RatFunc, ...], ...]:
        M = self.coeffs.get(k)
        if M is None:
            z = _zero(self.field)
            return tuple(tuple(z for _ in range(self.cols)) for _ in range(self.rows))
        return M

    def entry(self, i: int, j: int) -> dict[int, RatFunc]:
        return {k: M[i][j] for k, M in self.coeffs.items() if not M[i][j].is_zero()}

    def row_support(self, i: int) -> list[int]:
        return [k for k, M in self.coeffs.items() if any(not x.is_zero() for x in M[i])]

    def col_support(self, j: int) -> list[int]:
        return [k for k, M in self.coeffs.items() if any(not M[i][j].is_zero() for i in range(self.rows))]

    def degree(self, orientation: int = 1) -> int | float:
        """Degree in sigma (``orientation=-1``: in sigma^-1); -inf for zero."""
        if not self.coeffs:
            return NEG_INF
        return max(orientation * k for k in self.coeffs)

    def row_degrees(self, orientation: int = 1) -> list[int | float]:
        return [max((orientation * k for k in self.row_support(i)), default=NEG_INF) for i in range(self.rows)]

    def col_degrees(self, orientation: int = 1) -> list[int | float]:
        return [max((orientation * k for k in self.col_support(j)), default=NEG_INF) for j in range(self.cols)]

    def degrees(self) -> tuple[int | float, list[int | float]]:
        return self.degree(), self.row_degrees()

    def leading_matrix(self):
        return self.coefficient(self.hi) if self.coeffs else self.coefficient(0)

    def trailing_matrix(self):
        return self.coefficient(self.lo) if self.coeffs else self.coefficient(0)

    # algebra ----------------------------------------------------------
    def _check(self, other: OreMatrix) -> None:
        if other.field != self.field:
            raise ValueError("operators over different fields")

    def __eq__(self, other) -> bool:
        if not isinstance(other, OreMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.shape, tuple(self.coeffs.items())))

    def __add__(self, other: OreMatrix) -> OreMatrix:
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        out = {}
        for k in set(self.coeffs) | set(other.coeffs):
            A, B = self.coefficient(k), other.coefficient(k)
            out[k] = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]
        return OreMatrix(self.field, self.rows, self.cols, out)

    def __neg__(self) -> OreMatrix:
        return OreMatrix(self.field, self.rows, self.cols, {k: [[-x for x in r] for r in M] for k, M in self.coeffs.items()})

    def __sub__(self, other: OreMatrix) -> OreMatrix:
        return self + (-other)

    def __matmul__(self, other: OreMatrix) -> OreMatrix:
        return ore_mul(self, other)

    def shifted(self, k: int) -> OreMatrix:
        """sigma^k * self."""
        if k == 0:
            return self
        f = self.field
        return OreMatrix(
            f, self.rows, self.cols,
            {i + k: [[apply_sigma(f, x, k) for x in r] for r in M] for i, M in self.coeffs.items()},
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> OreMatrix:
        return OreMatrix(
            self.field, len(rows), len(cols),
            {k: [[M[i][j] for j in cols] for i in rows] for k, M in self.coeffs.items()},
        )

    def scale_rows(self, factors: Sequence[RatFunc]) -> OreMatrix:
        """diag(factors) * self (scalars, no shift)."""
        return OreMatrix(
            self.field, self.rows, self.cols,
            {k: [[factors[i] * x for x in r] for i, r in enumerate(M)] for k, M in self.coeffs.items()},
        )

    def apply(self, y: Sequence[RatFunc]) -> list[RatFunc]:
        return ore_apply(self, y)

    def __str__(self) -> str:
        if not self.coeffs:
            return f"0 ({self.rows}x{self.cols})"
        lines = []
        for k, M in self.coeffs.items():
            body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in M)
            lines.append(f"A[{k}] = [{body}]")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"OreMatrix({self.rows}x{self.cols}, support={list(self.coeffs)})"


def ore_mul(L: OreMatrix, M: OreMatrix) -> OreMatrix:
    """Product with ``(A sigma^i)(B sigma^j) = A sigma^i(B) sigma^(i+j)``."""
    L._check(M)
    if L.cols != M.rows:
        raise ValueError(f"shape mismatch {L.shape} @ {M.shape}")
    f = L.field
    acc: dict[int, list[list[RatFunc]]] = {}
    shifted_cache: dict[int, tuple] = {}
    for i, A in L.coeffs.items():
        for j, B in M.coeffs.items():
            SB = shifted_cache.get((i, j))
            if SB is None:
                SB = tuple(tuple(apply_sigma(f, x, i) for x in r) for r in B)
                shifted_cache[(i, j)] = SB
            C = acc.setdefault(i + j, [[_zero(f)] * M.cols for _ in range(L.rows)])
            for r in range(L.rows):
                row = A[r]
                for s in range(L.cols):
                    a = row[s]
                    if a.is_zero():
                        continue
                    brow = SB[s]
                    target = C[r]
                    for c in range(M.cols):
                        if not brow[c].is_zero():
                            target[c] = target[c] + a * brow[c]
    return OreMatrix(f, L.rows, M.cols, acc)


def ore_apply(L: OreMatrix, y: Sequence[RatFunc]) -> list[RatFunc]:
    """``sum_k coeffs[k] * sigma^k(y)``."""
    if len(y) != L.cols:
        raise ValueError(f"operator has {L.cols} columns, vector has {len(y)} entries")
    f = L.field
    y = [RatFunc.from_value(f.ring, v) for v in y]
    out = [_zero(f) for _ in range(L.rows)]
    for k, M in L.coeffs.items():
        sy = [apply_sigma(f, v, k) if not v.is_zero() else v for v in y]
        for i in range(L.rows):
            for j in range(L.cols):
                if not M[i][j].is_zero() and not sy[j].is_zero():
                    out[i] = out[i] + M[i][j] * sy[j]
    return out


@dataclass(frozen=True)
class Transform:
    """A unimodular operator together with its inverse.

    ``A @ B`` composes as operators and inverts in reverse order, so the
    pair stays consistent by construction.
    """

    fwd: OreMatrix
    inv: OreMatrix

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> Transform:
        I = OreMatrix.identity(field, n)
        return cls(I, I)

    @classmethod
    def shifts(cls, field: FieldSpec, powers: Sequence[int]) -> Transform:
        return cls(OreMatrix.diagonal_shifts(field, powers), OreMatrix.diagonal_shifts(field, [-k for k in powers]))

    @classmethod
    def permutation(cls, field: FieldSpec, perm: Sequence[int]) -> Transform:
        """Row ``i`` of ``fwd @ A`` is row ``perm[i]`` of ``A``."""
        n = len(perm)
        z, o = _zero(field), _one(field)
        P = [[o if perm[i] == j else z for j in range(n)] for i in range(n)]
        Pt = [[P[j][i] for j in range(n)] for i in range(n)]
        return cls(OreMatrix.scalar(field, P), OreMatrix.scalar(field, Pt))

    @classmethod
    def row_scaling(cls, field: FieldSpec, factors: Sequence[RatFunc]) -> Transform:
        n = len(factors)
        z = _zero(field)
        D = [[factors[i] if i == j else z for j in range(n)] for i in range(n)]
        Di = [[factors[i].inverse() if i == j else z for j in range(n)] for i in range(n)]
        return cls(OreMatrix.scalar(field, D), OreMatrix.scalar(field, Di))

    def __matmul__(self, other: Transform) -> Transform:
        return Transform(self.fwd @ other.fwd, other.inv @ self.inv)

    @property
    def size(self) -> int:
        return self.fwd.rows

    def is_identity(self) -> bool:
        return self.fwd == OreMatrix.identity(self.fwd.field, self.fwd.rows)

    def certify(self) -> bool:
        I = OreMatrix.identity(self.fwd.field, self.fwd.rows)
        return self.fwd @ self.inv == I and self.inv @ self.fwd == I


@dataclass(frozen=True)
class LinearSystem:
    """``op(y) = rhs`` with polynomial coefficient entries."""

    op: OreMatrix
    rhs: tuple[RatFunc, ...]

    def __post_init__(self):
        if len(self.rhs) != self.op.rows:
            raise ValueError("rhs length does not match the number of equations")
        ring = self.op.field.ring
        object.__setattr__(self, "rhs", tuple(RatFunc.from_value(ring, x) for x in self.rhs))

    @classmethod
    def homogeneous(cls, op: OreMatrix) -> LinearSystem:
        return cls(op, tuple(_zero(op.field) for _ in range(op.rows)))

    @property
    def field(self) -> FieldSpec:
        return self.op.field

    @property
    def order(self) -> int:
        return self.op.hi - self.op.lo if self.op.coeffs else 0

    def is_homogeneous(self) -> bool:
        return all(x.is_zero() for x in self.rhs)

    def residual(self, y: Sequence[RatFunc]) -> list[RatFunc]:
        return [a - b for a, b in zip(ore_apply(self.op, y), self.rhs)]

    def is_solution(self, y: Sequence[RatFunc]) -> bool:
        return all(r.is_zero() for r in self.residual(y))

    def normalized(self) -> LinearSystem:
        """Shift so the lowest power is sigma^0 (applied to every row)."""
        lo = self.op.lo
        if not lo:
            return self
        op = self.op.shifted(-lo)
        return LinearSystem(op, tuple(apply_sigma(self.field, x, -lo) for x in self.rhs))


def _row_clearing(op: OreMatrix, rhs: Sequence[RatFunc], i: int):
    """(L, g): multiplying row i by L/g makes it polynomial and content-free."""
    ring = op.field.ring
    entries = [M[i][j] for M in op.coeffs.values() for j in range(op.cols)] + [rhs[i]]
    entries = [x for x in entries if not x.is_zero()]
    if not entries:
        return ring.one, ring.one
    L = lcm_all([x.den for x in entries], ring, ring.names)
    g = None
    for x in entries:
        num = x.num * L.exquo(x.den)
        g = num if g is None else g._wrap(g.raw.gcd(num.raw))
    return L, g


def row_denominators(op: OreMatrix, rhs: Sequence[RatFunc]) -> list[RatFunc]:
    """Per-row factors that make every row (and its rhs entry) polynomial
    and content-free in the generators."""
    return [RatFunc(*_row_clearing(op, rhs, i)) for i in range(op.rows)]


def clear_denominators(system: LinearSystem) -> tuple[LinearSystem, Transform]:
    """Row-wise scaling to polynomial, primitive rows; returns the scaled
    system and the (unimodular) scaling transform."""
    op, rhs = system.op, system.rhs
    clearing = [_row_clearing(op, rhs, i) for i in range(op.rows)]

    def scaled(i, x):
        if x.is_zero():
            return x
        L, g = clearing[i]
        return RatFunc((x.num * L.exquo(x.den)).exquo(g))

    new_op = OreMatrix(
        op.field, op.rows, op.cols,
        {k: [[scaled(i, x) for x in r] for i, r in enumerate(M)] for k, M in op.coeffs.items()},
    )
    new_rhs = tuple(scaled(i, x) for i, x in enumerate(rhs))
    S = Transform.row_scaling(system.field, [RatFunc(L, g) for L, g in clearing])
    return LinearSystem(new_op, new_rhs), S


@dataclass(frozen=True)
class RelatedSystem:
    """``system`` is ``P A Q`` applied to ``Q^-1 y``; original solutions are
    recovered as ``y = Q.fwd(y_tilde)``."""

    system: LinearSystem
    P: Transform
    Q: Transform

    def to_original(self, y_tilde: Sequence[RatFunc]) -> list[RatFunc]:
        return ore_apply(self.Q.fwd, y_tilde)

    def from_original(self, y: Sequence[RatFunc]) -> list[RatFunc]:
        return ore_apply(self.Q.inv, y)


def apply_transform(system: LinearSystem, P: Transform, Q: Transform | None = None, clear: bool = True) -> RelatedSystem:
    """Related system ``(P A Q)(y~) = P(b)``, denominators cleared row-wise
    (the scaling is folded into the returned ``P``)."""
    if Q is None:
        Q = Transform.identity(system.field, system.op.cols)
    if P.fwd.cols != system.op.rows or Q.fwd.rows != system.op.cols:
        raise ValueError("transform shape does not match the system")
    op = P.fwd @ system.op @ Q.fwd
    rhs = tuple(ore_apply(P.fwd, system.rhs))
    out = LinearSystem(op, rhs)
    if clear:
        out, S = clear_denominators(out)
        P = S @ P
    return RelatedSystem(out, P, Q)
