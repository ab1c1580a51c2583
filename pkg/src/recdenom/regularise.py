"""Turn an arbitrary system into a related head-regular and tail-regular pair.

Pipeline: column reduction, row reduction and degree equalisation give a
square head-regular block (rows that vanish become compatibility
conditions, vanished columns free unknowns). The head block is then row
reduced with respect to ``sigma^-1`` after multiplying by ``sigma^-l`` and
shifted back, which makes its trailing matrix regular.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import RatFunc
from .linalg import determinant
from .ore import NEG_INF, LinearSystem, OreMatrix, Transform, clear_denominators, ore_apply
from .reduction import column_reduce, row_reduce


class Unsolvable(Exception):
    """The system has no solution: some compatibility condition is nonzero."""

    def __init__(self, witness: tuple[RatFunc, ...], compat: tuple[RatFunc, ...]):
        self.witness = witness
        self.compat = compat
        shown = ", ".join(str(w) for w in witness)
        super().__init__(f"inconsistent system; nonzero compatibility conditions: {shown}")


@dataclass(frozen=True)
class RegularisedSystem:
    """Result of :func:`regularise`.

    ``head`` (r x r, leading matrix regular) is related to ``original`` via
    ``P_total`` and ``Q_total``: solutions are ``y = Q_total.fwd(y~)`` with
    ``y~ = (y~_head, y~_free)`` where ``y~_head`` solves ``head`` and the
    unknowns at ``free_vars`` are arbitrary. ``tail`` (trailing matrix
    regular) equals ``tail_transform.fwd`` applied to ``head`` and has the
    same solutions.
    """

    original: LinearSystem
    head: LinearSystem
    tail: LinearSystem
    P_total: Transform
    Q_total: Transform
    tail_transform: Transform
    compat: tuple[RatFunc, ...]
    free_vars: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.head.op.rows

    @property
    def order(self) -> int:
        return self.head.op.hi

    def lift(self, y_head, free=None) -> list[RatFunc]:
        """Original-coordinate solution from a head solution and free values."""
        zero = RatFunc(self.original.field.ring.zero)
        free = list(free) if free is not None else [zero] * len(self.free_vars)
        return ore_apply(self.Q_total.fwd, list(y_head) + free)

    def project(self, y) -> list[RatFunc]:
        """Transformed coordinates ``Q_total^-1 y``."""
        return ore_apply(self.Q_total.inv, y)


def _leading(op: OreMatrix):
    return op.coefficient(op.hi)


def is_head_regular(system: LinearSystem) -> bool:
    op = system.op
    if op.rows != op.cols:
        raise ValueError("head regularity is defined for square systems")
    if op.is_zero():
        return False
    return not determinant(_leading(op), op.field.ring).is_zero()


def is_tail_regular(system: LinearSystem) -> bool:
    op = system.op
    if op.rows != op.cols:
        raise ValueError("tail regularity is defined for square systems")
    if op.is_zero():
        return False
    return not determinant(op.coefficient(op.lo), op.field.ring).is_zero()


def _equalise(op: OreMatrix, rows: int, orientation: int) -> list[int]:
    """Shift powers that bring the first ``rows`` rows to a common degree."""
    degs = op.row_degrees(orientation)[:rows]
    nu = max(degs)
    return [orientation * (nu - d) for d in degs] + [0] * (op.rows - rows)


def regularise(system: LinearSystem) -> RegularisedSystem:
    """Head/tail regular related systems; raises :class:`Unsolvable`."""
    A = system.op
    if A.is_zero():
        raise ValueError("cannot regularise the zero operator")
    if not A.is_polynomial():
        raise ValueError("system operator must not contain negative shifts")
    f = system.field
    m, n = A.rows, A.cols

    col = column_reduce(A)
    row = row_reduce(col.R)
    r = row.rank
    if r != col.rank:
        raise AssertionError(f"row rank {r} differs from column rank {col.rank}")
    delta = Transform.shifts(f, _equalise(row.R, r, 1))
    P = delta @ row.P
    Q = col.Q
    op = P.fwd @ A @ Q.fwd
    rhs = tuple(ore_apply(P.fwd, system.rhs))
    compat = rhs[r:]
    witness = tuple(c for c in compat if not c.is_zero())
    if witness:
        raise Unsolvable(witness, compat)

    core = op.submatrix(range(r), range(r))
    lo = core.lo
    if lo:
        down = Transform.shifts(f, [-lo] * r + [0] * (m - r))
        P = down @ P
        core = core.shifted(-lo)
        rhs = tuple(ore_apply(down.fwd, rhs))
    head, scale = clear_denominators(LinearSystem(core, rhs[:r]))
    scale_full = Transform.row_scaling(f, [scale.fwd.coefficient(0)[i][i] for i in range(r)] + [RatFunc(f.ring.one)] * (m - r))
    P = scale_full @ P

    tail, T = _tail(head)
    return RegularisedSystem(
        original=system,
        head=head,
        tail=tail,
        P_total=P,
        Q_total=Q,
        tail_transform=T,
        compat=tuple(compat),
        free_vars=tuple(range(r, n)),
    )


def _tail(head: LinearSystem) -> tuple[LinearSystem, Transform]:
    f = head.field
    r = head.op.rows
    ell = head.op.hi
    down = Transform.shifts(f, [-ell] * r)
    red = row_reduce(down.fwd @ head.op, orientation=-1)
    if red.rank != r:
        raise AssertionError("sigma^-1 reduction lost rank on a head-regular system")
    W = red.P @ down
    eq = Transform.shifts(f, _equalise(red.R, r, -1))
    W = eq @ W
    # rows now share the sigma^-1 degree; move the lowest power back to sigma^0
    lowered = W.fwd @ head.op
    up = Transform.shifts(f, [-lowered.lo] * r)
    W = up @ W
    op = W.fwd @ head.op
    rhs = tuple(ore_apply(W.fwd, head.rhs))
    tail, scale = clear_denominators(LinearSystem(op, rhs))
    return tail, scale @ W


def related_degrees(reg: RegularisedSystem) -> dict[str, int | float]:
    """Orders of the pieces, for reports."""
    return {
        "rank": reg.rank,
        "head_order": reg.head.op.hi if not reg.head.op.is_zero() else NEG_INF,
        "tail_order": reg.tail.op.hi if not reg.tail.op.is_zero() else NEG_INF,
    }
