"""Rational solutions with a given denominator and numerator degree bound.

Writing ``y = z / den`` with unknown polynomial numerators turns the system
into linear equations for the coefficients of ``z`` over the constant field
``Q(params)``; these are solved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .arith import MultiPoly, RatFunc, lcm_all
from .field import FieldSpec, apply_sigma
from .linalg import ff_solve
from .ore import LinearSystem, clear_denominators

TOTAL = "total"
EACH = "each"


@dataclass(frozen=True)
class SolutionBasis:
    """Solutions found within the bound.

    ``basis`` spans the homogeneous solutions over the constant field;
    ``particular`` solves the inhomogeneous system (None when no solution
    with the given denominator and degree exists).
    """

    particular: tuple[RatFunc, ...] | None
    basis: tuple[tuple[RatFunc, ...], ...]
    denbound_used: MultiPoly
    degree_bound_used: int
    degree_kind: str
    homogeneous: bool

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def spanning_set(self) -> list[tuple[RatFunc, ...]]:
        """Particular solution (if any, for an inhomogeneous system) followed
        by the homogeneous basis: every solution is a combination of these."""
        if self.particular is not None and not self.homogeneous:
            return [self.particular, *self.basis]
        return list(self.basis)

    def consistent(self) -> bool:
        return self.homogeneous or self.particular is not None


def verify_solution(system: LinearSystem, y: Sequence[RatFunc]) -> bool:
    return system.is_solution(y)


def monomials(gens: Sequence[str], bound: int, kind: str = EACH) -> list[tuple[int, ...]]:
    """Exponent vectors of degree at most ``bound`` (total, or in each generator)."""
    if kind not in (TOTAL, EACH):
        raise ValueError(f"unknown degree kind {kind!r}")
    out = [e for e in product(range(bound + 1), repeat=len(gens)) if kind == EACH or sum(e) <= bound]
    return sorted(out, key=lambda e: (sum(e), e))


def _expand(p: MultiPoly, gens: Sequence[str]) -> dict[tuple[int, ...], MultiPoly]:
    return p.coefficients(gens)


def rational_solutions(
    system: LinearSystem,
    den: MultiPoly,
    degree_bound: int,
    degree_kind: str = EACH,
) -> SolutionBasis:
    """All solutions ``z / den`` with numerator degrees bounded by ``degree_bound``."""
    if den.is_zero():
        raise ValueError("denominator must be nonzero")
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    f = system.field
    ring = f.ring
    den = ring.coerce(den)
    cleared, _ = clear_denominators(system)
    op, rhs = cleared.op, cleared.rhs
    gens = f.gen_names
    n = op.cols
    monos = monomials(gens, degree_bound, degree_kind)
    shifted_den = {k: apply_sigma(f, den, k) for k in op.coeffs}
    L = lcm_all(shifted_den.values(), ring, ring.names)
    cof = {k: L.exquo(d) for k, d in shifted_den.items()}

    columns = []
    for j in range(n):
        for mu in monos:
            t_mu = ring.from_terms({(0,) * len(f.params) + mu: 1})
            col = []
            for i in range(op.rows):
                acc = ring.zero
                for k, M in op.coeffs.items():
                    a = M[i][j]
                    if a.is_zero():
                        continue
                    acc = acc + a.num * cof[k] * apply_sigma(f, t_mu, k)
                col.append(acc)
            columns.append(col)
    targets = [(x * RatFunc(L)) for x in rhs]
    if any(not x.is_polynomial() for x in targets):
        raise AssertionError("cleared right-hand side is not polynomial")

    rows, b = [], []
    for i in range(op.rows):
        keys = set(_expand(targets[i].num, gens))
        expanded = [_expand(col[i], gens) for col in columns]
        for e in expanded:
            keys.update(e)
        tgt = _expand(targets[i].num, gens)
        for key in sorted(keys):
            rows.append([RatFunc(e.get(key, ring.zero)) for e in expanded])
            b.append(RatFunc(tgt.get(key, ring.zero)))
    homogeneous = all(x.is_zero() for x in rhs)
    if not rows:
        rows = [[RatFunc(ring.zero)] * len(columns)]
        b = [RatFunc(ring.zero)]
    sol = ff_solve(rows, b, ring)

    def assemble(c):
        out = []
        for j in range(n):
            z = RatFunc(ring.zero)
            for idx, mu in enumerate(monos):
                coeff = c[j * len(monos) + idx]
                if not coeff.is_zero():
                    z = z + coeff * RatFunc(ring.from_terms({(0,) * len(f.params) + mu: 1}))
            out.append(z / RatFunc(den))
        return tuple(out)

    hom = LinearSystem.homogeneous(op)
    basis = tuple(_canonical(assemble(v)) for v in sol.nullspace)
    for v in basis:
        if not hom.is_solution(v):
            raise AssertionError("basis vector fails the homogeneous system")
    particular = None
    if sol.consistent:
        particular = assemble(sol.particular)
        if not system.is_solution(particular):
            raise AssertionError("particular solution fails the system")
    return SolutionBasis(particular, basis, den, degree_bound, degree_kind, homogeneous)


def _canonical(v: tuple[RatFunc, ...]) -> tuple[RatFunc, ...]:
    """Scale so the first nonzero entry's numerator has leading coefficient 1."""
    for x in v:
        if not x.is_zero():
            lc = x.num.leading_coefficient()
            if x.num.free_of(x.ring.params) and lc != 1:
                return tuple(y / lc for y in v)
            return v
    return v


def span_coefficients(vectors: Sequence[Sequence[RatFunc]], y: Sequence[RatFunc], field: FieldSpec) -> list[RatFunc] | None:
    """Constants c (in Q(params)) with ``sum c_i vectors_i == y``, or None."""
    ring = field.ring
    if not vectors:
        return [] if all(RatFunc.from_value(ring, x).is_zero() for x in y) else None
    entries = [x for v in vectors for x in v] + [RatFunc.from_value(ring, x) for x in y]
    L = lcm_all([x.den for x in entries if not x.is_zero()], ring, ring.names)
    Lr = RatFunc(L)
    gens = field.gen_names
    rows, rhs = [], []
    for comp in range(len(y)):
        polys = [(RatFunc.from_value(ring, v[comp]) * Lr).num for v in vectors]
        target = (RatFunc.from_value(ring, y[comp]) * Lr).num
        exps = [_expand(p, gens) for p in polys]
        tgt = _expand(target, gens)
        keys = set(tgt)
        for e in exps:
            keys.update(e)
        for key in sorted(keys):
            rows.append([RatFunc(e.get(key, ring.zero)) for e in exps])
            rhs.append(RatFunc(tgt.get(key, ring.zero)))
    if not rows:
        return [RatFunc(ring.zero)] * len(vectors)
    sol = ff_solve(rows, rhs, ring)
    return list(sol.particular) if sol.consistent else None


def in_span(vectors: Sequence[Sequence[RatFunc]], y: Sequence[RatFunc], field: FieldSpec) -> bool:
    return span_coefficients(vectors, y, field) is not None

