"""Aperiodic denominator bounds.

For a head-regular system of order ``l`` with head denominator ``m`` (of
the inverse leading matrix) and tail denominator ``p`` (of the inverse
trailing matrix of the related tail-regular system), let
``D = disp(sigma^-l(ap m), ap p)``. Then every aperiodic solution
denominator divides

    gcd(prod_{j=0..D} sigma^(-l-j)(ap m), prod_{j=0..D} sigma^j(ap p)).

With several generators the dispersions are taken per generator and either
combined into one ``D = max D_i`` (``improved``) or turned into one bound
per generator that are merged by lcm.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .arith import MultiPoly, RatFunc, factor, lcm_all, poly_gcd
from .dispersion import NEG_INF, dispersion
from .field import SIGMA, FieldSpec, aperiodic, apply_sigma
from .linalg import matrix_inverse_denominator
from .ore import LinearSystem
from .regularise import RegularisedSystem, regularise


@dataclass(frozen=True)
class GeneratorBound:
    gen: str
    m_poly: MultiPoly
    p_poly: MultiPoly
    D: int | float
    d: MultiPoly | None = None  # per-generator bound (lcm path only)


@dataclass(frozen=True)
class DenBound:
    """``d`` bounds the aperiodic part of every solution denominator.

    ``head_d`` is the bound for the unknowns of the head system; ``d`` is
    that bound carried back through the column transform. When the system
    has free unknowns, ``covers_all`` is False: only the head unknowns are
    bounded.
    """

    d: MultiPoly
    per_generator: tuple[GeneratorBound, ...]
    improved: bool
    m: MultiPoly
    p: MultiPoly
    order: int
    head_d: MultiPoly
    free_vars: tuple[int, ...] = ()
    covers_all: bool = True
    regularised: RegularisedSystem | None = dc_field(default=None, repr=False, compare=False)

    @property
    def D(self) -> int | float:
        return max((g.D for g in self.per_generator), default=NEG_INF)


def _normal(field: FieldSpec, p: MultiPoly, main=None) -> MultiPoly:
    return p.normalized(field.gen_names if main is None else main)


def head_tail_denominators(reg: RegularisedSystem) -> tuple[MultiPoly, MultiPoly]:
    head, tail = reg.head.op, reg.tail.op
    m = matrix_inverse_denominator(head.coefficient(head.hi)).denominator
    p = matrix_inverse_denominator(tail.coefficient(tail.lo)).denominator
    f = reg.original.field
    return _normal(f, m), _normal(f, p)


def _shift_product(field: FieldSpec, p: MultiPoly, start: int, step: int, count: int) -> MultiPoly:
    out = field.ring.one
    for j in range(count):
        out = out * apply_sigma(field, p, start + step * j)
    return out


def _shifted_factors(field: FieldSpec, p: MultiPoly, start: int, step: int, count: int, main) -> Counter:
    """Irreducible factors (normalised w.r.t. ``main``) of the shift product,
    with multiplicities."""
    out = Counter()
    for f, e in factor(p)[1]:
        if f.free_of(main):
            continue
        for j in range(count):
            out[apply_sigma(field, f, start + step * j).normalized(main)] += e
    return out


def bound_formula(field: FieldSpec, am: MultiPoly, ap: MultiPoly, ell: int, D, main=None, method: str = "factor") -> MultiPoly:
    """gcd of the two shift products (1 when D is -inf).

    ``method="gcd"`` expands both products; ``"factor"`` shifts the
    irreducible factors of ``am`` and ``ap`` and takes the smaller
    multiplicity of each, which avoids forming the products.
    """
    if D == NEG_INF:
        return field.ring.one
    if D == float("inf"):
        raise ValueError("infinite dispersion: remove periodic parts first")
    main = field.gen_names if main is None else tuple(main)
    if method == "gcd":
        left = _shift_product(field, am, -ell, -1, D + 1)
        right = _shift_product(field, ap, 0, 1, D + 1)
        return poly_gcd(left, right, main)
    if method != "factor":
        raise ValueError(f"unknown method {method!r}")
    left = _shifted_factors(field, am, -ell, -1, D + 1, main)
    right = _shifted_factors(field, ap, 0, 1, D + 1, main)
    out = field.ring.one
    for h, e in (left & right).items():
        out = out * h ** e
    return out


def _as_regularised(system) -> RegularisedSystem:
    if isinstance(system, RegularisedSystem):
        return system
    if isinstance(system, LinearSystem):
        return regularise(system)
    raise TypeError(f"expected a system, got {type(system).__name__}")


def _gen_dispersion(field, am, ap, ell, gen) -> int | float:
    if am.is_constant() or ap.is_constant():
        return NEG_INF
    return dispersion(field, apply_sigma(field, am, -ell), ap, gen)


def denbound_single(system, gen=0) -> DenBound:
    """Bound w.r.t. one generator; aperiodic parts are taken w.r.t. ``gen``
    and the gcd is taken over the other generators' fraction field."""
    reg = _as_regularised(system)
    f = reg.original.field
    name = f.generator(gen).name
    m, p = head_tail_denominators(reg)
    ell = reg.order
    am, ap = aperiodic(f, m, [name]), aperiodic(f, p, [name])
    D = _gen_dispersion(f, am, ap, ell, name)
    main = f.gen_names if len(f.generators) == 1 else (name,)
    d = _normal(f, bound_formula(f, am, ap, ell, D, main), main)
    return _finish(reg, d, (GeneratorBound(name, m, p, D, d),), improved=len(f.generators) == 1, m=m, p=p)


def denbound_multivariate(system, improved: bool = True) -> DenBound:
    """Bound over all generators.

    ``improved``: one ``D = max D_i`` and a single gcd over the full
    polynomial ring. Otherwise one bound per generator, merged by lcm.
    """
    reg = _as_regularised(system)
    f = reg.original.field
    m, p = head_tail_denominators(reg)
    ell = reg.order
    if improved:
        am, ap = aperiodic(f, m), aperiodic(f, p)
        gens = tuple(
            GeneratorBound(g.name, m, p, _gen_dispersion(f, am, ap, ell, g.name)) for g in f.generators
        )
        D = max(g.D for g in gens)
        d = _normal(f, bound_formula(f, am, ap, ell, D))
        return _finish(reg, d, gens, improved=True, m=m, p=p)
    gens = tuple(denbound_single(reg, g.name).per_generator[0] for g in f.generators)
    d = lcm_all([g.d for g in gens], f.ring, f.gen_names)
    return _finish(reg, _normal(f, aperiodic(f, d)), gens, improved=False, m=m, p=p)


def denbound(system, merge: str = "improved") -> DenBound:
    """Dispatch: one generator uses the single bound, several use ``merge``."""
    if merge not in ("improved", "lcm"):
        raise ValueError(f"unknown merge strategy {merge!r}")
    reg = _as_regularised(system)
    if len(reg.original.field.generators) == 1:
        return denbound_single(reg, 0)
    return denbound_multivariate(reg, improved=merge == "improved")


def _finish(reg: RegularisedSystem, d: MultiPoly, gens, improved: bool, m, p) -> DenBound:
    lifted = lift_bound(reg, d)
    return DenBound(
        d=lifted,
        per_generator=tuple(gens),
        improved=improved,
        m=m,
        p=p,
        order=reg.order,
        head_d=d,
        free_vars=reg.free_vars,
        covers_all=not reg.free_vars,
        regularised=reg,
    )


def lift_bound(reg: RegularisedSystem, d: MultiPoly) -> MultiPoly:
    """Carry a bound for ``y~`` back to ``y = Q(y~)``.

    ``sigma^k(y~)`` has denominator dividing ``sigma^k(d)``, so the entries of
    ``y`` have denominators dividing the lcm over k of ``sigma^k(d)`` times
    the denominators of the coefficient matrix of ``sigma^k`` in ``Q``.
    """
    Q = reg.Q_total.fwd
    f = reg.original.field
    if reg.Q_total.is_identity():
        return d
    parts = []
    for k, M in Q.coeffs.items():
        dens = [x.den for row in M for x in row if not x.is_zero()]
        parts.append(apply_sigma(f, d, k) * lcm_all(dens, f.ring))
    return _normal(f, aperiodic(f, lcm_all(parts, f.ring)))


def complete_bound_guess(db: DenBound, field: FieldSpec, powers: Sequence[int] | Mapping[str, int] | None = None) -> MultiPoly:
    """``prod t_i^(m_i) * d`` for user-chosen powers (a guess: the periodic
    power is not determined by the aperiodic bound)."""
    ring = field.ring
    if powers is None:
        powers = [0] * len(field.generators)
    if isinstance(powers, Mapping):
        unknown = set(powers) - set(field.gen_names)
        if unknown:
            raise ValueError(f"unknown generators in powers: {sorted(unknown)}")
        powers = [powers.get(n, 0) for n in field.gen_names]
    powers = list(powers)
    if len(powers) != len(field.generators):
        raise ValueError(f"expected {len(field.generators)} powers, got {len(powers)}")
    out = db.d
    for g, e in zip(field.generators, powers):
        if e < 0:
            raise ValueError("powers must be nonnegative")
        if e and g.kind == SIGMA:
            raise ValueError(f"generator {g.name} is a Sigma-monomial; its power must be 0")
        if e:
            out = out * ring.gen(g.name) ** e
    return out


def check_bound(db_d: MultiPoly, field: FieldSpec, y: Sequence[RatFunc]) -> bool:
    """ap(den y_i) | d for every entry."""
    for x in y:
        if x.is_zero():
            continue
        q = aperiodic(field, x.den)
        if not q.is_constant() and not q.divides(db_d):
            return False
    return True


def solution_denominator(y: Sequence[RatFunc], field: FieldSpec) -> MultiPoly:
    """Common denominator q of a vector (reduced representation)."""
    return lcm_all([x.den for x in y if not x.is_zero()], field.ring, field.gen_names)

