"""Spread and dispersion of polynomials with respect to one generator.

``spread(a, b)`` is the set of ``k >= 0`` such that ``gcd(a, sigma^k(b))``
has positive degree in the chosen generator. Every candidate shift found by
the algebraic methods below is confirmed by an explicit gcd before it is
reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import flint

from .arith import MultiPoly, PolyRing, RatFunc, factor, gcd_degree, poly_resultant, to_fraction
from .field import PI, SIGMA, FieldSpec, apply_sigma, numeric_power_exponent, split_periodic

INF = math.inf
NEG_INF = -math.inf

_SHIFT_VAR = "_kappa"


@dataclass(frozen=True)
class SpreadResult:
    finite_set: tuple[int, ...]
    is_infinite: bool = False

    def __post_init__(self):
        if self.is_infinite and self.finite_set:
            raise ValueError("an infinite spread carries no finite set")

    @property
    def dispersion(self) -> int | float:
        if self.is_infinite:
            return INF
        return self.finite_set[-1] if self.finite_set else NEG_INF

    def __str__(self) -> str:
        if self.is_infinite:
            return "spread = infinite; disp = +inf"
        body = ", ".join(map(str, self.finite_set))
        return f"spread = {{{body}}}; disp = {format_disp(self.dispersion)}"


def format_disp(value) -> str:
    if value == INF:
        return "+inf"
    if value == NEG_INF:
        return "-inf"
    return str(value)


def _has_common_factor(field: FieldSpec, a: MultiPoly, b: MultiPoly, k: int, var: str) -> bool:
    return gcd_degree(a, apply_sigma(field, b, k), var) > 0


def _verified(field, a, b, var, candidates) -> SpreadResult:
    ks = sorted({k for k in candidates if k >= 0 and _has_common_factor(field, a, b, k, var)})
    return SpreadResult(tuple(ks))


def _check_inputs(field: FieldSpec, a: MultiPoly, b: MultiPoly, gen) -> tuple[MultiPoly, MultiPoly, str]:
    if a.is_zero() or b.is_zero():
        raise ValueError("spread of the zero polynomial")
    ring = field.ring
    return ring.coerce(a), ring.coerce(b), field.generator(gen).name


def spread(field: FieldSpec, a: MultiPoly, b: MultiPoly, gen=0, method: str = "auto") -> SpreadResult:
    """Spread of ``a`` and ``b`` w.r.t. generator ``gen``.

    ``method`` is ``"resultant"`` (single-generator fields only),
    ``"roots"`` (single generator, no parameters: enclosures of the complex
    roots give the candidate shifts), ``"scan"`` (q-rational field with a
    symbolic base: every shift up to a q-degree bound is tested),
    ``"factor"`` or ``"auto"`` (roots or scan for one generator, factor
    otherwise).
    """
    a, b, var = _check_inputs(field, a, b, gen)
    if a.free_of([var]) or b.free_of([var]):
        return SpreadResult(())
    g = field.generator(var)
    if g.kind == PI and a.lowest_power(var) > 0 and b.lowest_power(var) > 0:
        return SpreadResult((), True)
    if method == "auto":
        if len(field.generators) == 1:
            method = "roots" if not field.params else "scan"
        else:
            method = "factor"
    if method == "scan":
        if len(field.generators) != 1 or not g.symbolic:
            raise ValueError("the scan method needs a single Pi generator with a symbolic base")
        return _spread_q_scan(field, a, b, var)
    if method == "roots":
        if len(field.generators) != 1 or field.params:
            raise ValueError("the roots method needs one generator and no parameters")
        return _spread_roots(field, a, b, var)
    if method == "resultant":
        if len(field.generators) != 1:
            raise ValueError("the resultant method needs a single-generator field")
        if g.kind == SIGMA:
            return _spread_sigma_resultant(field, a, b, var)
        return _spread_pi_resultant(field, a, b, var)
    if method == "factor":
        return _spread_factor(field, a, b, var)
    raise ValueError(f"unknown spread method {method!r}")


def dispersion(field: FieldSpec, a: MultiPoly, b: MultiPoly, gen=0, method: str = "auto"):
    """max spread(a, b): an integer, ``-inf`` for the empty set or ``+inf``."""
    return spread(field, a, b, gen, method).dispersion


def dispersion_bruteforce(field: FieldSpec, a: MultiPoly, b: MultiPoly, gen, k_max: int) -> list[int]:
    """Shifts ``0 <= k <= k_max`` with a nontrivial gcd, found by direct scan."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    a, b, var = _check_inputs(field, a, b, gen)
    return [k for k in range(k_max + 1) if _has_common_factor(field, a, b, k, var)]


# single generator: resultant methods -----------------------------------------

def _aux_ring(ring: PolyRing) -> PolyRing:
    return ring.with_params(_SHIFT_VAR)


def _univariate_slices(N: MultiPoly, var: str) -> flint.fmpq_poly:
    """Gcd over Q of the coefficients of N (a polynomial in ``var`` and other
    variables) viewed as polynomials in ``var`` alone."""
    others = [n for n in N.ring.names if n != var]
    g = None
    for coeff in N.coefficients(others).values():
        dense = [0] * (coeff.degree(var) + 1)
        i = N.ring.index(var)
        for exps, c in coeff.terms():
            dense[exps[i]] = flint.fmpq(c.numerator, c.denominator)
        u = flint.fmpq_poly(dense)
        g = u if g is None else g.gcd(u)
        if g.degree() == 0:
            break
    return g


def _rational_roots(u: flint.fmpq_poly) -> list[Fraction]:
    if u is None or u.degree() <= 0:
        return []
    roots = []
    for f, _ in u.factor()[1]:
        if f.degree() == 1:
            c = f.coeffs()
            roots.append(-to_fraction(c[0]) / to_fraction(c[1]))
    return roots


def _spread_sigma_resultant(field: FieldSpec, a: MultiPoly, b: MultiPoly, var: str) -> SpreadResult:
    beta = field.generator(var).beta
    ring = _aux_ring(field.ring)
    A, B = ring.embed(a), ring.embed(b)
    kappa = ring.gen(_SHIFT_VAR)
    shifted = B.compose({var: ring.gen(var) + kappa * beta})
    N = poly_resultant(A, shifted, var)
    if N.is_zero():
        raise ArithmeticError("vanishing shift resultant")
    roots = _rational_roots(_univariate_slices(N, _SHIFT_VAR))
    return _verified(field, a, b, var, [int(r) for r in roots if r.denominator == 1])


def _spread_pi_resultant(field: FieldSpec, a: MultiPoly, b: MultiPoly, var: str) -> SpreadResult:
    alpha = field.generator(var).alpha
    a = split_periodic(field, a, var)[1].primitive([var])
    b = split_periodic(field, b, var)[1].primitive([var])
    if a.free_of([var]) or b.free_of([var]):
        return SpreadResult(())
    ring = _aux_ring(field.ring)
    z = ring.gen(_SHIFT_VAR)
    A, B = ring.embed(a), ring.embed(b)
    R = poly_resultant(A, B.compose({var: z * ring.gen(var)}), var)
    if R.is_zero():
        raise ArithmeticError("vanishing scaling resultant")
    if isinstance(alpha, str):
        bound = _q_exponent_bound(R, alpha)
        return _verified(field, a, b, var, range(bound + 1))
    roots = _rational_roots(_univariate_slices(R, _SHIFT_VAR))
    ks = [numeric_power_exponent(alpha, r) for r in roots]
    return _verified(field, a, b, var, [k for k in ks if k is not None])


def _dense(p: MultiPoly, var: str) -> flint.fmpq_poly:
    i = p.ring.index(var)
    dense = [flint.fmpq(0)] * (p.degree(var) + 1)
    for exps, c in p.terms():
        dense[exps[i]] = flint.fmpq(c.numerator, c.denominator)
    return flint.fmpq_poly(dense)


def _root_enclosures(p: MultiPoly, var: str) -> list[flint.acb]:
    return [r for r, _ in _dense(p, var).complex_roots()]


def _integers_near(x: flint.arb) -> range:
    """Integers in a ball, widened by one on each side."""
    mid, rad = float(x.mid()), float(x.rad())
    return range(math.floor(mid - rad) - 1, math.ceil(mid + rad) + 2)


def _spread_roots(field: FieldSpec, a: MultiPoly, b: MultiPoly, var: str) -> SpreadResult:
    """Candidates from certified root enclosures: a common factor of ``a`` and
    ``sigma^k(b)`` means some root of ``a`` is mapped onto a root of ``b``,
    i.e. ``beta_j - alpha_i = k*beta`` (Sigma) or ``beta_j / alpha_i =
    alpha^k`` (Pi). Only enclosures compatible with a real k are kept."""
    g = field.generator(var)
    if g.kind == PI:
        a = split_periodic(field, a, var)[1]
        b = split_periodic(field, b, var)[1]
        if a.free_of([var]) or b.free_of([var]):
            return SpreadResult(())
    ra, rb = _root_enclosures(a, var), _root_enclosures(b, var)
    candidates = set()
    if g.kind == SIGMA:
        step = flint.arb(flint.fmpq(g.beta.numerator, g.beta.denominator))
        for x in ra:
            for y in rb:
                k = (y - x) / step
                if k.imag.contains(0):
                    candidates.update(_integers_near(k.real))
    else:
        log_alpha = abs(flint.arb(flint.fmpq(g.alpha.numerator, g.alpha.denominator))).log()
        for x in ra:
            for y in rb:
                k = (abs(y).log() - abs(x).log()) / log_alpha
                candidates.update(_integers_near(k))
    return _verified(field, a, b, var, candidates)


def _spread_q_scan(field: FieldSpec, a: MultiPoly, b: MultiPoly, var: str) -> SpreadResult:
    """q-degree is additive on Q[q][t], so an irreducible factor of the
    t-primitive part of ``a`` has q-degree at most that of ``a``. If
    ``f ~ g(q^k t)`` and f has monomials t^mu, t^nu, then
    ``k*(mu - nu)`` is a difference of q-degrees of coefficient ratios,
    hence ``k <= deg_q a + deg_q b``."""
    q = field.generator(var).alpha
    a = split_periodic(field, a, var)[1].primitive([var])
    b = split_periodic(field, b, var)[1].primitive([var])
    if a.free_of([var]) or b.free_of([var]):
        return SpreadResult(())
    return _verified(field, a, b, var, range(a.degree(q) + b.degree(q) + 1))


def _q_exponent_bound(R: MultiPoly, q: str) -> int:
    """Largest k for which z = q^k can be a root of R(z): beyond it the top
    z-coefficient dominates in q-degree."""
    coeffs = {e[0]: c for e, c in R.coefficients([_SHIFT_VAR]).items()}
    d = max(coeffs)
    top = coeffs[d].degree(q)
    bound = 0
    for j, c in coeffs.items():
        if j < d:
            bound = max(bound, -((top - c.degree(q)) // (d - j)))
    return bound


# any field: irreducible factors and shift equivalence -------------------------

def _pi_component(field: FieldSpec, f: MultiPoly) -> dict[tuple[int, ...], MultiPoly]:
    return f.coefficients(field.pi_names)


def shift_candidates(field: FieldSpec, f: MultiPoly, g: MultiPoly) -> list[int]:
    """Integers k (possibly negative) for which sigma^k(g) may be an associate
    of f. ``f`` and ``g`` are irreducible and involve at least one generator;
    the list is a superset of the true answer when finite."""
    gens = field.gen_names
    if [f.degree(n) for n in gens] != [g.degree(n) for n in gens]:
        return []
    fc, gc = _pi_component(field, f), _pi_component(field, g)
    if set(fc) != set(gc):
        return []
    sig = [x for x in field.generators if x.kind == SIGMA]
    if sig and f.degree(sig[0].name) > 0:
        s, beta = sig[0].name, sig[0].beta
        mu = next(m for m in fc if fc[m].degree(s) == f.degree(s))
        n = fc[mu].degree(s)
        if gc[mu].degree(s) != n:
            return []

        def ratio(p):
            return RatFunc(p.coeff_of(s, n - 1), p.coeff_of(s, n))

        diff = (ratio(fc[mu]) - ratio(gc[mu])) / (n * beta)
        if not diff.is_constant():
            return []
        k = diff.num.constant_value()
        return [int(k)] if k.denominator == 1 else []
    monos = sorted(fc)
    if len(monos) < 2:
        # a lone monomial: f and g are the same Pi generator
        return []
    mu, nu = monos[0], monos[1]
    rho = RatFunc(fc[mu] * gc[nu], fc[nu] * gc[mu])
    return _solve_alpha_power(field, [a - b for a, b in zip(mu, nu)], rho)


def _solve_alpha_power(field: FieldSpec, diff: Sequence[int], rho: RatFunc) -> list[int]:
    """All k with prod alpha_j^(k*diff_j) == rho."""
    pis = [x for x in field.generators if x.kind == PI]
    ring = field.ring

    def power(k):
        val = RatFunc(ring.one)
        for gen, e in zip(pis, diff):
            if not e:
                continue
            base = RatFunc(ring.gen(gen.alpha)) if gen.symbolic else RatFunc(ring.const(gen.alpha))
            val = val * base ** (k * e)
        return val

    symbolic = [(gen, e) for gen, e in zip(pis, diff) if e and gen.symbolic]
    if symbolic:
        gen, e = symbolic[0]
        q = gen.alpha
        deg = rho.num.degree(q) - rho.den.degree(q)
        if deg % e:
            return []
        k = deg // e
    else:
        if not rho.is_constant():
            return []
        base = Fraction(1)
        for gen, e in zip(pis, diff):
            base *= gen.alpha ** e
        k = numeric_power_exponent(base, rho.num.constant_value())
        if k is None:
            return []
    return [k] if power(k) == rho else []


def _gen_factors(p: MultiPoly, var: str) -> list[MultiPoly]:
    return [f for f, _ in factor(p)[1] if f.degree(var) > 0]


def _spread_factor(field: FieldSpec, a: MultiPoly, b: MultiPoly, var: str) -> SpreadResult:
    """A candidate k for factors f | a, g | b is confirmed by checking that
    sigma^k(g) is an associate of f, which divides gcd(a, sigma^k(b))."""
    main = field.gen_names
    fa = [f.normalized(main) for f in _gen_factors(a, var)]
    fb = _gen_factors(b, var)
    found = set()
    for g in fb:
        for f in fa:
            for k in shift_candidates(field, f, g):
                if k >= 0 and k not in found and apply_sigma(field, g, k).normalized(main) == f:
                    found.add(k)
    return SpreadResult(tuple(sorted(found)))
