"""Rational, q-rational, multibasic and mixed multibasic difference fields.

Every generator is either a Pi-monomial (``sigma(t) = alpha*t``) or a
Sigma-monomial (``sigma(t) = t + beta``). ``alpha`` is a parameter symbol
``q_i`` or a rational number other than 0 and +-1; ``beta`` is a nonzero
rational.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

import flint
import sympy

from .arith import MultiPoly, PolyRing, RatFunc, to_fraction

PI = "pi"
SIGMA = "sigma"

Base = Union[str, Fraction]

CASES = ("rational", "qrational", "multibasic", "mixed")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


@dataclass(frozen=True)
class Generator:
    name: str
    kind: str
    alpha: Base | None = None  # Pi: parameter name or rational
    beta: Fraction | None = None  # Sigma: nonzero rational

    @property
    def symbolic(self) -> bool:
        return self.kind == PI and isinstance(self.alpha, str)


def _base(value) -> Base:
    if isinstance(value, str):
        value = value.strip()
        if _IDENT.match(value):
            return value
        return Fraction(value)
    return Fraction(value)


@dataclass(frozen=True)
class FieldSpec:
    """Ordered generators over the constant field Q(params)."""

    case: str
    params: tuple[str, ...]
    generators: tuple[Generator, ...]

    def __post_init__(self):
        self._validate()

    # constructors -----------------------------------------------------
    @classmethod
    def rational(cls, t: str = "t", beta=1) -> FieldSpec:
        return cls("rational", (), (Generator(t, SIGMA, beta=Fraction(beta)),))

    @classmethod
    def qrational(cls, q="q", t: str = "t") -> FieldSpec:
        base = _base(q)
        params = (base,) if isinstance(base, str) else ()
        return cls("qrational", params, (Generator(t, PI, alpha=base),))

    @classmethod
    def multibasic(cls, bases: Sequence, gens: Sequence[str]) -> FieldSpec:
        bases = [_base(b) for b in bases]
        if len(bases) != len(gens):
            raise ValueError("multibasic field needs one base per generator")
        params = tuple(b for b in bases if isinstance(b, str))
        return cls("multibasic", params, tuple(Generator(g, PI, alpha=b) for g, b in zip(gens, bases)))

    @classmethod
    def mixed(cls, bases: Sequence, pi_gens: Sequence[str], t: str = "t") -> FieldSpec:
        bases = [_base(b) for b in bases]
        if len(bases) != len(pi_gens):
            raise ValueError("mixed field needs one base per Pi generator")
        params = tuple(b for b in bases if isinstance(b, str))
        gens = tuple(Generator(g, PI, alpha=b) for g, b in zip(pi_gens, bases))
        return cls("mixed", params, gens + (Generator(t, SIGMA, beta=Fraction(1)),))

    @classmethod
    def from_header(cls, text: str) -> FieldSpec:
        """Parse ``rational(t)``, ``qrational(q; t)``, ``multibasic(2,3; t1,t2)``
        or ``mixed(q1,q2; t1,t2, t)`` (a leading ``field`` keyword is allowed)."""
        m = re.fullmatch(r"\s*(?:field\s+)?(\w+)\s*\((.*)\)\s*", text)
        if not m:
            raise ValueError(f"malformed field header: {text!r}")
        case, body = m.group(1), m.group(2)
        parts = [p for p in body.split(";")]
        lists = [[x.strip() for x in p.split(",") if x.strip()] for p in parts]
        if case == "rational":
            if len(lists) != 1 or len(lists[0]) != 1:
                raise ValueError("rational field takes exactly one generator")
            return cls.rational(lists[0][0])
        if len(lists) != 2:
            raise ValueError(f"{case} field header needs 'bases; generators'")
        bases, gens = lists
        if case == "qrational":
            if len(bases) != 1 or len(gens) != 1:
                raise ValueError("qrational field takes one base and one generator")
            return cls.qrational(bases[0], gens[0])
        if case == "multibasic":
            return cls.multibasic(bases, gens)
        if case == "mixed":
            if len(gens) != len(bases) + 1:
                raise ValueError("mixed field lists the Pi generators followed by the Sigma generator")
            return cls.mixed(bases, gens[:-1], gens[-1])
        raise ValueError(f"unknown field kind {case!r}")

    def header(self) -> str:
        if self.case == "rational":
            return f"rational({self.generators[0].name})"
        bases = ", ".join(str(g.alpha) for g in self.generators if g.kind == PI)
        gens = ", ".join(g.name for g in self.generators)
        return f"{self.case}({bases}; {gens})"

    def _validate(self) -> None:
        if self.case not in CASES:
            raise ValueError(f"unknown field case {self.case!r}")
        gens = self.generators
        names = [g.name for g in gens] + list(self.params)
        if len(set(names)) != len(names):
            raise ValueError("generator and parameter names must be distinct")
        for g in gens:
            if not _IDENT.match(g.name):
                raise ValueError(f"bad generator name {g.name!r}")
            if g.kind == SIGMA:
                if not g.beta:
                    raise ValueError("Sigma generator needs a nonzero shift")
            elif g.kind == PI:
                if isinstance(g.alpha, str):
                    if g.alpha not in self.params:
                        raise ValueError(f"base {g.alpha!r} is not a declared parameter")
                elif g.alpha in (0, 1, -1):
                    raise ValueError("numeric base must not be 0 or a root of unity")
            else:
                raise ValueError(f"unknown generator kind {g.kind!r}")
        pis = [g for g in gens if g.kind == PI]
        sigmas = [g for g in gens if g.kind == SIGMA]
        symbolic = [g.alpha for g in pis if isinstance(g.alpha, str)]
        if len(set(symbolic)) != len(symbolic):
            raise ValueError("each Pi generator needs its own parameter")
        if set(symbolic) != set(self.params):
            raise ValueError("every parameter must be the base of a Pi generator")
        numeric = [g.alpha for g in pis if not isinstance(g.alpha, str)]
        if not _multiplicatively_independent(numeric):
            raise ValueError("numeric bases must be multiplicatively independent")
        shape = {
            "rational": len(gens) == 1 and len(sigmas) == 1,
            "qrational": len(gens) == 1 and len(pis) == 1,
            "multibasic": len(gens) >= 1 and not sigmas,
            "mixed": len(sigmas) == 1 and gens[-1].kind == SIGMA and gens[-1].beta == 1 and len(pis) >= 1,
        }[self.case]
        if not shape:
            raise ValueError(f"generators do not match the {self.case} case")

    # accessors --------------------------------------------------------
    @cached_property
    def ring(self) -> PolyRing:
        return PolyRing(self.params, tuple(g.name for g in self.generators))

    @property
    def gen_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def pi_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators if g.kind == PI)

    def generator(self, ref: int | str) -> Generator:
        if isinstance(ref, str):
            for g in self.generators:
                if g.name == ref:
                    return g
            raise ValueError(f"no generator named {ref!r}")
        if not 0 <= ref < len(self.generators):
            raise IndexError(f"generator index {ref} out of range")
        return self.generators[ref]

    def gen_ref(self, ref: int | str) -> int:
        g = self.generator(ref)
        return self.generators.index(g)

    def parse(self, text: str) -> RatFunc:
        return self.ring.parse(text)

    def poly(self, text: str) -> MultiPoly:
        return self.ring.parse_poly(text)


def _multiplicatively_independent(values: Sequence[Fraction]) -> bool:
    if len(values) <= 1:
        return True
    primes = sorted({p for v in values for x in (abs(v.numerator), v.denominator) for p in sympy.factorint(x)})
    rows = []
    for v in values:
        num, den = sympy.factorint(abs(v.numerator)), sympy.factorint(v.denominator)
        rows.append([num.get(p, 0) - den.get(p, 0) for p in primes])
    return sympy.Matrix(rows).rank() == len(values)


def classify(field: FieldSpec, gen: int | str) -> str:
    return field.generator(gen).kind


# shifting ---------------------------------------------------------------

def _pi_scaled_terms(field: FieldSpec, p: MultiPoly, k: int) -> dict[tuple[int, ...], flint.fmpq]:
    """Termwise image of the Pi part of sigma^k; symbolic bases show up as
    (possibly negative) parameter exponents."""
    ring = p.ring
    pis = [
        (ring.index(g.name), ring.index(g.alpha) if g.symbolic else None, g.alpha)
        for g in field.generators if g.kind == PI
    ]
    out: dict[tuple[int, ...], flint.fmpq] = {}
    for exps, c in p.raw.to_dict().items():
        e = [int(x) for x in exps]
        for gi, ai, alpha in pis:
            d = e[gi]
            if not d:
                continue
            if ai is not None:
                e[ai] += k * d
            else:
                c = c * flint.fmpq(alpha.numerator, alpha.denominator) ** (k * d)
        key = tuple(e)
        out[key] = out[key] + c if key in out else c
    return out


def _sigma_parts(field: FieldSpec, p: MultiPoly, k: int) -> tuple[MultiPoly, MultiPoly]:
    """sigma^k(p) as (numerator, monomial in the parameters)."""
    ring = p.ring
    if k == 0 or p.is_constant():
        return p, ring.one
    pis = [g for g in field.generators if g.kind == PI]
    sigmas = [g for g in field.generators if g.kind == SIGMA]
    shift = ring.one
    if pis:
        terms = _pi_scaled_terms(field, p, k)
        lows = [0] * ring.nvars
        for prm in field.params:
            i = ring.index(prm)
            lows[i] = min([0] + [e[i] for e in terms])
        fixed = {}
        for e, c in terms.items():
            if c != 0:
                fixed[tuple(x - low for x, low in zip(e, lows))] = c
        p = MultiPoly(ring, ring.ctx.from_dict(fixed))
        if any(lows):
            shift = MultiPoly(ring, ring.ctx.from_dict({tuple(-low for low in lows): 1}))
    if sigmas:
        images = {g.name: ring.gen(g.name) + g.beta * k for g in sigmas}
        p = p.compose(images)
    return p, shift


def apply_sigma(field: FieldSpec, p, k: int):
    """Apply sigma^k to a polynomial or rational function.

    Rational functions are mapped exactly. For polynomials with a symbolic
    Pi base and ``k < 0`` the exact image has powers of ``q`` in the
    denominator; the polynomial returned is then the image multiplied by the
    smallest monomial in the parameters that clears them (an associate over
    the constant field).
    """
    if isinstance(p, RatFunc):
        n, sn = _sigma_parts(field, p.num, k)
        if p.den.is_one() and sn.is_one():
            return RatFunc(n)
        d, sd = _sigma_parts(field, p.den, k)
        return RatFunc(n * sd, d * sn)
    if isinstance(p, MultiPoly):
        return _sigma_parts(field, p, k)[0]
    raise TypeError(f"cannot shift {type(p).__name__}")


def split_periodic(field: FieldSpec, p: MultiPoly, gen: int | str) -> tuple[MultiPoly, MultiPoly]:
    """Return ``(per, aper)`` with ``per * aper == p``."""
    if p.is_zero():
        raise ValueError("periodic part of the zero polynomial")
    g = field.generator(gen)
    if g.kind == SIGMA:
        return p.ring.one, p
    m = p.lowest_power(g.name)
    if m == 0:
        return p.ring.one, p
    per = p.ring.gen(g.name) ** m
    return per, p.exquo(per)


def aperiodic(field: FieldSpec, p: MultiPoly, gens: Sequence[int | str] | None = None) -> MultiPoly:
    """Divide out every Pi generator power (restricted to ``gens`` if given)."""
    names = field.gen_names if gens is None else [field.generator(g).name for g in gens]
    for name in names:
        p = split_periodic(field, p, name)[1]
    return p


def sigma_matrix(field: FieldSpec, M, k: int):
    if k == 0:
        return M
    return tuple(tuple(apply_sigma(field, x, k) for x in row) for row in M)


def numeric_power_exponent(base: Fraction, value: Fraction) -> int | None:
    """Integer k with base**k == value, if any."""
    value = to_fraction(value)
    if value == 0:
        return None
    if value == 1:
        return 0
    import math

    k = round(math.log(abs(value)) / math.log(abs(base)))
    for cand in (k - 1, k, k + 1):
        if base ** cand == value:
            return cand
    return None
