"""Exact polynomials and rational functions over Q.

A :class:`PolyRing` fixes an ordered list of variables split into
*parameters* (constants of the difference field, e.g. ``q``) and
*generators* (``t``, ``t1``, ...). Monomials are ordered graded
lexicographically with parameters ahead of generators, so printed output
is deterministic. Arithmetic, gcds and resultants run on FLINT's
``fmpq_mpoly``; this module owns canonical forms and normalisation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence, Union

import flint
from flint.utils.flint_exceptions import DomainError

from .textfmt import ParseError, TokenStream, iter_terms_text, parse_expression, tokenize

BigRational = Fraction

Scalar = Union[int, Fraction, "flint.fmpq"]


def to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    return Fraction(int(c.p), int(c.q))


def _to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


class PolyRing:
    """Polynomial ring Q[params, gens] with a fixed graded-lex order."""

    _cache: dict = {}

    def __new__(cls, params: Sequence[str] = (), gens: Sequence[str] = ()):
        key = (tuple(params), tuple(gens))
        ring = cls._cache.get(key)
        if ring is None:
            ring = super().__new__(cls)
            ring._init(*key)
            cls._cache[key] = ring
        return ring

    def _init(self, params: tuple[str, ...], gens: tuple[str, ...]) -> None:
        names = params + gens
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.params = params
        self.gens = gens
        self.names = names
        self.nvars = len(names)
        self.ctx = flint.fmpq_mpoly_ctx.get(names, "deglex")
        self._index = {n: i for i, n in enumerate(names)}
        self.zero = MultiPoly(self, self.ctx.from_dict({}))
        self.one = MultiPoly(self, self.ctx.constant(1))

    def __reduce__(self):
        return (PolyRing, (self.params, self.gens))

    def __repr__(self) -> str:
        return f"PolyRing(params={self.params}, gens={self.gens})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def gen(self, name: str) -> MultiPoly:
        return MultiPoly(self, self.ctx.gen(self.index(name)))

    def const(self, c: Scalar) -> MultiPoly:
        return MultiPoly(self, self.ctx.constant(_to_fmpq(c)))

    def from_terms(self, terms: Mapping[tuple[int, ...], Scalar] | Iterable) -> MultiPoly:
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], flint.fmpq] = {}
        for exps, c in items:
            exps = tuple(exps)
            acc[exps] = acc.get(exps, flint.fmpq(0)) + _to_fmpq(c)
        return MultiPoly(self, self.ctx.from_dict({e: c for e, c in acc.items() if c != 0}))

    def coerce(self, x) -> MultiPoly:
        if isinstance(x, MultiPoly):
            if x.ring is not self:
                return self.embed(x)
            return x
        if isinstance(x, (int, Fraction, flint.fmpq)):
            return self.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    def embed(self, p: MultiPoly) -> MultiPoly:
        """Map ``p`` into this ring by variable name."""
        if p.ring is self:
            return p
        pos = [self.index(n) for n in p.ring.names]
        terms = {}
        for exps, c in p.raw.terms():
            new = [0] * self.nvars
            for i, e in zip(pos, exps):
                new[i] = e
            terms[tuple(new)] = c
        return MultiPoly(self, self.ctx.from_dict(terms))

    def with_params(self, *extra: str) -> PolyRing:
        """Same ring with extra parameter variables appended to the parameters."""
        return PolyRing(self.params + tuple(extra), self.gens)

    def parse(self, text: str) -> RatFunc:
        """Parse an expression in this ring's variables into a reduced fraction."""
        stream = TokenStream(tokenize(text))
        value = parse_rational(stream, self)
        if stream.peek().kind != "EOF":
            raise stream.error(f"unexpected {stream.peek().text!r}")
        return value

    def parse_poly(self, text: str) -> MultiPoly:
        value = self.parse(text)
        if not value.is_polynomial():
            raise ParseError(f"not a polynomial: {text}")
        return value.num


def parse_rational(stream: TokenStream, ring: PolyRing) -> RatFunc:
    def atom(tok):
        if tok.text not in ring._index:
            raise ParseError(f"unknown variable {tok.text!r}", tok.line, tok.col)
        return RatFunc(ring.gen(tok.text))

    return parse_expression(stream, atom, lambda n: RatFunc(ring.const(n)))


class MultiPoly:
    """Immutable polynomial in a :class:`PolyRing`, stored in canonical form."""

    __slots__ = ("ring", "raw", "_hash")

    def __init__(self, ring: PolyRing, raw):
        self.ring = ring
        self.raw = raw
        self._hash = None

    def _wrap(self, raw) -> MultiPoly:
        return MultiPoly(self.ring, raw)

    def _other(self, other):
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring:
                other = self.ring.embed(other)
            return other.raw
        if isinstance(other, (int, Fraction)):
            return _to_fmpq(other)
        if isinstance(other, flint.fmpq):
            return other
        return NotImplemented

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.raw + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.raw - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(o - self.raw)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.raw * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.raw)

    def __pow__(self, e: int):
        if e < 0:
            return RatFunc(self.ring.one, self ** (-e))
        return self._wrap(self.raw ** e)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq)):
            if other == 0:
                raise ZeroDivisionError("polynomial division by zero")
            return self._wrap(self.raw / _to_fmpq(other))
        return RatFunc(self) / other

    def __rtruediv__(self, other):
        return RatFunc(self.ring.coerce(other)) / RatFunc(self)

    def exquo(self, other) -> MultiPoly:
        """Exact quotient; raises ValueError if ``other`` does not divide."""
        o = self._other(other)
        try:
            return self._wrap(self.raw / o)
        except DomainError:
            raise ValueError(f"{other} does not divide {self}") from None

    def divides(self, other: MultiPoly) -> bool:
        other = self.ring.coerce(other)
        if self.is_zero():
            return other.is_zero()
        if other.is_zero():
            return True
        return (self.raw / self.raw.gcd(other.raw)).is_constant()

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return other == self
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if isinstance(o, flint.fmpq):
            return self.raw == self.ring.ctx.constant(o)
        return self.raw == o

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple((e, (int(c.p), int(c.q))) for e, c in self.raw.terms()))
        return self._hash

    def __bool__(self):
        return not self.raw.is_zero()

    # inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.raw.is_zero()

    def is_one(self) -> bool:
        return self.raw.is_one()

    def is_constant(self) -> bool:
        return self.raw.is_constant()

    def terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in monomial order (leading term first)."""
        return [(tuple(map(int, e)), to_fraction(c)) for e, c in self.raw.terms()]

    def nterms(self) -> int:
        return len(self.raw)

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if omitted); -1 for the zero polynomial."""
        if self.raw.is_zero():
            return -1
        if var is None:
            return int(self.raw.total_degree())
        return int(self.raw.degrees()[self.ring.index(var)])

    def degree_in(self, names: Iterable[str]) -> int:
        idx = [self.ring.index(n) for n in names]
        if self.raw.is_zero():
            return -1
        return int(max(sum(e[i] for i in idx) for e in self.raw.monoms()))

    def free_of(self, names: Iterable[str]) -> bool:
        degs = self.raw.degrees()
        return all(degs[self.ring.index(n)] <= 0 for n in names)

    def lowest_power(self, var: str) -> int:
        """Largest m with var^m dividing self."""
        if self.raw.is_zero():
            raise ValueError("zero polynomial")
        i = self.ring.index(var)
        return int(min(e[i] for e in self.raw.monoms()))

    def leading_coefficient(self) -> Fraction:
        if self.raw.is_zero():
            return Fraction(0)
        return to_fraction(self.raw.leading_coefficient())

    def constant_value(self) -> Fraction:
        if not self.raw.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.leading_coefficient()

    def coefficients(self, names: Sequence[str]) -> dict[tuple[int, ...], MultiPoly]:
        """Split into ``{exponents in names: coefficient free of names}``."""
        idx = [self.ring.index(n) for n in names]
        groups: dict[tuple[int, ...], dict] = {}
        for exps, c in self.raw.terms():
            key = tuple(int(exps[i]) for i in idx)
            rest = list(exps)
            for i in idx:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        return {k: MultiPoly(self.ring, self.ring.ctx.from_dict(v)) for k, v in groups.items()}

    def coeff_of(self, var: str, k: int) -> MultiPoly:
        return self.coefficients([var]).get((k,), self.ring.zero)

    # substitution -----------------------------------------------------
    def compose(self, images: Mapping[str, MultiPoly]) -> MultiPoly:
        """Substitute variables by polynomials of the same ring."""
        gens = [
            self.ring.coerce(images[n]).raw if n in images else self.ring.ctx.gen(i)
            for i, n in enumerate(self.ring.names)
        ]
        if self.ring.nvars == 0:
            return self
        return self._wrap(self.raw.compose(*gens))

    def subs(self, values: Mapping[str, Scalar]) -> MultiPoly:
        return self._wrap(self.raw.subs({k: _to_fmpq(v) for k, v in values.items()}))

    def derivative(self, var: str) -> MultiPoly:
        return self._wrap(self.raw.derivative(var))

    # normalisation ----------------------------------------------------
    def monic(self) -> MultiPoly:
        """Divide by the leading rational coefficient."""
        if self.raw.is_zero():
            return self
        return self._wrap(self.raw / self.raw.leading_coefficient())

    def content(self, main: Sequence[str] | None = None) -> MultiPoly:
        """Gcd of the coefficients w.r.t. the ``main`` variables (default: generators)."""
        main = self.ring.gens if main is None else tuple(main)
        if self.raw.is_zero():
            return self.ring.zero
        coeffs = [c.raw for c in self.coefficients(main).values()]
        g = coeffs[0]
        for c in coeffs[1:]:
            if g.is_constant():
                break
            g = g.gcd(c)
        return self._wrap(g).monic()

    def primitive(self, main: Sequence[str] | None = None) -> MultiPoly:
        if self.raw.is_zero():
            return self
        c = self.content(main)
        return self._wrap(self.raw / c.raw) if not c.is_one() else self

    def normalized(self, main: Sequence[str] | None = None) -> MultiPoly:
        """Primitive w.r.t. ``main`` with unit leading coefficient."""
        return self.primitive(main).monic()

    # printing ---------------------------------------------------------
    def __str__(self) -> str:
        return iter_terms_text(((e, to_fraction(c)) for e, c in self.raw.terms()), self.ring.names)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def factored_str(self, up_to_unit: bool = False) -> str:
        return format_factored(self, up_to_unit)


class RatFunc:
    """Reduced fraction num/den with den monic (unit absorbed into num)."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, reduced: bool = False):
        if isinstance(num, RatFunc):
            if den is not None:
                raise TypeError("RatFunc(RatFunc, den) is not supported")
            self.num, self.den, self._hash = num.num, num.den, None
            return
        if den is None:
            self.num = num
            self.den = num.ring.one
            self._hash = None
            return
        den = num.ring.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self._hash = None
        if reduced:
            self.num, self.den = num, den
            return
        if num.is_zero():
            self.num, self.den = num, num.ring.one
            return
        if den.is_constant():
            self.num = num._wrap(num.raw / den.raw.leading_coefficient())
            self.den = num.ring.one
            return
        g = num.raw.gcd(den.raw)
        n, d = num.raw, den.raw
        if not g.is_one():
            n, d = n / g, d / g
        lc = d.leading_coefficient()
        if lc != 1:
            n, d = n / lc, d / lc
        self.num = MultiPoly(num.ring, n)
        self.den = MultiPoly(num.ring, d)

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def _make(self, num, den) -> RatFunc:
        """Fraction from coprime raw parts; only the unit is normalised."""
        ring = self.num.ring
        if num.is_zero():
            return RatFunc(ring.zero)
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFunc(MultiPoly(ring, num), MultiPoly(ring, den), reduced=True)

    @classmethod
    def from_value(cls, ring: PolyRing, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        return cls(ring.coerce(x))

    def _other(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return RatFunc(self.ring.const(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RatFunc(self.num + o.num)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        # Henrici: only the common part of the denominators can cancel
        b, d = self.den.raw, o.den.raw
        g = b.gcd(d)
        if g.is_one():
            return self._make(self.num.raw * d + o.num.raw * b, b * d)
        b1, d1 = b / g, d / g
        num = self.num.raw * d1 + o.num.raw * b1
        h = num.gcd(g)
        if not h.is_one():
            num, g = num / h, g / h
        return self._make(num, b1 * d1 * g)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RatFunc(self.num * o.num)
        if self.is_zero() or o.is_zero():
            return RatFunc(self.ring.zero)
        a, b, c, d = self.num.raw, self.den.raw, o.num.raw, o.den.raw
        g1, g2 = a.gcd(d), c.gcd(b)
        if not g1.is_one():
            a, d = a / g1, d / g1
        if not g2.is_one():
            c, b = c / g2, b / g2
        return self._make(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e, reduced=True)

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.is_constant()

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        num = str(self.num)
        if self.num.nterms() > 1:
            num = f"({num})"
        den = str(self.den)
        if self.den.nterms() > 1 or self.den.degree() > 0 and "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


# gcd / lcm / resultant ------------------------------------------------------

def _main_vars(ring: PolyRing, main) -> tuple[str, ...]:
    if main is None:
        return ring.gens
    if isinstance(main, str):
        return (main,)
    return tuple(main)


def poly_gcd(a: MultiPoly, b: MultiPoly, main_var: str | Sequence[str] | None = None) -> MultiPoly:
    """Gcd of ``a`` and ``b`` as polynomials in ``main_var`` over the fraction
    field of the remaining variables.

    The result is primitive w.r.t. ``main_var`` (a sequence of variables is
    allowed; the default is all generators) and has unit leading coefficient.
    It is zero only when both inputs are zero.
    """
    main = _main_vars(a.ring, main_var)
    b = a.ring.coerce(b)
    if a.is_zero() and b.is_zero():
        return a.ring.zero
    g = a._wrap(a.raw.gcd(b.raw))
    return g.normalized(main)


def poly_lcm(a: MultiPoly, b: MultiPoly, main_var: str | Sequence[str] | None = None) -> MultiPoly:
    main = _main_vars(a.ring, main_var)
    b = a.ring.coerce(b)
    if a.is_zero() or b.is_zero():
        return a.ring.zero
    g = a.raw.gcd(b.raw)
    return a._wrap((a.raw / g) * b.raw).normalized(main)


def lcm_all(polys: Iterable[MultiPoly], ring: PolyRing, main_var=None) -> MultiPoly:
    return reduce(lambda x, y: poly_lcm(x, y, main_var), polys, ring.one).normalized(
        _main_vars(ring, main_var)
    )


def poly_resultant(a: MultiPoly, b: MultiPoly, main_var: str) -> MultiPoly:
    """Sylvester resultant Res_{main_var}(a, b)."""
    b = a.ring.coerce(b)
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant of a zero polynomial")
    return a._wrap(a.raw.resultant(b.raw, main_var))


def gcd_degree(a: MultiPoly, b: MultiPoly, var: str) -> int:
    """deg_var gcd(a, b); positive iff the gcd is non-trivial as a polynomial in var."""
    return int(a.raw.gcd(b.raw).degrees()[a.ring.index(var)])


def factor(p: MultiPoly) -> tuple[Fraction, list[tuple[MultiPoly, int]]]:
    """Irreducible factorisation over Q (factors monic)."""
    c, facs = p.raw.factor()
    return to_fraction(c), [(p._wrap(f), int(e)) for f, e in facs]


def format_factored(p: MultiPoly, up_to_unit: bool = False) -> str:
    """Render ``p`` as a product of irreducible factors (display only).

    With ``up_to_unit`` the rational constant is dropped.
    """
    if p.is_zero():
        return "0"
    c, facs = factor(p)
    facs.sort(key=lambda fe: (fe[0].nterms(), -fe[0].degree(), str(fe[0])))
    parts = []
    for f, e in facs:
        s = str(f)
        if f.nterms() > 1:
            s = f"({s})"
        parts.append(s if e == 1 else f"{s}^{e}")
    if not parts:
        return "1" if up_to_unit else str(c)
    if up_to_unit:
        return "*".join(parts)
    if c == -1:
        return "-" + "*".join(parts)
    if c != 1:
        parts.insert(0, str(c))
    return "*".join(parts)


def associated(a: MultiPoly, b: MultiPoly, main_var=None) -> bool:
    """True if a and b agree up to a unit (factors free of ``main_var``)."""
    return a.normalized(_main_vars(a.ring, main_var)) == b.normalized(_main_vars(a.ring, main_var))
