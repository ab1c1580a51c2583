"""Planted-solution systems and random inputs for checking the pipeline.

Everything is driven by an explicit ``random.Random(seed)``; the same seed
reproduces the same instance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .arith import MultiPoly, RatFunc
from .bound import DenBound
from .dispersion import dispersion
from .field import PI, FieldSpec, aperiodic, apply_sigma
from .linalg import determinant, ff_solve, rank
from .ore import LinearSystem, OreMatrix, clear_denominators, ore_apply

COEFF_RANGE = 5
MAX_DISPERSION = 5


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class PlantedInstance:
    """``planted`` solve the homogeneous system; ``designated`` (if any)
    solves the system with its right-hand side."""

    system: LinearSystem
    planted: tuple[tuple[RatFunc, ...], ...]
    designated: tuple[RatFunc, ...] | None
    field: FieldSpec
    seed: int

    @property
    def homogeneous_system(self) -> LinearSystem:
        return LinearSystem.homogeneous(self.system.op)

    def all_vectors(self) -> list[tuple[RatFunc, ...]]:
        vecs = list(self.planted)
        if self.designated is not None:
            vecs.append(self.designated)
        return vecs

    def solutions(self) -> list[tuple[RatFunc, ...]]:
        """Vectors known to solve ``system`` itself."""
        if self.designated is None:
            return list(self.planted)
        d = self.designated
        return [d] + [tuple(a + b for a, b in zip(d, h)) for h in self.planted]

    def render(self) -> str:
        from .sysfile import SystemFile, format_system

        lines = [f"# seed {self.seed}"]
        lines += ["# planted [" + ", ".join(str(x) for x in v) + "]" for v in self.planted]
        if self.designated is not None:
            lines.append("# designated [" + ", ".join(str(x) for x in self.designated) + "]")
        return "\n".join(lines) + "\n" + format_system(SystemFile(self.field, self.system))


# random polynomials ---------------------------------------------------------

def _coeff(rng: random.Random, nonzero: bool = False) -> int:
    while True:
        c = rng.randint(-COEFF_RANGE, COEFF_RANGE)
        if c or not nonzero:
            return c


def _param_factor(field: FieldSpec, rng: random.Random) -> dict[int, int]:
    """Random small power of one parameter (empty for numeric bases)."""
    if not field.params or rng.random() < 0.7:
        return {}
    i = field.ring.index(rng.choice(field.params))
    return {i: rng.randint(1, 2)}


def random_poly(field: FieldSpec, rng: random.Random, degree: int = 1, terms: int = 3, params: bool = True) -> MultiPoly:
    """Random polynomial with small integer coefficients, degree at most
    ``degree`` in each generator, occasionally with parameter powers
    (never when ``params`` is False)."""
    ring = field.ring
    out = {}
    gidx = [ring.index(n) for n in field.gen_names]
    for _ in range(terms):
        e = [0] * ring.nvars
        for i in gidx:
            e[i] = rng.randint(0, degree)
        for i, k in (_param_factor(field, rng) if params else {}).items():
            e[i] = k
        out[tuple(e)] = out.get(tuple(e), 0) + _coeff(rng)
    return ring.from_terms(out)


def random_factor(field: FieldSpec, rng: random.Random, params: bool = True) -> MultiPoly:
    """Random non-monomial polynomial of degree one in each generator it
    contains, involving at least one generator."""
    while True:
        p = random_poly(field, rng, 1, rng.randint(2, 3), params)
        if p.nterms() >= 2 and not p.free_of(field.gen_names) and not p.is_constant():
            if aperiodic(field, p).degree_in(field.gen_names) > 0:
                return aperiodic(field, p).primitive()


def random_denominator(field: FieldSpec, rng: random.Random, max_disp: int = MAX_DISPERSION) -> MultiPoly:
    """Product of shifted random factors (plus a periodic power for Pi
    fields) whose aperiodic part has dispersion at most ``max_disp``."""
    ring = field.ring
    for _ in range(50):
        q = ring.one
        # shifts of a symbolic base raise parameter degrees quickly, so such
        # fields get a single shifted factor
        symbolic = any(g.kind == PI and g.symbolic for g in field.generators)
        for _ in range(1 if symbolic else rng.randint(1, 2)):
            # parameters enter through the shifts; rational coefficients
            # keep planted systems of symbolic fields a manageable size
            f = random_factor(field, rng, params=False)
            shifts = sorted(rng.sample(range(max_disp + 1), rng.randint(1, 2)))
            for k in shifts:
                q = q * apply_sigma(field, f, k)
        pis = [g for g in field.generators if g.kind == PI]
        if pis and rng.random() < 0.4:
            q = q * ring.gen(rng.choice(pis).name) ** rng.randint(1, 2)
        ap = aperiodic(field, q)
        if all(dispersion(field, ap, ap, g.name) <= max_disp for g in field.generators):
            return q.normalized()
    raise ConstructionError("could not draw a denominator with bounded dispersion")


def random_vector(field: FieldSpec, rng: random.Random, n: int, den: MultiPoly) -> tuple[RatFunc, ...]:
    while True:
        nums = [random_poly(field, rng, 1, rng.randint(1, 3)) for _ in range(n)]
        if any(not z.is_zero() for z in nums):
            return tuple(RatFunc(z, den) for z in nums)


def random_matrix(field: FieldSpec, rng: random.Random, rows: int, cols: int, degree: int = 1, params: bool = True) -> list[list[RatFunc]]:
    return [[RatFunc(random_poly(field, rng, degree, rng.randint(1, 2), params)) for _ in range(cols)] for _ in range(rows)]


# planted systems ------------------------------------------------------------

def plant_system(
    field: FieldSpec,
    n: int,
    order: int,
    planted: Sequence[Sequence[RatFunc]],
    seed: int,
    designated: Sequence[RatFunc] | None = None,
) -> PlantedInstance:
    """System of the given order annihilating every vector in ``planted``;
    with ``designated`` the right-hand side is chosen so that it solves the
    system.

    ``A_1..A_order`` are random with a regular leading matrix; ``A_0`` is
    solved for row by row, with random components from the remaining
    freedom.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    rng = random.Random(seed)
    ring = field.ring
    planted = [tuple(RatFunc.from_value(ring, x) for x in v) for v in planted]
    if any(len(v) != n for v in planted):
        raise ValueError("planted vectors must have length n")
    if len(planted) > n:
        raise ValueError("at most n independent vectors can be planted")
    if planted and rank([list(v) for v in planted], ring) != len(planted):
        raise ValueError("planted vectors must be linearly independent")

    for _ in range(10):
        lead = random_matrix(field, rng, n, n, 1, params=False)
        if not determinant(lead, ring).is_zero():
            break
    else:
        # fall back to a diagonal leading matrix, which is always regular
        lead = [[RatFunc(random_factor(field, rng, params=False)) if i == j else RatFunc(ring.zero) for j in range(n)] for i in range(n)]
    mats = {order: lead}
    for k in range(1, order):
        mats[k] = random_matrix(field, rng, n, n, 1, params=False)
    upper = OreMatrix(field, n, n, mats)

    A0 = []
    if planted:
        Y = [list(v) for v in planted]
        images = [ore_apply(upper, v) for v in planted]
        for i in range(n):
            rhs = [-img[i] for img in images]
            sol = ff_solve(Y, rhs, ring)
            if not sol.consistent:
                raise ConstructionError(f"cannot annihilate the planted vectors (seed {seed})")
            row = list(sol.particular)
            for basis in sol.nullspace:
                c = RatFunc(random_poly(field, rng, 1, rng.randint(1, 2), params=False))
                row = [a + c * b for a, b in zip(row, basis)]
            A0.append(row)
    else:
        A0 = random_matrix(field, rng, n, n, 1)
    op = OreMatrix(field, n, n, {**mats, 0: A0})
    if designated is not None:
        designated = tuple(RatFunc.from_value(ring, x) for x in designated)
        rhs = tuple(ore_apply(op, designated))
    else:
        rhs = tuple(RatFunc(ring.zero) for _ in range(n))
    system, _ = clear_denominators(LinearSystem(op, rhs))
    inst = PlantedInstance(system, tuple(planted), designated, field, seed)
    hom = inst.homogeneous_system
    if not all(hom.is_solution(v) for v in planted):
        raise AssertionError(f"planted vector does not solve its system (seed {seed})")
    if designated is not None and not system.is_solution(designated):
        raise AssertionError(f"designated vector does not solve its system (seed {seed})")
    return inst


def random_instance(field: FieldSpec, seed: int, max_n: int = 3, max_order: int = 2) -> PlantedInstance:
    """Planted instance with random size, order, planted count and rhs."""
    rng = random.Random(seed)
    n = rng.randint(1, max_n)
    order = rng.randint(1, max_order)
    # every planted vector multiplies the size of the entries; two are
    # plenty, and one for symbolic bases whose shifts inflate the degrees
    symbolic = any(g.kind == PI and g.symbolic for g in field.generators)
    count = 1 if symbolic else rng.randint(1, min(n, 2))
    vectors = []
    ring = field.ring
    while len(vectors) < count:
        den = random_denominator(field, rng)
        v = random_vector(field, rng, n, den)
        if rank([list(x) for x in vectors + [v]], ring) == len(vectors) + 1:
            vectors.append(v)
    designated = None
    if rng.random() < 0.3:
        designated = random_vector(field, rng, n, random_denominator(field, rng))
    return plant_system(field, n, order, vectors, rng.randrange(2**31), designated)


def check_divisibility(db: DenBound | MultiPoly, planted: PlantedInstance | Sequence[Sequence[RatFunc]], field: FieldSpec | None = None) -> bool:
    """``ap(q) | d`` for the common denominator ``q`` of every planted vector."""
    d = db.d if isinstance(db, DenBound) else db
    if isinstance(planted, PlantedInstance):
        field = planted.field
        vectors = planted.all_vectors()
    else:
        vectors = planted
        if field is None:
            raise ValueError("field is required for bare vectors")
    ring = field.ring
    for v in vectors:
        dens = [RatFunc.from_value(ring, x).den for x in v if not RatFunc.from_value(ring, x).is_zero()]
        for q in dens:
            ap = aperiodic(field, q).normalized()
            if not ap.is_constant() and not ap.divides(d):
                return False
    return True


# dispersion test pairs ------------------------------------------------------

def random_pair(field: FieldSpec, rng: random.Random) -> tuple[MultiPoly, MultiPoly]:
    """Two polynomials that often share shifted factors."""
    ring = field.ring
    shared = random_factor(field, rng)
    a = ring.one
    b = ring.one
    for _ in range(rng.randint(0, 2)):
        a = a * random_factor(field, rng)
    for _ in range(rng.randint(0, 2)):
        b = b * random_factor(field, rng)
    if rng.random() < 0.8:
        a = a * apply_sigma(field, shared, rng.randint(0, 6))
        b = b * apply_sigma(field, shared, rng.randint(0, 2))
    pis = [g for g in field.generators if g.kind == PI]
    if pis and rng.random() < 0.2:
        g = rng.choice(pis).name
        a = a * ring.gen(g)
        b = b * ring.gen(g) ** rng.randint(1, 2)
    if a.is_constant():
        a = random_factor(field, rng)
    if b.is_constant():
        b = random_factor(field, rng)
    return a, b


def field_cases() -> dict[str, list[FieldSpec]]:
    """Representative fields for each supported case."""
    return {
        "rational": [FieldSpec.rational()],
        "qrational": [FieldSpec.qrational("q"), FieldSpec.qrational(2)],
        "multibasic": [FieldSpec.multibasic(["q1", "q2"], ["t1", "t2"]), FieldSpec.multibasic([2, 3], ["t1", "t2"])],
        "mixed": [FieldSpec.mixed(["q1"], ["t1"], "t"), FieldSpec.mixed([2], ["t1"], "t")],
    }

