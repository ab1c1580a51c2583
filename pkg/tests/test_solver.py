import pytest

from recdenom.arith import RatFunc
from recdenom.bound import denbound, solution_denominator
from recdenom.field import FieldSpec
from recdenom.ore import LinearSystem, OreMatrix, Transform, apply_transform
from recdenom.oracle import field_cases, random_instance
from recdenom.solver import EACH, TOTAL, in_span, monomials, rational_solutions, span_coefficients, verify_solution
from recdenom.sysfile import parse_system

RAT = FieldSpec.rational()

EXAMPLE1_VECTORS = [
    ("-t*(t^2 - t + 2)/(t^2*(t^2 - t + 2))", "(t^3 - t^2 + 1)/(t^2*(t^2 - t + 2))"),
    ("-t^3*(t^2 - t + 2)/(t^2*(t^2 - t + 2))", "(t^5 - t^4 - 3*t^2 + 1)/(t^2*(t^2 - t + 2))"),
]
EXAMPLE2_VECTORS = [
    ("(t2 + 1)*(t1 - 1)/(2*(t1*t2 - 1)*(t1 - t2))", "(t2 - 1)*(t1 + 1)/(2*(t1*t2 - 1)*(t1 - t2))"),
    ("(t1^2 - t1*t2 + 1)/(2*(t1 - t2))", "(-t1^2 + t1*t2 + 1)/(2*(t1 - t2))"),
    ("(2*t1^2 - 2*t1*t2 + 4*t1 - 3*t2)/(4*(t1 - t2))", "(-2*t1^2 + 2*t1*t2 + 4*t1 - 3*t2)/(4*(t1 - t2))"),
    ("(4*t1^2*t2 - 3*t1*t2^2 - 2*t1 + t2)/(4*(t1*t2 - 1)*(t1 - t2))", "(4*t1^2*t2 - 3*t1*t2^2 - 6*t1 + 5*t2)/(4*(t1*t2 - 1)*(t1 - t2))"),
]


def load(name):
    with open(f"tests/data/{name}.sys") as fh:
        return parse_system(fh.read())


def vectors(field, pairs):
    return [[field.parse(x) for x in v] for v in pairs]


def test_worked_example_one_spanning_set():
    sf = load("example1")
    sol = rational_solutions(sf.system, RAT.poly("t^2*(t^2 - t + 2)"), 5)
    span = sol.spanning_set()
    assert len(span) == 2
    for v in vectors(RAT, EXAMPLE1_VECTORS):
        assert verify_solution(sf.system, v)
        assert in_span(span, v, RAT)


def test_worked_example_two_dimension():
    sf = load("example2")
    F = sf.field
    sol = rational_solutions(sf.system, F.poly("(t1*t2 - 1)*(t1 - t2)"), 3)
    assert sol.dimension == 4
    for v in vectors(F, EXAMPLE2_VECTORS):
        assert verify_solution(sf.system, v)
        assert in_span(sol.basis, v, F)


def test_constants_solve_forward_difference():
    op = OreMatrix(RAT, 1, 1, {1: [[RAT.parse("1")]], 0: [[RAT.parse("-1")]]})
    sol = rational_solutions(LinearSystem.homogeneous(op), RAT.ring.one, 0)
    assert sol.dimension == 1 and sol.basis[0] == (RAT.parse("1"),)


def test_verify_solution():
    sf = load("example1")
    v = vectors(RAT, EXAMPLE1_VECTORS)[0]
    assert not verify_solution(sf.system, [v[0] + RAT.parse("1"), v[1]])
    hom = LinearSystem.homogeneous(sf.system.op)
    assert verify_solution(hom, [RAT.parse("0"), RAT.parse("0")])


def test_inconsistent_within_bounds():
    op = OreMatrix(RAT, 1, 1, {1: [[RAT.parse("1")]], 0: [[RAT.parse("-1")]]})
    sol = rational_solutions(LinearSystem(op, [RAT.parse("1/t")]), RAT.ring.one, 2)
    assert not sol.consistent() and sol.particular is None


def test_monomials_and_argument_checks():
    assert monomials(["a", "b"], 1, TOTAL) == [(0, 0), (0, 1), (1, 0)]
    assert len(monomials(["a", "b"], 1, EACH)) == 4
    with pytest.raises(ValueError):
        monomials(["a"], 1, "mixed")
    sf = load("example1")
    with pytest.raises(ValueError):
        rational_solutions(sf.system, RAT.ring.zero, 1)
    with pytest.raises(ValueError):
        rational_solutions(sf.system, RAT.ring.one, -1)


def test_span_coefficients_exact():
    F = RAT
    a, b = [F.parse("1/t"), F.parse("1")], [F.parse("1"), F.parse("t")]
    y = [F.parse("2/t - 3"), F.parse("2 - 3*t")]
    assert span_coefficients([a, b], y, F) == [F.parse("2"), F.parse("-3")]
    assert span_coefficients([a, b], [F.parse("t"), F.parse("1")], F) is None


def numerator_degree(y, den):
    return max((x.num * den.exquo(x.den)).degree() for x in y if not x.is_zero()) if any(not x.is_zero() for x in y) else 0


@pytest.mark.parametrize("case", sorted(field_cases()))
def test_planted_solutions_are_recovered(case):
    for f in field_cases()[case]:
        for seed in range(3):
            inst = random_instance(f, 900 + seed, max_n=2, max_order=1)
            den = solution_denominator([x for v in inst.all_vectors() for x in v], f)
            b = max(numerator_degree(v, den) for v in inst.all_vectors())
            sol = rational_solutions(inst.system, den, b, TOTAL)
            span = sol.spanning_set()
            for y in inst.solutions():
                assert in_span(span, y, f)


def test_dimension_invariant_under_unimodular_transform():
    F = load("example2").field
    sf = load("example2")
    n = 2
    c = RatFunc(F.poly("t1 + 1"))
    E = OreMatrix.identity(F, n) + OreMatrix.from_entries(F, n, n, {(0, 1): {1: c}})
    Einv = OreMatrix.identity(F, n) - OreMatrix.from_entries(F, n, n, {(0, 1): {1: c}})
    rel = apply_transform(sf.system, Transform(E, Einv), Transform.permutation(F, [1, 0]))
    den = F.poly("(t1*t2 - 1)*(t1 - t2)")
    a = rational_solutions(sf.system, den, 3)
    b = rational_solutions(rel.system, den, 3)
    assert a.dimension == b.dimension == 4
    for v in b.basis:
        assert in_span(a.basis, rel.to_original(v), F)


def test_auto_bound_pipeline_on_planted_instance():
    inst = random_instance(RAT, 12, max_n=2, max_order=1)
    db = denbound(inst.system)
    b = max(numerator_degree(v, db.d) for v in inst.all_vectors())
    sol = rational_solutions(inst.system, db.d, b)
    for y in inst.solutions():
        assert in_span(sol.spanning_set(), y, RAT)
