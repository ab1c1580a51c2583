import pytest

from recdenom.arith import RatFunc
from recdenom.field import FieldSpec
from recdenom.linalg import determinant
from recdenom.ore import LinearSystem, OreMatrix, ore_apply
from recdenom.oracle import field_cases, random_instance
from recdenom.regularise import Unsolvable, is_head_regular, is_tail_regular, regularise
from recdenom.sysfile import parse_system

RAT = FieldSpec.rational()


def load(name):
    with open(f"tests/data/{name}.sys") as fh:
        return parse_system(fh.read())


def system(field, mats, rhs=None):
    P = field.parse
    op = OreMatrix.from_list(field, [[[P(x) for x in row] for row in M] for M in mats])
    if rhs is None:
        return LinearSystem.homogeneous(op)
    return LinearSystem(op, [P(x) for x in rhs])


def test_worked_example_is_fully_regular():
    sf = load("example1")
    assert is_head_regular(sf.system) and is_tail_regular(sf.system)
    reg = regularise(sf.system)
    assert reg.P_total.is_identity() and reg.Q_total.is_identity() and reg.tail_transform.is_identity()
    assert reg.compat == () and reg.free_vars == ()


def test_second_example_regularity():
    sf = load("example2")
    assert is_head_regular(sf.system) and is_tail_regular(sf.system)


def test_zero_trailing_matrix_and_identity():
    S = system(RAT, [[["0", "0"], ["0", "0"]], [["1", "0"], ["0", "1"]]])
    # the zero trailing coefficient is trimmed: trailing matrix is A[1] here
    assert is_tail_regular(S)
    S = system(RAT, [[["1", "0"], ["0", "0"]], [["1", "0"], ["0", "1"]]])
    assert not is_tail_regular(S) and is_head_regular(S)
    I = LinearSystem.homogeneous(OreMatrix.identity(RAT, 2))
    assert is_head_regular(I) and is_tail_regular(I)


def test_duplicated_row_consistent():
    S = system(RAT, [[["t", "1"], ["t", "1"]], [["1", "0"], ["1", "0"]]], ["t", "t"])
    reg = regularise(S)
    assert reg.rank == 1 and len(reg.compat) == 1 and reg.compat[0].is_zero()
    assert reg.head.op.shape == (1, 1)
    assert reg.free_vars == (1,)


def test_duplicated_row_inconsistent():
    S = load("inconsistent").system
    with pytest.raises(Unsolvable) as err:
        regularise(S)
    assert err.value.witness and not any(w.is_zero() for w in err.value.witness)


def test_rejects_zero_and_laurent_operators():
    with pytest.raises(ValueError):
        regularise(LinearSystem.homogeneous(OreMatrix.zero(RAT, 1, 1)))
    with pytest.raises(ValueError):
        regularise(LinearSystem.homogeneous(OreMatrix.shift(RAT, 1, -1)))


def check_regularised(inst):
    reg = regularise(inst.system)
    f = inst.field
    head, tail = reg.head, reg.tail
    assert not determinant(head.op.leading_matrix(), f.ring).is_zero()
    assert not determinant(tail.op.trailing_matrix(), f.ring).is_zero()
    assert reg.P_total.certify() and reg.Q_total.certify() and reg.tail_transform.certify()
    # the ledger: P A Q restricted to the head block is the head operator
    full = reg.P_total.fwd @ inst.system.op @ reg.Q_total.fwd
    r = reg.rank
    assert full.submatrix(range(r), range(r)) == head.op
    assert all(x.is_zero() for M in full.coeffs.values() for row in M[r:] for x in row)
    assert reg.tail_transform.fwd @ head.op == tail.op
    for y in inst.solutions():
        y_t = reg.project(y)
        assert head.is_solution(y_t[:r])
        assert tail.is_solution(y_t[:r])
        assert reg.lift(y_t[:r], y_t[r:]) == list(y)
        assert inst.system.is_solution(reg.lift(y_t[:r], y_t[r:]))
    return reg


@pytest.mark.parametrize("case", sorted(field_cases()))
def test_regularise_planted_instances(case):
    for field in field_cases()[case]:
        for seed in range(6):
            check_regularised(random_instance(field, 1000 + seed))


def test_rank_deficient_planted_instance():
    # stack a planted system with a combination of its own rows
    inst = random_instance(RAT, 7, max_n=2, max_order=1)
    op = inst.system.op
    n = op.rows
    extra = OreMatrix(RAT, n + 1, n, {
        0: [[RatFunc(RAT.ring.one if i == j else RAT.ring.zero) for j in range(n)] for i in range(n)]
        + [[RatFunc(RAT.poly("t + 2")) if j == 0 else RatFunc(RAT.ring.zero) for j in range(n)]],
        1: [[RatFunc(RAT.ring.zero)] * n for _ in range(n)] + [[RatFunc(RAT.ring.one) if j == n - 1 else RatFunc(RAT.ring.zero) for j in range(n)]],
    })
    big = LinearSystem(extra @ op, ore_apply(extra, inst.system.rhs))
    reg = regularise(big)
    assert reg.rank == n and len(reg.compat) == 1 and reg.compat[0].is_zero()
    for y in inst.solutions():
        y_t = reg.project(y)
        assert reg.head.is_solution(y_t[: reg.rank])
