import pytest

from recdenom.arith import RatFunc
from recdenom.bound import denbound
from recdenom.dispersion import dispersion
from recdenom.field import FieldSpec
from recdenom.oracle import ConstructionError, check_divisibility, field_cases, plant_system, random_instance
from recdenom.solver import verify_solution

RAT = FieldSpec.rational()


@pytest.mark.parametrize("case", sorted(field_cases()))
def test_same_seed_same_instance(case):
    for f in field_cases()[case]:
        assert random_instance(f, 31).render() == random_instance(f, 31).render()
        assert random_instance(f, 31).render() != random_instance(f, 32).render()


@pytest.mark.parametrize("case", sorted(field_cases()))
def test_planted_vectors_solve_their_systems(case):
    for f in field_cases()[case]:
        for seed in range(4):
            inst = random_instance(f, seed)
            assert inst.system.op.rows <= 3 and (inst.system.op.hi or 0) <= 2
            for y in inst.planted:
                assert verify_solution(inst.homogeneous_system, y)
            for y in inst.solutions():
                assert verify_solution(inst.system, y)


def test_check_divisibility_detects_a_missing_factor():
    t = RAT.ring.gen("t")
    y = (RatFunc(RAT.ring.one) / RatFunc(t * (t + 3)), RatFunc(t) / RatFunc(t + 3))
    inst = plant_system(RAT, 2, 1, [y], seed=6)
    db = denbound(inst.system)
    assert check_divisibility(db, inst)
    assert check_divisibility(RAT.poly("t*(t + 3)"), [y], RAT)
    assert not check_divisibility(RAT.poly("t"), [y], RAT)
    assert not check_divisibility(RAT.ring.one, [y], RAT)
    assert check_divisibility(RAT.ring.one, [(RatFunc(t),)], RAT)
    # t and t + 3 are three shifts apart, so the bound sees dispersion 3
    assert db.D >= dispersion(RAT, RAT.poly("t*(t + 3)"), RAT.poly("t*(t + 3)")) == 3
    with pytest.raises(ValueError):
        check_divisibility(db, [y])


def test_pi_monomial_powers_are_not_required():
    Q = FieldSpec.qrational("q")
    t = Q.ring.gen("t")
    y = (RatFunc(Q.ring.one) / RatFunc(t ** 2 * (t - 1)),)
    assert check_divisibility(Q.poly("t - 1"), [y], Q)


def test_plant_system_rejects_impossible_requests():
    with pytest.raises((ConstructionError, ValueError)):
        plant_system(RAT, 1, 1, [(RatFunc(RAT.ring.one),)] * 3, seed=0)
