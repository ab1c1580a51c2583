import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import FIELDS, polys
from recdenom.dispersion import INF, NEG_INF, dispersion, dispersion_bruteforce, spread
from recdenom.field import PI, SIGMA, FieldSpec, apply_sigma
from recdenom.oracle import random_pair

RAT = FieldSpec.rational()
QR = FieldSpec.qrational("q")


def test_spread_simple_shift():
    assert spread(RAT, RAT.poly("t + 3"), RAT.poly("t")).finite_set == (3,)


def test_spread_self_overlap():
    p = RAT.poly("t*(t + 2)")
    res = spread(RAT, p, p)
    assert res.finite_set == (0, 2) and res.dispersion == 2
    assert str(res) == "spread = {0, 2}; disp = 2"


def test_spread_q_shift():
    assert spread(QR, QR.poly("t - 1"), QR.poly("t - q^2")).finite_set == (2,)


def test_spread_worked_example():
    m = RAT.poly("(2*t - 1)*t*(t^2 + t + 2)*(t^2 - t + 2)*(t + 1)^2")
    p = RAT.poly("t^2*(t + 1)*(t^2 - t + 2)*(t^2 + 3*t + 3)")
    res = spread(RAT, apply_sigma(RAT, m, -1), p)
    assert res.finite_set == (0,)
    assert dispersion(RAT, apply_sigma(RAT, m, -1), p) == 0


def test_empty_and_infinite_spread():
    assert dispersion(RAT, RAT.poly("t^2 + 1"), RAT.poly("t + 1/2")) == NEG_INF
    assert str(spread(RAT, RAT.poly("t"), RAT.poly("t^2 + 1"))) == "spread = {}; disp = -inf"
    res = spread(QR, QR.poly("t*(t - 1)"), QR.poly("t^2"))
    assert res.is_infinite and res.dispersion == INF


def test_bruteforce_window():
    a, b = RAT.poly("t + 3"), RAT.poly("t")
    assert dispersion_bruteforce(RAT, a, b, "t", 2) == []
    assert dispersion_bruteforce(RAT, a, b, "t", 5) == [3]
    with pytest.raises(ValueError):
        dispersion_bruteforce(RAT, a, b, "t", -1)


def test_spread_along_each_generator():
    F = FieldSpec.multibasic(["q1", "q2"], ["t1", "t2"])
    # sigma acts on all generators at once
    b = F.poly("t1 - t2")
    a = F.poly("q1^3*t1 - q2^3*t2")
    assert spread(F, a, b, "t1").finite_set == (3,)
    assert spread(F, a, b, "t2").finite_set == (3,)
    assert spread(F, F.poly("q1^3*t1 - t2"), b, "t1").finite_set == ()
    M = FieldSpec.mixed(["q1"], ["t1"], "t")
    b = M.poly("t1 + t")
    a = M.poly("q1^4*t1 + t + 4")
    assert spread(M, a, b, "t").finite_set == (4,)
    assert spread(M, a, b, "t1").finite_set == (4,)
    assert spread(M, M.poly("t1 + t + 4"), b, "t").finite_set == ()
    # a factor free of t1 is invisible along t1
    assert spread(M, M.poly("t + 4"), M.poly("t"), "t1").finite_set == ()
    assert spread(M, M.poly("t + 4"), M.poly("t"), "t").finite_set == (4,)


@pytest.mark.parametrize("name", sorted(FIELDS))
def test_spread_matches_bruteforce(name):
    f = FIELDS[name]
    rng = random.Random(20 + len(name))
    for _ in range(25):
        a, b = random_pair(f, rng)
        for g in f.generators:
            res = spread(f, a, b, g.name)
            if res.is_infinite:
                assert g.kind == PI
                t = f.ring.gen(g.name)
                assert t.divides(a) and t.divides(b)
                continue
            k_max = max(res.dispersion, 0) + 3
            assert list(res.finite_set) == dispersion_bruteforce(f, a, b, g.name, k_max)


@given(st.data())
def test_spread_monotone_under_multiplication(data):
    name = data.draw(st.sampled_from(["rational", "qrational2", "multibasic23", "mixed"]))
    f = FIELDS[name]
    a, b, c = (data.draw(polys(f, 2, terms=3, params=False, nonzero=True)) for _ in range(3))
    gen = data.draw(st.sampled_from(f.gen_names))
    big = spread(f, a * c, b, gen)
    small = spread(f, c, b, gen)
    if big.is_infinite:
        return
    assert not small.is_infinite
    assert set(small.finite_set) <= set(big.finite_set)


@given(st.data())
def test_infinite_exactly_when_generator_divides_both(data):
    name = data.draw(st.sampled_from(sorted(FIELDS)))
    f = FIELDS[name]
    a = data.draw(polys(f, 2, terms=3, nonzero=True))
    b = data.draw(polys(f, 2, terms=3, nonzero=True))
    gen = data.draw(st.sampled_from(f.generators))
    res = spread(f, a, b, gen.name)
    if gen.kind == SIGMA:
        assert not res.is_infinite
    else:
        t = f.ring.gen(gen.name)
        both = t.divides(a) and t.divides(b)
        assert res.is_infinite == both


@pytest.mark.parametrize("name", ["rational", "qrational", "qrational2"])
def test_fast_methods_agree_with_resultant(name):
    f = FIELDS[name]
    rng = random.Random(7)
    fast = "scan" if f.params else "roots"
    for _ in range(15):
        a, b = random_pair(f, rng)
        assert spread(f, a, b, method=fast) == spread(f, a, b, method="resultant")


@pytest.mark.parametrize("name", ["multibasic", "multibasic23", "mixed"])
def test_factor_method_agrees_with_bruteforce_on_planted_shifts(name):
    f = FIELDS[name]
    rng = random.Random(11)
    for _ in range(10):
        a, _ = random_pair(f, rng)
        for g in f.generators:
            if a.free_of([g.name]):
                continue
            shift = rng.randint(0, 4)
            b = apply_sigma(f, a, -shift)
            res = spread(f, a, b, g.name, method="factor")
            if res.is_infinite:
                continue
            assert shift in res.finite_set
            assert list(res.finite_set) == dispersion_bruteforce(f, a, b, g.name, max(res.dispersion, 0) + 3)
