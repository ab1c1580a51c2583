import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import FIELDS, polys
from recdenom.arith import RatFunc, associated
from recdenom.dispersion import dispersion
from recdenom.field import PI, SIGMA, FieldSpec, aperiodic, apply_sigma, classify, split_periodic


def test_sigma_rational_square():
    F = FieldSpec.rational()
    assert apply_sigma(F, F.poly("t^2"), 1) == F.poly("t^2 + 2*t + 1")


def test_sigma_qrational_associate():
    F = FieldSpec.qrational("q")
    shifted = apply_sigma(F, F.poly("t - q^2"), 2)
    assert associated(shifted, F.poly("t - 1"), "t")
    assert apply_sigma(F, F.parse("1/(t - q^2)"), 2) == F.parse("1/(q^2*t - q^2)")


def test_sigma_numeric_base():
    F = FieldSpec.multibasic([2, 3], ["t1", "t2"])
    assert apply_sigma(F, F.poly("t1*t2 - 1"), 1) == F.poly("6*t1*t2 - 1")
    assert apply_sigma(F, F.poly("t1 - t2"), -1) == F.parse("t1/2 - t2/3").num


def test_sigma_mixed():
    F = FieldSpec.mixed(["q1"], ["t1"], "t")
    assert apply_sigma(F, F.poly("t1 + t"), 2) == F.poly("q1^2*t1 + t + 2")


@given(st.sampled_from(sorted(FIELDS)).flatmap(lambda n: st.tuples(st.just(FIELDS[n]), polys(FIELDS[n], 2))))
def test_sigma_zero_is_identity(fp):
    f, p = fp
    assert apply_sigma(f, p, 0) == p


@given(st.data())
def test_sigma_composes(data):
    f = FIELDS[data.draw(st.sampled_from(sorted(FIELDS)))]
    p = RatFunc(data.draw(polys(f, 2)))
    j, k = data.draw(st.integers(-5, 5)), data.draw(st.integers(-5, 5))
    assert apply_sigma(f, apply_sigma(f, p, j), k) == apply_sigma(f, p, j + k)


@given(st.data())
def test_sigma_is_ring_morphism(data):
    f = FIELDS[data.draw(st.sampled_from(sorted(FIELDS)))]
    p = RatFunc(data.draw(polys(f, 2)))
    r = RatFunc(data.draw(polys(f, 2)))
    k = data.draw(st.integers(-4, 4))
    assert apply_sigma(f, p * r, k) == apply_sigma(f, p, k) * apply_sigma(f, r, k)
    assert apply_sigma(f, p + r, k) == apply_sigma(f, p, k) + apply_sigma(f, r, k)


def test_split_periodic_examples():
    R = FieldSpec.rational()
    assert split_periodic(R, R.poly("t*(t + 1)"), "t") == (R.ring.one, R.poly("t*(t + 1)"))
    Q = FieldSpec.qrational("q")
    per, aper = split_periodic(Q, Q.poly("t^3*(t - 1)"), "t")
    assert per == Q.poly("t^3") and aper == Q.poly("t - 1")
    per, aper = split_periodic(Q, Q.poly("t - q"), "t")
    assert per.is_one() and aper == Q.poly("t - q")


@given(st.data())
def test_split_periodic_properties(data):
    name = data.draw(st.sampled_from(sorted(FIELDS)))
    f = FIELDS[name]
    p = data.draw(polys(f, 2, nonzero=True))
    for g in f.generators:
        per, aper = split_periodic(f, p, g.name)
        assert per * aper == p
        if g.kind == PI:
            assert not f.ring.gen(g.name).divides(aper) or aper.is_zero()
    ap = aperiodic(f, p)
    for g in f.generators:
        if g.kind == PI:
            assert not f.ring.gen(g.name).divides(ap)
    if ap.degree_in([f.gen_names[0]]) > 0 and len(f.generators) == 1:
        assert dispersion(f, ap, ap) != float("inf")


def test_classify():
    assert classify(FieldSpec.rational(), "t") == SIGMA
    assert classify(FieldSpec.qrational("q"), "t") == PI
    M = FieldSpec.mixed(["q1", "q2"], ["t1", "t2"], "t")
    assert classify(M, "t1") == PI and classify(M, "t2") == PI and classify(M, "t") == SIGMA


@pytest.mark.parametrize(
    "header",
    ["rational(t)", "qrational(q; t)", "qrational(2; t)", "multibasic(q1, q2; t1, t2)", "multibasic(2, 3; t1, t2)", "mixed(q1, q2; t1, t2, t)"],
)
def test_header_round_trip(header):
    f = FieldSpec.from_header("field " + header)
    assert f.header() == header
    assert FieldSpec.from_header(f.header()) == f


@pytest.mark.parametrize(
    "header",
    [
        "rational(t, s)",
        "qrational(q; t, s)",
        "multibasic(q, q; t1, t2)",
        "multibasic(2, 4; t1, t2)",
        "multibasic(1; t)",
        "mixed(q; t)",
        "mixed(q; t, t)",
        "tower(q; t)",
        "rational t",
    ],
)
def test_invalid_headers(header):
    with pytest.raises(ValueError):
        FieldSpec.from_header(header)
