"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from recdenom.field import FieldSpec

FIELDS = {
    "rational": FieldSpec.rational(),
    "qrational": FieldSpec.qrational("q"),
    "qrational2": FieldSpec.qrational(2),
    "multibasic": FieldSpec.multibasic(["q1", "q2"], ["t1", "t2"]),
    "multibasic23": FieldSpec.multibasic([2, 3], ["t1", "t2"]),
    "mixed": FieldSpec.mixed(["q1"], ["t1"], "t"),
}

coeffs = st.integers(-5, 5)


@st.composite
def polys(draw, field, degree=2, terms=4, params=True, nonzero=False):
    ring = field.ring
    nparams = len(ring.params) if params else 0
    exps = st.tuples(
        *[st.integers(0, 1) for _ in range(nparams)],
        *[st.just(0) for _ in range(len(ring.params) - nparams)],
        *[st.integers(0, degree) for _ in ring.gens],
    )
    items = draw(st.lists(st.tuples(exps, coeffs), min_size=1 if nonzero else 0, max_size=terms))
    p = ring.from_terms(items)
    if nonzero and p.is_zero():
        p = ring.one
    return p


@st.composite
def ratfuncs(draw, field, degree=2):
    from recdenom.arith import RatFunc

    num = draw(polys(field, degree))
    den = draw(polys(field, 1, terms=2, nonzero=True))
    return RatFunc(num) / RatFunc(den)


field_names = st.sampled_from(sorted(FIELDS))
