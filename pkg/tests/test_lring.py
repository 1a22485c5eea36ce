from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kp2.lring import A2Form, RingElem, verify_drule
from kp2.scalars import ConsistencyError, CycScalar

coeff = st.fractions(min_value=-50, max_value=50, max_denominator=12)
term_key = st.tuples(
    st.integers(min_value=-4, max_value=4),
    st.integers(min_value=0, max_value=3),
    st.integers(min_value=-2, max_value=2),
)
ring_elems = st.dictionaries(term_key, coeff, max_size=4).map(
    lambda d: sum(
        (RingElem.monomial(c, l=k[0], x=k[1], e=k[2]) for k, c in d.items()),
        RingElem.zero(),
    )
)


@given(ring_elems, ring_elems, ring_elems)
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)


@given(ring_elems, ring_elems)
def test_derive_leibniz(f, g):
    assert (f * g).derive() == f.derive() * g + f * g.derive()


def test_generator_derivatives():
    L, X, c = RingElem.L(1), RingElem.X(), RingElem.c(1)
    assert L.derive() == (RingElem.L(4) - RingElem.L(1)).scale(Fraction(1, 3))
    assert c.derive() == -(c * X)
    # X' is pinned by its defining rule; checked against q-series elsewhere
    expected = (-(X * X) + (RingElem.L(3) - RingElem.one()) * X
                + (RingElem.L(3) - RingElem.one()).scale(Fraction(2, 9)))
    assert X.derive() == expected


def test_drule_against_series(mirror12):
    verify_drule(mirror12)


@given(f=ring_elems)
@settings(max_examples=40, deadline=None)
def test_eval_commutes_with_derive(f, mirror12):
    mirror = mirror12
    assert f.derive().eval_q(mirror) == f.eval_q(mirror).d_logq()


@given(f=ring_elems)
@settings(max_examples=40, deadline=None)
def test_eval_at_q0_matches_series(f, mirror12):
    mirror = mirror12
    assert f.eval_q(mirror)[0] == f.eval_at(1, 0, 1)


def test_d_dT_shifts_c_degree():
    f = RingElem.L(2) + RingElem.X() * RingElem.c(-1)
    assert f.d_dT().c_degrees() == {1, 0}


def test_d_da2_on_x_powers():
    x2 = RingElem.X() * RingElem.X()
    assert x2.d_da2() == RingElem.monomial(Fraction(2, 3), l=3, x=1)
    assert RingElem.one().d_da2().is_zero()


@given(ring_elems)
def test_a2_form_roundtrip(f):
    assert f.to_a2_form().to_x_form() == f


def test_a2_form_shape():
    # X = (L^3 A2 - 1 + L^3/2) / 3 termwise
    a2 = RingElem.X().to_a2_form()
    assert a2.degree_in_a2() == 1
    assert a2.a2_coefficient(1) == RingElem.L(3).scale(Fraction(1, 3))
    assert a2.a2_coefficient(0) == (RingElem.L(3).scale(Fraction(1, 6))
                                    - RingElem.const(Fraction(1, 3)))


def test_json_roundtrip():
    f = RingElem.monomial(CycScalar(1, -2), l=-3, x=2, e=1) + RingElem.one()
    assert RingElem.from_json(f.to_json()) == f
    data = f.to_json()
    assert all(set(item) == {"L", "X", "c", "coeff"} for item in data)


def test_division_rules():
    f = RingElem.L(2) * RingElem.X()
    assert f / RingElem.L(2) == RingElem.X()
    assert f / Fraction(2) == f.scale(Fraction(1, 2))
    with pytest.raises(Exception):
        f / RingElem.X()  # X is not invertible in this ring


def test_negative_powers_only_for_monomials():
    assert RingElem.L(1) ** -2 == RingElem.L(-2)
    with pytest.raises(Exception):
        (RingElem.one() + RingElem.X()) ** -1


def test_degree_helpers():
    f = RingElem.monomial(1, l=-2, x=1, e=3) + RingElem.monomial(1, l=5, x=0, e=0)
    assert f.x_degree() == 1
    assert f.l_range() == (-2, 5)
    assert f.c_degrees() == {0, 3}
    assert f.x_coefficient(1) == RingElem.monomial(1, l=-2, e=3)
    assert RingElem.zero().x_degree() == -1
