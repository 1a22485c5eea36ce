from fractions import Fraction

import pytest

from kp2.mirror import (
    birkhoff_normalizations,
    build_ibar,
    c1_closed_form,
    mirror_data,
    mirror_map,
    verify_pf,
)
from kp2.scalars import CycScalar, weight
from kp2.series import QSeries


def test_pf_residual_vanishes_small():
    for i in range(3):
        assert verify_pf(i, 8, 5).is_zero()


def test_pf_negative_control():
    # dropping the q-shifted correction term must leave a residual
    assert not verify_pf(0, 6, 4, include_correction=False).is_zero()


def test_restricted_series_leading_pole():
    f = build_ibar(0, 5).expand_at_zero(3)
    for d in range(6):
        assert not f.get(d, -d).is_zero()
        assert f.get(d, -d - 1).is_zero() if d < 5 else True


def test_restricted_series_degree_zero_is_one():
    f = build_ibar(1, 4).expand_at_zero(2)
    assert f.get(0, 0) == CycScalar(1)
    assert f.get(0, 1).is_zero()


def test_normalizations(mirror12):
    assert mirror12.C0 == mirror12.C1
    kink = QSeries([1, 27], 12)
    product = mirror12.C0 * mirror12.C1 * mirror12.C2 * kink
    assert product == QSeries.one(12)
    assert mirror12.C1 * mirror12.C1 * mirror12.C2 == mirror12.L ** 3


def test_limit_c1_matches_closed_form(mirror12):
    assert mirror12.C1 == c1_closed_form(12)
    expected = [1, -6, 90, -1680, 34650]
    for d, value in enumerate(expected):
        assert mirror12.C1[d] == CycScalar(value)


def test_normalizations_across_fixed_points():
    # each constant picks up one factor of w_i; the cube of a weight is 1,
    # so every defining product is weight-free
    base = birkhoff_normalizations(6)
    for i in (1, 2):
        alt = birkhoff_normalizations(6, i=i)
        w = weight(i)
        for ours, theirs in zip(base, alt):
            assert theirs == ours * QSeries.constant(w, 6)
        kink = QSeries([1, 27], 6)
        assert alt[0] * alt[1] * alt[2] * kink == QSeries.one(6)


def test_mirror_map(mirror12):
    t, qofq = mirror_map(12)
    assert t == mirror12.T_minus_logq
    assert t[0].is_zero()
    assert t[1] == CycScalar(-6)
    assert t[2] == CycScalar(45)
    # dT/dlogq = 1 + D(T - logq) equals C1
    assert t.d_logq() + QSeries.one(12) == mirror12.C1
    from kp2.series import qs_exp

    assert qofq == qs_exp(t)


def test_l_series(mirror12):
    cube = mirror12.L ** 3 * QSeries([1, 27], 12)
    assert cube == QSeries.one(12)
    assert mirror12.L[1] == CycScalar(-9)
    assert mirror12.L[2] == CycScalar(162)


def test_x_series(mirror12):
    assert mirror12.X == mirror12.C1.d_logq() / mirror12.C1
    assert mirror12.X[1] == CycScalar(-6)
    assert mirror12.X[2] == CycScalar(144)


def test_c_series_is_inverse_normalization(mirror12):
    assert mirror12.c * mirror12.C1 == QSeries.one(12)


def test_leading_pole_coefficient():
    # the self-index denominator factors are pure k*z, so the z^{-d} term
    # is the z=0 value of everything else; at d=1 that is (-3w)^3 over the
    # two cross differences
    f = build_ibar(2, 3).expand_at_zero(4)
    w = weight(2)
    lead = (-3 * w) ** 3 / ((w - weight(0)) * (w - weight(1)))
    assert f.get(1, -1) == lead


def test_mirror_data_requires_positive_truncation():
    with pytest.raises(ValueError):
        mirror_data(-1)
