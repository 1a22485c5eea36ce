from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kp2.scalars import CycScalar
from kp2.series import QSeries, QZSeries, qs_exp, qs_log

QMAX = 6

coeff = st.fractions(min_value=-100, max_value=100, max_denominator=20)
qseries = st.lists(coeff, min_size=QMAX + 1, max_size=QMAX + 1).map(
    lambda cs: QSeries(cs, QMAX)
)


@given(qseries, qseries, qseries)
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)


@given(qseries)
def test_inverse_of_unit(f):
    unit = f - QSeries.constant(f[0], QMAX) + QSeries.one(QMAX)
    assert unit * unit.inverse() == QSeries.one(QMAX)


def test_inverse_requires_unit():
    with pytest.raises(ZeroDivisionError):
        QSeries([0, 1], 3).inverse()


@given(qseries)
def test_exp_log_roundtrip(f):
    x = f - QSeries.constant(f[0], QMAX)  # kill the constant term
    assert qs_log(qs_exp(x)) == x


@given(qseries, qseries)
def test_exp_is_homomorphism(f, g):
    x = f - QSeries.constant(f[0], QMAX)
    y = g - QSeries.constant(g[0], QMAX)
    assert qs_exp(x + y) == qs_exp(x) * qs_exp(y)


@given(qseries)
def test_dlogq_integrate_roundtrip(f):
    assert f.d_logq().integrate_logq() + QSeries.constant(f[0], QMAX) == f


@given(qseries, qseries)
def test_dlogq_leibniz(f, g):
    assert (f * g).d_logq() == f.d_logq() * g + f * g.d_logq()


def test_truncate_and_index():
    f = QSeries([1, 2, 3], 2)
    assert f[1] == CycScalar(2)
    assert f[-2].is_zero()
    assert f.truncate(1) == QSeries([1, 2], 1)
    with pytest.raises(IndexError):
        f[5]


def test_to_json_rational():
    f = QSeries([Fraction(1, 2), 3], 1)
    assert f.to_json() == ["1/2", "3/1"]


# -- QZSeries ----------------------------------------------------------------


def _qz(entries, qmax=4, zcap=4):
    return QZSeries({k: CycScalar(v) for k, v in entries.items()}, qmax, zcap)


def test_qz_product_tracks_pole_and_cap():
    a = _qz({(0, 0): 1, (1, -1): 2})
    b = _qz({(0, 0): 1, (1, -1): 5})
    ab = a * b
    assert ab.get(1, -1) == CycScalar(7)
    assert ab.get(2, -2) == CycScalar(10)
    assert ab.zcap == 4


def test_qz_log_is_additive():
    a = _qz({(0, 0): 1, (1, -1): 2, (1, 0): 3})
    b = _qz({(0, 0): 1, (1, 1): 4, (2, -2): 1})
    assert (a * b).log() == a.log() + b.log()


def test_qz_exp_pole_inverse():
    s = QSeries([0, 2, -3, 1], 4)
    e = QZSeries.exp_pole(s, 4, 4)
    ei = QZSeries.exp_pole(-s, 4, 4)
    assert e * ei == QZSeries.one(4, 4)


def test_qz_log_exp_roundtrip():
    s = QSeries([0, 1, 1, 0, 2], 4)
    e = QZSeries.exp_pole(s, 4, 4)
    lg = e.log()
    for d in range(5):
        assert lg.get(d, -1) == s[d]
        for m in range(-d, 5):
            if m != -1:
                assert lg.get(d, m).is_zero()


def test_qz_shift_and_coefficient_helpers():
    a = _qz({(0, 0): 1, (1, 2): 7})
    assert a.shift_q(1, 3).get(2, 2) == CycScalar(21)
    assert a.z_coefficient(2)[1] == CycScalar(7)
    assert a.mul_z_power(1).get(1, 3) == CycScalar(7)


def test_qz_pole_bound_enforced():
    with pytest.raises(Exception):
        _qz({(0, -1): 1})
