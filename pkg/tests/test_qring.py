from fractions import Fraction

import pytest

from errors import DegenerateSpecializationError, NonUnitSeriesError, UnboundedSeriesError, UnsupportedFieldError
from exact_arith import OMEGA, OMEGA2
from qring import ONE_MONO, Q_MONO, Monomial, PochFactor, Series, expand_product, geom_factor_inverse, poch_fin, poch_inf
from zfield import LaurentPoly, RatFunc

Z_MONO = Monomial(1, 0, 1)

PARTITIONS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176]


def pentagonal(order):
    out = {}
    k = 0
    while True:
        done = True
        for j in ((k,) if k == 0 else (k, -k)):
            e = j * (3 * j - 1) // 2
            if e <= order:
                out[e] = (-1) ** (j % 2)
                done = False
        if done:
            return out
        k += 1


def test_monomial_phase_normalization():
    m = Monomial.make(1, 0, 0, Fraction(2, 3))
    assert m.sign == -1
    assert m.turn == Fraction(1, 6)
    assert m.coefficient() == OMEGA2
    assert Monomial.make(1, 2, 0, Fraction(1, 3)).coefficient() == OMEGA
    with pytest.raises(UnsupportedFieldError):
        Monomial.make(1, 0, 0, Fraction(1, 4)).coefficient()


def test_monomial_arithmetic():
    m = Monomial.make(-1, 2, -1)
    assert (m * m.inverse()).is_one()
    assert m ** 2 == Monomial(1, 4, -2)
    assert (-m).sign == 1
    assert str(Q_MONO * Z_MONO ** -5) == "q z^-5"


def test_euler_function_is_pentagonal():
    s = poch_inf(Q_MONO, Q_MONO, 30)
    expected = pentagonal(30)
    for e in range(31):
        assert s.coeff(e) == expected.get(e, 0)


def test_inverse_counts_partitions():
    s = poch_inf(Q_MONO, Q_MONO, 15).invert()
    assert [s.coeff(e).constant_value() for e in range(16)] == PARTITIONS


def test_invert_zero_series_raises():
    with pytest.raises(NonUnitSeriesError):
        Series.zero(10).invert()


def test_geometric_series_in_formal_z():
    s = Series.one(6).div_binomial(Q_MONO * Z_MONO)
    for e in range(7):
        assert s.coeff(e) == RatFunc.monomial(1, e)
    back = s.mul_binomial(Q_MONO * Z_MONO)
    assert back.coeff(0) == 1
    assert all(back.coeff(e).is_zero() for e in range(1, 7))


def test_geom_factor_inverse_with_negative_power():
    # 1 / (1 - q^-1) = -q / (1 - q)
    s = geom_factor_inverse(1, -1, 0, 6)
    assert s.coeff(0).is_zero()
    for e in range(1, 7):
        assert s.coeff(e) == -1


def test_finite_pochhammer():
    # (q; q)_2 = 1 - q - q^2 + q^3
    s = poch_fin(Q_MONO, Q_MONO, 2, 8)
    assert [s.coeff(e).constant_value() for e in range(5)] == [1, -1, -1, 1, 0]


def test_coefficient_beyond_order_raises():
    with pytest.raises(ValueError):
        Series.one(3).coeff(4)


def test_twist_and_substitute():
    geom = Series.one(5).div_binomial(Q_MONO)
    twisted = geom.twist(1)
    assert twisted.coeff(1) == OMEGA
    assert twisted.coeff(2) == OMEGA2
    assert twisted.coeff(3) == 1
    sub = geom.substitute(-1, 2)
    assert sub.coeff(2) == -1
    assert sub.coeff(4) == 1
    assert sub.coeff(3).is_zero()


def test_pochhammer_factor_vanishing():
    assert PochFactor(Q_MONO ** -2, Q_MONO).is_zero()
    assert not PochFactor(Q_MONO ** -2, Q_MONO, 2).is_zero()
    assert not PochFactor(-Q_MONO, Q_MONO).is_zero()
    assert PochFactor(ONE_MONO, Q_MONO ** 2).is_zero()
    with pytest.raises(UnboundedSeriesError):
        PochFactor(Q_MONO, Monomial(1, 0, 1))


def test_expand_product_rejects_vanishing_denominator():
    with pytest.raises(DegenerateSpecializationError):
        expand_product(5, 1, ONE_MONO, [], [PochFactor(ONE_MONO, Q_MONO)])


def test_expand_product_with_vanishing_numerator_is_zero():
    s = expand_product(5, 1, ONE_MONO, [PochFactor(ONE_MONO, Q_MONO)], [])
    assert s.is_zero()


def test_expand_product_with_constant_binomials():
    # (z; q)_inf / (z; q)_inf = 1, including the q^0 factor in z
    s = expand_product(8, 1, ONE_MONO, [PochFactor(Z_MONO, Q_MONO)], [PochFactor(Z_MONO, Q_MONO)])
    assert s.coeff(0) == 1
    assert all(s.coeff(e).is_zero() for e in range(1, 9))
    head = poch_inf(Z_MONO, Q_MONO, 3).coeff(0)
    assert head == RatFunc.poly(LaurentPoly(0, [1, -1]))
