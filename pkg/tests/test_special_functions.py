from fractions import Fraction

import pytest

from errors import DegenerateSpecializationError
from qring import ONE_MONO, Q_MONO, Monomial
from special_functions import (
    AppellSpec,
    EulerianName,
    ThetaSpec,
    appell_degenerate,
    appell_m,
    d_n,
    eulerian,
    eulerian_base,
    g_degenerate,
    split_argument,
    splitting_rhs,
    theta_abbrev,
    theta_is_zero,
    theta_prod,
    theta_sum,
    universal_g,
)
from zfield import LaurentPoly, RatFunc, binomial_inverse

Z = Monomial(1, 0, 1)
W = Monomial.make(1, 0, 0, Fraction(1, 3))
ORDER = 20
DUAL_FORM_ORDER = 100

THETA_SUITE = [
    (Z, Q_MONO),
    (-Z, Q_MONO),
    (Z ** -1, Q_MONO ** 2),
    (Q_MONO * Z ** 2, Q_MONO ** 2),
    (-(Q_MONO * Z), Q_MONO ** 3),
    (Q_MONO ** 3 * Z ** -1, Q_MONO ** 3),
    (Q_MONO ** 2 * Z ** 3, Q_MONO ** 4),
    (Z ** 5, Q_MONO ** 5),
    (-(Q_MONO ** 4 * Z ** -2), Q_MONO ** 6),
    (-(Z ** 2), -Q_MONO),
    (Q_MONO * Z, -(Q_MONO ** 3)),
    (-ONE_MONO, Q_MONO),
    (-Q_MONO, Q_MONO ** 2),
    (Q_MONO, Q_MONO ** 3),
    (-(Q_MONO ** 2), Q_MONO ** 5),
    (-(Q_MONO ** 3), Q_MONO ** 7),
    (-(Q_MONO ** 5), Q_MONO ** 8),
    (Q_MONO ** 2, -(Q_MONO ** 5)),
    (-(Q_MONO ** 2), -(Q_MONO ** 10)),
    (W * Q_MONO, Q_MONO ** 2),
]

# (x, z') pairs with z left formal; none makes a theta or Appell factor vanish
SPLIT_SPECIALIZATIONS = {
    2: [(Q_MONO * Z ** 2, Q_MONO * Z ** 3), (Z ** 3, -(Z ** -5)), (-(Q_MONO * Z ** -2), Q_MONO ** 2 * Z)],
    3: [(Q_MONO * Z ** 2, -(Q_MONO * Z)), (-(Z ** -2), Q_MONO ** 2 * Z), (Q_MONO ** 2 * Z, -(Z ** -1))],
    4: [(Q_MONO * Z, -(Q_MONO ** 3 * Z)), (-(Z ** 2), Q_MONO * Z ** -1), (Q_MONO * Z ** -2, -(Q_MONO ** 2 * Z))],
}


@pytest.mark.parametrize("arg, base", [
    (Z, Q_MONO),
    (Q_MONO * Z ** 2, Q_MONO ** 2),
    (-(Q_MONO ** 2), Q_MONO ** 5),
    (Q_MONO ** 3 * Z ** -1, Q_MONO ** 3),
    (-(Q_MONO ** 2), -(Q_MONO ** 10)),
])
def test_triple_product_matches_bilateral_sum(arg, base):
    spec = ThetaSpec(arg, base)
    assert (theta_sum(spec, ORDER) - theta_prod(spec, ORDER)).is_zero()


@pytest.mark.slow
@pytest.mark.parametrize("arg, base", THETA_SUITE)
def test_dual_forms_agree_to_high_order(arg, base):
    spec = ThetaSpec(arg, base)
    difference = theta_sum(spec, DUAL_FORM_ORDER) - theta_prod(spec, DUAL_FORM_ORDER)
    assert difference.is_zero()
    assert difference.order == DUAL_FORM_ORDER


def test_theta_constant_term_in_z():
    s = theta_sum(ThetaSpec(Z, Q_MONO), 5)
    assert s.coeff(0) == RatFunc.poly(LaurentPoly(0, [1, -1]))


def test_theta_zeros():
    assert theta_is_zero(ThetaSpec(ONE_MONO, Q_MONO))
    assert theta_is_zero(ThetaSpec(Q_MONO ** 3, Q_MONO))
    assert not theta_is_zero(ThetaSpec(-ONE_MONO, Q_MONO))
    assert theta_prod(ThetaSpec(Q_MONO ** 4, Q_MONO ** 2), 10).is_zero()


def test_theta_base_must_be_a_q_power():
    with pytest.raises(ValueError):
        ThetaSpec(Z, Z)


def test_eta_abbreviation_is_euler_function():
    s = theta_abbrev("eta", 0, 1, 12)
    assert [s.coeff(e).constant_value() for e in range(8)] == [1, -1, -1, 0, 0, 1, 0, 1]


def test_appell_is_periodic_in_z():
    a = appell_m(AppellSpec(Z, -ONE_MONO, Q_MONO), 12)
    b = appell_m(AppellSpec(Z, -Q_MONO, Q_MONO), 12)
    assert (a - b).is_zero()


def test_appell_degeneracy():
    assert appell_degenerate(AppellSpec(Z, ONE_MONO, Q_MONO)) is not None
    assert appell_degenerate(AppellSpec(Q_MONO, Q_MONO ** -1, Q_MONO)) is not None
    assert appell_degenerate(AppellSpec(Z, -ONE_MONO, Q_MONO)) is None
    with pytest.raises(DegenerateSpecializationError):
        appell_m(AppellSpec(Z, Q_MONO ** 2, Q_MONO), 5)


def test_d2_matches_theta_quotient_split():
    x, z, zp = Z, -Q_MONO, -Q_MONO
    lhs = d_n(2, x, z, zp, Q_MONO, 8)
    rhs = splitting_rhs(2, x, z, zp, Q_MONO, 8)
    assert (lhs - rhs).is_zero()


@pytest.mark.slow
@pytest.mark.parametrize("n, x, zp", [
    (n, x, zp) for n, pairs in SPLIT_SPECIALIZATIONS.items() for x, zp in pairs
])
def test_splitting_holds_with_formal_z(n, x, zp):
    lhs = d_n(n, x, Z, zp, Q_MONO, 40)
    rhs = splitting_rhs(n, x, Z, zp, Q_MONO, 40)
    assert (lhs - rhs).is_zero()


def test_d_n_needs_n_at_least_two():
    with pytest.raises(ValueError):
        d_n(1, Z, -ONE_MONO, -ONE_MONO, Q_MONO, 5)


def test_fifth_order_f0_head():
    s = eulerian_base(EulerianName.F0, 5)
    assert [s.coeff(e).constant_value() for e in range(6)] == [1, 1, -1, 1, 0, 0]


def test_eulerian_twist_and_substitution():
    plain = eulerian_base(EulerianName.PHI10, 12)
    assert (eulerian(EulerianName.PHI10, 1, Q_MONO, 12) - plain.twist(1)).is_zero()
    doubled = eulerian(EulerianName.PHI10, 0, Q_MONO ** 2, 12)
    assert (doubled - plain.substitute(1, 2).truncate(12)).is_zero()


def test_split_argument():
    w2q = Monomial.make(1, 1, 0, Fraction(2, 3))
    assert split_argument(w2q) == (1, 2, 1)
    assert split_argument(-(Q_MONO ** 3)) == (-1, 0, 3)
    with pytest.raises(ValueError):
        split_argument(Z)


def test_universal_g():
    assert g_degenerate(Q_MONO, Q_MONO) is not None
    # constant term z^-1 (-1 + 1 / (1 - z)) = 1 / (1 - z)
    g = universal_g(Z, Q_MONO, 4)
    assert g.coeff(0) == binomial_inverse(1, 1)
