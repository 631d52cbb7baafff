from fractions import Fraction

import pytest

from errors import CycloZeroDivisionError
from exact_arith import (
    OMEGA,
    OMEGA2,
    OMEGA_COMPLEX,
    CycloRational,
    canon,
    cyclo_inv,
    is_rational,
    omega_power,
    parse_scalar,
    scalar_parts,
)


def test_omega_is_a_primitive_cube_root():
    assert OMEGA * OMEGA == OMEGA2
    assert OMEGA ** 3 == 1
    assert 1 + OMEGA + OMEGA2 == 0
    assert OMEGA != 1


def test_inverse_times_element_is_one():
    x = CycloRational(2, 3)
    assert x * cyclo_inv(x) == 1
    assert cyclo_inv(Fraction(3, 4)) == Fraction(4, 3)
    assert (1 / x) * x == 1


def test_inverse_of_zero_raises():
    with pytest.raises(CycloZeroDivisionError):
        cyclo_inv(0)
    with pytest.raises(CycloZeroDivisionError):
        cyclo_inv(CycloRational(0, 0))
    with pytest.raises(ZeroDivisionError):
        CycloRational(1, 1) / 0


def test_canon_demotes_to_smallest_carrier():
    assert canon(CycloRational(3, 0)) == 3
    assert type(canon(CycloRational(3, 0))) is int
    assert type(canon(Fraction(4, 2))) is int
    assert canon(Fraction(1, 2)) == Fraction(1, 2)
    assert isinstance(canon(CycloRational(1, 1)), CycloRational)


def test_rationality():
    assert is_rational(5)
    assert is_rational(CycloRational(Fraction(1, 3), 0))
    assert not is_rational(OMEGA)
    # w - w^2 = sqrt(-3), its square is rational
    s = OMEGA - OMEGA2
    assert not is_rational(s)
    assert is_rational(s * s)
    assert s * s == -3


def test_norm_and_conjugate():
    x = CycloRational(1, 1)
    assert x.norm() == 1
    assert x * x.conjugate() == x.norm()
    assert OMEGA.conjugate() == OMEGA2


def test_complex_embedding():
    assert abs(complex(OMEGA) - OMEGA_COMPLEX) < 1e-15
    assert abs(complex(CycloRational(2, -1)) - (2 - OMEGA_COMPLEX)) < 1e-15


def test_omega_power_wraps():
    assert omega_power(0) == 1
    assert omega_power(4) == OMEGA
    assert omega_power(-1) == OMEGA2


def test_parse_scalar():
    assert parse_scalar("3/2") == Fraction(3, 2)
    assert parse_scalar("[1/3,2/3]") == CycloRational(Fraction(1, 3), Fraction(2, 3))
    assert parse_scalar("[4, 0]") == 4
    with pytest.raises(ValueError):
        parse_scalar("[1,2,3]")
    assert scalar_parts(OMEGA) == (0, 1)
    assert scalar_parts(Fraction(1, 2)) == (Fraction(1, 2), 0)
