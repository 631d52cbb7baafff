import mpmath
import pytest
from mpmath import mpc

from errors import NearPoleError
from expr_parser import parse_identity
from numeric_engine import (
    Q_RADIUS,
    VAR_RADIUS,
    appell,
    d_n,
    eulerian,
    point_rng,
    relative_residual,
    residuals_at_points,
    sample_point,
    split_rhs,
    theta,
    universal_g,
)

Q = mpc('0.3', '0.1')
X = mpc('0.7', '0.4')
Z = mpc('-0.9', '0.35')
ZP = mpc('0.2', '-1.05')


def close(a, b, tol=1e-20):
    return abs(a - b) <= tol * max(abs(a), abs(b), 1)


def test_theta_vanishes_at_one():
    with mpmath.workdps(30):
        assert theta(mpc(1), Q) == 0


def test_triple_product_against_bilateral_sum():
    with mpmath.workdps(30):
        total = sum((-1) ** (n % 2) * Q ** (n * (n - 1) // 2) * X ** n for n in range(-60, 61))
        assert close(theta(X, Q), total)


def test_appell_functional_equations():
    with mpmath.workdps(30):
        m = appell(X, Z, Q)
        assert close(m, appell(X, Q * Z, Q))
        assert close(m, appell(1 / X, 1 / Z, Q) / X)


def test_d2_split_numerically():
    with mpmath.workdps(30):
        assert close(d_n(2, X, Z, ZP, Q), split_rhs(2, X, Z, ZP, Q), 1e-18)


def test_fifth_order_mock_theta_conjecture():
    q = mpc('0.25', '0.2')
    with mpmath.workdps(30):
        lhs = eulerian("f0", q)
        rhs = (theta(q ** 5, q ** 10) * theta(q ** 2, q ** 5) / mpmath.qp(q, q)
               - 2 * q ** 2 * universal_g(q ** 2, q ** 10))
        assert close(lhs, rhs, 1e-18)


def test_appell_pole_is_guarded():
    with mpmath.workdps(30):
        with pytest.raises(NearPoleError):
            appell(X, 1 / X, Q)


def test_unknown_eulerian_name():
    with pytest.raises(KeyError):
        eulerian("nope", Q)


def test_point_stream_is_reproducible():
    a = sample_point(point_rng(7, "TENTH-1"), ["x", "z"])
    b = sample_point(point_rng(7, "TENTH-1"), ["z", "x"])
    c = sample_point(point_rng(7, "TENTH-2"), ["x", "z"])
    assert a == b
    assert a != c
    q, values = a
    assert Q_RADIUS[0] <= abs(q) <= Q_RADIUS[1]
    assert all(VAR_RADIUS[0] <= abs(v) <= VAR_RADIUS[1] for v in values.values())


def test_residuals():
    (flip,) = parse_identity("J(x; q) = J(q x^-1; q)")
    (wrong,) = parse_identity("J(x; q) = J(q^2 x^-1; q)")
    with mpmath.workdps(30):
        q, values = sample_point(point_rng(0, "flip"), ["x"])
    assert relative_residual(flip, q, values) < 1e-20
    assert relative_residual(wrong, q, values) > 1e-3


def test_residuals_at_points_reports_each_point():
    (flip,) = parse_identity("J(x; q) = J(q x^-1; q)")
    worst, details = residuals_at_points([flip], ["x"], 3, point_rng(0, "flip"))
    assert len(worst) == 3
    assert [d["point"] for d in details] == ["0", "1", "2"]
    assert max(worst) < 1e-20
