from __future__ import annotations

import math

import mpmath
import pytest

from spectral_zeta import applications as app
from spectral_zeta.errors import ValidationError
from spectral_zeta.seqcore import builtin, scale
from spectral_zeta.sumzeta import sum_zeta_at_zero, sum_zeta_deriv_at_zero

mpmath.mp.dps = 30
SQ = builtin("squares")
LOG_2PI = math.log(2 * math.pi)


def mp_log_eta(y: float) -> float:
    return float(mpmath.log(mpmath.eta(1j * mpmath.mpf(y))).real)


@pytest.mark.parametrize("y", [0.2, 0.5, 1.0, 3.0, 10.0])
def test_dedekind_eta_vs_mpmath(y):
    assert app.dedekind_eta(y).log_value == pytest.approx(mp_log_eta(y), abs=1e-14)


def test_dedekind_eta_at_i():
    assert math.exp(app.dedekind_eta(1.0).log_value) == pytest.approx(0.7682254223, abs=1e-10)


def test_dedekind_eta_large_y():
    y = 20.0
    assert abs(app.dedekind_eta(y).log_value + math.pi * y / 12) < 1e-50 + math.exp(-2 * math.pi * y) * 2


@pytest.mark.parametrize("y", [0.5, 1.0, 2.0])
def test_epstein_constant_and_kronecker(y):
    z0, d0 = app.epstein_expansion(y)
    assert z0 == -1.0
    assert abs(d0 - (-2 * (LOG_2PI + 2 * mp_log_eta(y)))) <= 1e-9


def test_kronecker_at_one():
    # eta_D(i) = Gamma(1/4) / (2 pi^{3/4}); the coefficient carries 2 log eta_D, as the torus determinant confirms
    eta_i = math.gamma(0.25) / (2 * math.pi ** 0.75)
    assert eta_i == pytest.approx(0.7682254223, abs=1e-10)
    ref = -2 * (LOG_2PI + 2 * math.log(eta_i))
    assert app.epstein_expansion(1.0)[1] == pytest.approx(ref, abs=1e-9)


@pytest.mark.parametrize("y", [0.3, 1.0, 2.5])
def test_generalized_eta_of_squares(y):
    g = app.generalized_eta(SQ, y).log_value
    assert abs(g - (mp_log_eta(y) - 0.5 * LOG_2PI)) <= 1e-10
    assert abs(g - app.eta_squares_closed(y).log_value) <= 1e-10


def test_generalized_eta_large_y():
    y = 6.0
    assert app.generalized_eta(SQ, y).log_value == pytest.approx(-0.5 * LOG_2PI - math.pi * y / 12, abs=1e-14)


def test_printed_normalization_differs():
    y = 1.0
    diff = app.eta_squares_closed(y, "printed").log_value - app.eta_squares_closed(y).log_value
    assert diff == pytest.approx(math.pi * y / 6)
    with pytest.raises(ValidationError):
        app.eta_squares_closed(y, "other")


def test_functional_equation():
    assert app.eta_functional_equation_residual(SQ, 2.0) <= 1e-10
    assert sum_zeta_at_zero(scale(SQ, 4.0), SQ) == 0.25
    assert app.eta_functional_equation_residual(SQ, 1.0) == 0.0
    assert app.dedekind_functional_residual(3.0) <= 1e-10
    for S in (builtin("integers"), builtin("power", scale=1.0, power=1.5)):
        for y in (0.5, 2.0):
            assert app.eta_functional_equation_residual(S, y) <= 1e-10


def test_circle_determinant():
    assert math.exp(app.circle_log_det(1.0)) == pytest.approx(4 * math.pi ** 2, abs=1e-10)
    r = 0.3
    assert math.exp(app.circle_log_det(r)) == pytest.approx(4 * math.pi ** 2 * r * r, rel=1e-12)


def test_det_product_structure():
    unit = builtin("circle", radius=1 / (2 * math.pi))
    assert app.log_det(unit) == pytest.approx(0.0, abs=1e-13)
    M = builtin("circle", radius=1.0)
    ld = app.det_product(unit, M, log=True)
    assert ld == pytest.approx(app.log_det(M) - sum_zeta_deriv_at_zero(unit, M), abs=1e-12)
    assert app.det_product(M, M, sum_deriv=0.5, log=True) == pytest.approx(2 * app.log_det(M) - 0.5)
    assert app.det_product(M, M, sum_deriv=0.5, dim_ker=(1, 2), log=True) == pytest.approx(3 * app.log_det(M) - 0.5)
    with pytest.raises(ValidationError):
        app.det_product(M, M, dim_ker=(0, 1))


@pytest.mark.parametrize("y", [0.5, 1.0, 2.0])
def test_torus_routes(y):
    vals = [app.torus_log_det(y, r) for r in ("epstein", "product", "circle")]
    ref = float(mpmath.log(4 * mpmath.pi ** 2) + 4 * mpmath.log(mpmath.eta(1j * mpmath.mpf(y))).real)
    for v in vals:
        assert abs(math.expm1(v - ref)) <= 1e-8


def test_det_circle_times_circle():
    M = builtin("circle", radius=1.0)
    y = 2 * math.pi
    # prefactor 4 pi^2 / y^2 = 1; the exponent uses FP zeta(-1/2) = -1/6 and no residue
    ld = app.det_circle_times_M(y, M, log=True)
    expected = math.log(1.0) + 1.0 * (-1 / 6) + app._log_spectral_product(M, 1.0, 2.0)
    assert ld == pytest.approx(expected, abs=1e-13)
    assert app.det_circle_times_M(y, M) == pytest.approx(math.exp(ld))


def test_det_circle_product_factor_vanishes_for_small_circles_dual():
    M = builtin("circle", radius=1.0)
    y = 0.02  # x = 2 pi / y large: the product over Sp+ M is 1 to double precision
    assert app._log_spectral_product(M, 2 * math.pi / y, 2.0) == 0.0


def test_det_circle_other_manifold():
    # M = flat torus with spectrum m^2 + n^2 is not a power rule; use a scaled circle instead
    M = builtin("circle", radius=0.7)
    for y in (0.5, 1.5):
        assert app.det_circle_times_M(y, M, log=True) == pytest.approx(
            app.det_product(builtin("circle", radius=1 / y), M, log=True), rel=1e-8
        )


def test_validation():
    for bad in (0.0, -1.0, float("nan"), float("inf")):
        with pytest.raises(ValidationError):
            app.dedekind_eta(bad)
    with pytest.raises(ValidationError):
        app.torus_log_det(1.0, "other")
