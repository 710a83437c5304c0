from __future__ import annotations

import json
import math

import mpmath
import pytest

from spectral_zeta import oracle, specfun
from spectral_zeta.errors import PoleError, ValidationError
from spectral_zeta.seqcore import builtin, load_descriptor, scale
from spectral_zeta.sumzeta import sum_zeta_deriv_at_zero

mpmath.mp.dps = 30
SQ = builtin("squares")
INT = builtin("integers")


def test_direct_squares():
    v, err = oracle.zeta_direct_with_error(SQ, 2.0)
    assert abs(v - math.pi ** 4 / 90) <= max(err, 1e-15)
    assert abs(v - math.pi ** 4 / 90) <= 1e-13


def test_direct_integer_pair():
    ref = float(mpmath.zeta(2) - mpmath.zeta(3))
    assert abs(oracle.zeta_direct((INT, INT), 3.0) - ref) <= 1e-10


def test_direct_power_pair_vs_mpmath():
    # sum_{m,n} (m^1.5 + n)^-3 with the inner sum as a Hurwitz zeta; head summed, tail by Euler-Maclaurin
    f = lambda m: mpmath.zeta(3, m ** 1.5 + 1)  # noqa: E731
    ref = mpmath.fsum(f(m) for m in range(1, 2000)) + mpmath.nsum(f, [2000, mpmath.inf], method="euler-maclaurin")
    P = builtin("power", scale=1.0, power=1.5)
    assert abs(oracle.zeta_direct((P, INT), 3.0) - float(ref)) <= 1e-10


def test_direct_is_monotone():
    vals = [oracle.zeta_direct(SQ, s) for s in (0.8, 1.0, 1.5, 2.0, 4.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_direct_domain():
    with pytest.raises(ValidationError):
        oracle.zeta_direct(SQ, 0.6)


def test_direct_list(tmp_path):
    # the first 400 squares listed explicitly, with the Weyl tail beyond
    d = {
        "kind": "list",
        "eigenvalues": [[float(n * n), 1] for n in range(1, 401)],
        "exponent": 0.5,
        "genus": 0,
        "heat_coeffs": [[0.5, math.sqrt(math.pi) / 2, 0.0], [0.0, -0.5, 0.0]],
        "zeta_data": [[0.0, 0.0, -0.5, -math.log(2 * math.pi)]],
    }
    p = tmp_path / "sq.json"
    p.write_text(json.dumps(d))
    L = load_descriptor(p)
    assert oracle.zeta_direct(L, 2.0) == pytest.approx(math.pi ** 4 / 90, rel=1e-9)


def test_squares_continuation():
    z = oracle.zeta_continued(SQ, 0.0)
    d = oracle.zeta_continued(SQ, 0.0, 1)
    assert abs(z.value + 0.5) <= 1e-9
    assert abs(d.value + math.log(2 * math.pi)) <= 1e-7
    assert z.error_estimate <= 1e-7 and d.error_estimate <= 1e-7


@pytest.mark.parametrize("S", [SQ, INT, builtin("circle", radius=1.0), scale(SQ, 4.0)], ids=lambda S: S.label)
def test_error_estimates_on_builtins(S):
    for s in (-0.5, 0.0, 0.3):
        for k in (0, 1):
            assert oracle.zeta_continued(S, s, k).error_estimate <= 1e-7


@pytest.mark.parametrize("s", [-0.7, -0.25, 0.25, 0.75, 2.5])
def test_continuation_vs_mpmath(s):
    assert oracle.zeta_continued(SQ, s).value == pytest.approx(float(mpmath.zeta(2 * s)), abs=1e-9)
    assert oracle.zeta_continued(INT, s, 1).value == pytest.approx(float(mpmath.zeta(s, derivative=1)), abs=1e-9)


def test_pair_value():
    assert abs(oracle.zeta_continued((SQ, SQ), 0.0).value - 0.25) <= 1e-7


@pytest.mark.parametrize("S,s", [(SQ, 1.5), (SQ, 3.0), (INT, 2.0), ((INT, INT), 3.0), ((SQ, SQ), 2.5)])
def test_continued_matches_direct(S, s):
    assert abs(oracle.zeta_continued(S, s).value - oracle.zeta_direct(S, s)) <= 1e-9


def test_continuation_errors():
    with pytest.raises(PoleError):
        oracle.zeta_continued(SQ, 0.5)
    with pytest.raises(ValidationError):
        oracle.zeta_continued(SQ, -1.5)
    with pytest.raises(ValidationError):
        oracle.zeta_continued(SQ, 0.0, 2)


def test_finite_difference():
    assert abs(oracle.finite_difference_deriv(specfun.zeta, 0.0) + 0.5 * math.log(2 * math.pi)) <= 1e-7
    assert oracle.finite_difference_deriv(lambda s: 3.0 * s - 2.0, 0.7) == pytest.approx(3.0, abs=1e-12)
    fd = oracle.finite_difference_deriv(lambda s: oracle.zeta_continued((SQ, SQ), s).value, 0.0)
    assert abs(fd - sum_zeta_deriv_at_zero(SQ, SQ)) <= 1e-5


def test_appendix_spot_values():
    assert oracle.appendix_closed_form("b4", {"a": 0.5, "s": 1.0}) == pytest.approx(0.5)
    assert oracle.appendix_closed_form("b1", {"a": -1.0, "c": 0.5}) == pytest.approx(-1.0)
    assert oracle.appendix_closed_form("b5", {"a": 1.0, "s": 1.0}) == pytest.approx(-1.0)
    assert oracle.verify_appendix("b4", {"a": 0.5, "s": 1.0}) <= 1e-6
    assert oracle.verify_appendix("b1", {"a": -1.0, "c": 0.5}) <= 1e-6
    assert oracle.verify_appendix("b5", {"a": 1.0, "s": 1.0}) <= 1e-6


@pytest.mark.parametrize("which", sorted(oracle.APPENDIX_GRIDS))
def test_appendix_grids(which):
    grid = oracle.APPENDIX_GRIDS[which]
    assert len(grid) >= 3
    for params in grid:
        assert oracle.verify_appendix(which, params) <= 1e-6
