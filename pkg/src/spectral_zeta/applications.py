"""Epstein zeta at s = 0, Dedekind-type eta functions and determinants of products.

Normalization of the eta function of a sequence: it is defined through

    zeta'(0, S + y^2 S) = -zeta(0, S + y^2 S) log y^2 - log eta(iy, S),

which for S = {n^2} gives eta(iy, S) = eta_D(iy) / sqrt(2 pi), with
eta_D(iy) = e^{-pi y / 12} prod (1 - e^{-2 pi y n}).  The variant with the
opposite sign in the exponential prefactor is kept as
``eta_squares_closed(y, "printed")`` for comparison only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun
from .errors import CrossCheckError, PrecisionError, ValidationError
from .invariants import laurent_at, require
from .seqcore import SequenceDescriptor, builtin, iter_eigenvalues, scale
from .sumzeta import sum_zeta_at_zero, sum_zeta_deriv_at_zero

DET_TOL = 1e-8


@dataclass(frozen=True)
class EtaValue:
    log_value: float
    y: float
    sequence_tag: str


def _check_y(y: float) -> float:
    y = float(y)
    if not (y > 0 and math.isfinite(y)):
        raise ValidationError("y must be a positive real number")
    return y


def log_q_product(x: float, power: float = 1.0) -> float:
    """sum_{n>=1} log(1 - e^{-x n}) for x > 0, summed until the terms vanish."""
    if not x > 0:
        raise ValidationError("the product needs a positive exponent")
    terms = []
    n = 1
    while True:
        q = math.exp(-x * n)
        if q < 1e-18 and n > 1:
            break
        terms.append(math.log1p(-q))
        n += 1
        if n > 10_000_000:
            raise PrecisionError("q-product did not converge")
    return power * math.fsum(terms)


def dedekind_eta(y: float) -> EtaValue:
    """log eta_D(iy) = -pi y/12 + sum log(1 - e^{-2 pi y n})."""
    y = _check_y(y)
    return EtaValue(-math.pi * y / 12.0 + log_q_product(2 * math.pi * y), y, "dedekind")


def eta_squares_closed(y: float, normalization: str = "consistent") -> EtaValue:
    """Closed product for eta(iy, {n^2}).

    "consistent": e^{-pi y/12} prod / sqrt(2 pi), the normalization for which
    the limit formula and the functional equation both hold.
    "printed": e^{+pi y/12} prod / sqrt(2 pi), kept to document the mismatch.
    """
    y = _check_y(y)
    sign = {"consistent": -1.0, "printed": 1.0}.get(normalization)
    if sign is None:
        raise ValidationError("normalization is 'consistent' or 'printed'")
    return EtaValue(-0.5 * specfun.LOG_2PI + sign * math.pi * y / 12.0 + log_q_product(2 * math.pi * y), y, f"squares-{normalization}")


def generalized_eta(S: SequenceDescriptor, y: float, threads: int | None = None) -> EtaValue:
    """log eta(iy, S) = -zeta'(0, y^2 S + S) - zeta(0, y^2 S + S) log y^2, from the sum decomposition."""
    y = _check_y(y)
    S1 = scale(S, y * y)
    z0 = sum_zeta_at_zero(S1, S)
    d0 = sum_zeta_deriv_at_zero(S1, S, threads=threads)
    return EtaValue(-d0 - z0 * math.log(y * y), y, S.label)


def eta_functional_equation_residual(S: SequenceDescriptor, y: float) -> float:
    """|log eta(i/y, S) - 2 zeta(0, S + y^2 S) log y - log eta(iy, S)|."""
    y = _check_y(y)
    z0 = sum_zeta_at_zero(scale(S, y * y), S)
    lhs = generalized_eta(S, 1.0 / y).log_value
    rhs = 2.0 * z0 * math.log(y) + generalized_eta(S, y).log_value
    return abs(lhs - rhs)


def dedekind_functional_residual(y: float) -> float:
    """|log eta_D(i/y) - (1/2) log y - log eta_D(iy)|, the modular relation at tau = iy."""
    y = _check_y(y)
    return abs(dedekind_eta(1.0 / y).log_value - 0.5 * math.log(y) - dedekind_eta(y).log_value)


# ---------------------------------------------------------------- Epstein / Kronecker


def epstein_expansion(y: float) -> tuple[float, float]:
    """zeta(0) and zeta'(0) of sum' (y^2 m^2 + n^2)^-s over (m, n) != 0.

    Assembled as 2 y^{-2s} zeta_R(2s) + 2 zeta_R(2s) + 4 zeta(s, S + y^2 S)
    with S = {n^2}.
    """
    y = _check_y(y)
    S = builtin("squares")
    S1 = scale(S, y * y)
    zr0 = specfun.zeta(0.0)
    dzr0 = specfun.zeta_prime(0.0)
    value = 2 * zr0 + 2 * zr0 + 4 * sum_zeta_at_zero(S1, S)
    deriv = math.fsum([2 * (-2 * math.log(y) * zr0 + 2 * dzr0), 4 * dzr0, 4 * sum_zeta_deriv_at_zero(S1, S)])
    return value, deriv


def kronecker_coefficient(y: float) -> float:
    """-2 (log 2 pi + 2 log eta_D(iy))."""
    return -2.0 * (specfun.LOG_2PI + 2.0 * dedekind_eta(y).log_value)


# ---------------------------------------------------------------- determinants


def log_det(S: SequenceDescriptor) -> float:
    """log det = -zeta'(0, S)."""
    return -require(laurent_at(S, 0.0).res_minus1, f"zeta'(0) of {S.label}")


def circle_log_det(radius: float = 1.0) -> float:
    return log_det(builtin("circle", radius=radius))


def det_product(
    M1: SequenceDescriptor,
    M2: SequenceDescriptor,
    sum_deriv: float | None = None,
    dim_ker: tuple[int, int] = (1, 1),
    log: bool = False,
) -> float:
    """det of the Laplacian on M1 x M2 from the positive spectra of the factors.

    Sp+(M1 x M2) = k2 copies of Sp+ M1, k1 copies of Sp+ M2 and the sum
    sequence Sp+ M1 + Sp+ M2, where k1, k2 are the kernel dimensions.
    """
    k1, k2 = dim_ker
    if k1 < 1 or k2 < 1:
        raise ValidationError("kernel dimensions must be at least 1 on closed manifolds")
    if sum_deriv is None:
        sum_deriv = sum_zeta_deriv_at_zero(M1, M2)
    ld = k2 * log_det(M1) + k1 * log_det(M2) - sum_deriv
    return ld if log else math.exp(ld)


def _log_spectral_product(M: SequenceDescriptor, x: float, power: float) -> float:
    """power * sum_k m_k log(1 - e^{-x sqrt(lam_k)})."""
    terms = []
    for lam, m in iter_eigenvalues(M):
        q = math.exp(-x * math.sqrt(lam))
        if q < 1e-18:
            break
        terms.append(m * math.log1p(-q))
    return power * math.fsum(terms)


def det_circle_times_M(y: float, M: SequenceDescriptor, cross_check: bool = True, log: bool = False) -> float:
    """det on S^1 of radius 1/y times M, by the closed product over Sp+ M.

    (4 pi^2 / y^2) exp((2 pi / y)(FP zeta(-1/2, M) + (2 - 2 log 2) Res zeta(-1/2, M)))
    prod (1 - e^{-(2 pi / y) sqrt(lam_k)})^2.  The determinant of M itself is
    contained in this product; it is not a separate factor.
    """
    y = _check_y(y)
    e = laurent_at(M, -0.5)
    r0 = require(e.res0, "finite part of zeta(-1/2) of M")
    r1 = require(e.res1, "residue of zeta at -1/2 of M")
    x = 2.0 * math.pi / y
    ld = math.fsum(
        [
            math.log(4 * math.pi ** 2 / (y * y)),
            x * (r0 + (2.0 - 2.0 * math.log(2.0)) * r1),
            _log_spectral_product(M, x, 2.0),
        ]
    )
    if cross_check:
        other = det_product(builtin("circle", radius=1.0 / y), M, log=True)
        if abs(other - ld) > DET_TOL * max(1.0, abs(ld)):
            raise CrossCheckError("circle x M determinant: closed product and sum decomposition disagree", ld, other, DET_TOL)
    return ld if log else math.exp(ld)


def torus_log_det(y: float, route: str) -> float:
    """log det on S^1_{1/y} x S^1_1 (spectrum y^2 m^2 + n^2) by one of three routes."""
    y = _check_y(y)
    if route == "epstein":
        return -epstein_expansion(y)[1]
    if route == "product":
        return det_product(builtin("circle", radius=1.0 / y), builtin("circle", radius=1.0), log=True)
    if route == "circle":
        return det_circle_times_M(y, builtin("circle", radius=1.0), cross_check=False, log=True)
    raise ValidationError("route is 'epstein', 'product' or 'circle'")
