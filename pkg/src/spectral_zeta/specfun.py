"""Real-argument special functions used by the coefficient calculus.

Riemann zeta and its first derivative are evaluated by Euler-Maclaurin
summation (differentiated term by term for the derivative) with the
reflection formula for negative arguments.  Digamma and trigamma use
upward recurrence into the asymptotic regime.  Gamma and log-Gamma
delegate to the C library through :mod:`math`.

Every public evaluator returns a :class:`SpecialValue` carrying an error
estimate next to the value.  The estimate is absolute; for values much
larger than one it is dominated by the relative rounding of double
precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PoleError, ValidationError

EULER_GAMMA = 0.57721566490153286060651209008240243
# first Stieltjes constant: zeta(1+e) = 1/e + EULER_GAMMA - STIELTJES_1 e + ...
STIELTJES_1 = -0.0728158454836767248605863758749547
LOG_2PI = math.log(2.0 * math.pi)
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class SpecialValue:
    value: float
    abs_error_bound: float

    def __float__(self) -> float:
        return self.value


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise ValidationError("Bernoulli index must be non-negative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    acc = Fraction(0)
    for k in range(n):
        acc += math.comb(n + 1, k) * bernoulli(k)
    return -acc / (n + 1)


def as_integer(x: float, tol: float = 1e-9) -> int | None:
    """Return round(x) when x is within ``tol`` of an integer, else None."""
    r = round(x)
    if abs(x - r) <= tol:
        return int(r)
    return None


def _rising_and_derivative(s: float, m: int) -> tuple[float, float]:
    # (s)_m = s(s+1)...(s+m-1) and its s-derivative, no division by factors
    val = 1.0
    der = 0.0
    for i in range(m):
        f = s + i
        der = der * f + val
        val *= f
    return val, der


def _em_tail_scaled(s: float, n0: int, with_log: bool) -> tuple[float, float, float]:
    """Euler-Maclaurin tail sum_{n>=n0} n^-s scaled by n0^s.

    Returns (tail, tail_log, error) where tail_log is the scaled sum of
    -log(n) n^-s (the s-derivative).  n0 must be large compared to |s|.
    """
    ln = math.log(n0)
    nn = float(n0)
    tail = nn / (s - 1.0) + 0.5
    dtail = -nn * (ln / (s - 1.0) + 1.0 / (s - 1.0) ** 2) - 0.5 * ln
    err = 0.0
    prev = math.inf
    for k in range(1, 40):
        b = float(bernoulli(2 * k)) / math.factorial(2 * k)
        p, dp = _rising_and_derivative(s, 2 * k - 1)
        scale = nn ** (1 - 2 * k)
        term = b * p * scale
        dterm = b * (dp - ln * p) * scale
        mag = abs(term) + (abs(dterm) if with_log else 0.0)
        if mag > prev:
            err = mag
            break
        tail += term
        dtail += dterm
        prev = mag
        if mag < 1e-18 * (abs(tail) + (abs(dtail) if with_log else 0.0)):
            err = mag
            break
    else:
        err = prev
    return tail, dtail, err


def power_tail(sigma: float, n0: int) -> float:
    """Scaled tail sum_{n>=n0} (n/n0)^-sigma for sigma > 1."""
    if sigma <= 1.0:
        raise ValidationError("power_tail requires sigma > 1")
    if n0 < 1:
        raise ValidationError("power_tail requires n0 >= 1")
    m = max(n0, int(math.ceil((sigma + 40.0) / math.pi)))
    head = math.fsum((n / n0) ** (-sigma) for n in range(n0, m))
    if m == n0:
        tail, _, _ = _em_tail_scaled(sigma, m, False)
        return head + tail
    ratio = (m / n0) ** (-sigma)
    if ratio == 0.0:
        return head
    tail, _, _ = _em_tail_scaled(sigma, m, False)
    return head + ratio * tail


def _zeta_em(s: float) -> tuple[float, float, float, float]:
    # value, derivative and their errors for s >= -0.25, s != 1
    n0 = max(15, int(math.ceil((abs(s) + 30.0) / 2.0)))
    head = [n ** (-s) for n in range(1, n0)]
    dhead = [-math.log(n) * n ** (-s) for n in range(2, n0)]
    tail, dtail, err = _em_tail_scaled(s, n0, True)
    scale = n0 ** (-s)
    val = math.fsum(head) + tail * scale
    der = math.fsum(dhead) + dtail * scale
    trunc = 2.0 * err * scale
    return (
        val,
        der,
        trunc + 4 * _EPS * (math.fsum(head) + abs(tail) * scale),
        trunc + 4 * _EPS * (-math.fsum(dhead) + abs(dtail) * scale),
    )


def _sin_cos_half_pi(s: float) -> tuple[float, float]:
    # sin(pi s/2), cos(pi s/2) exact at integer s
    k = as_integer(s, 0.0)
    if k is not None:
        return [(0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)][k % 4]
    # exact reduction s/2 = k + d with |d| <= 1/2 before multiplying by pi
    h = 0.5 * s
    k = round(h)
    d = h - k
    sign = -1.0 if k % 2 else 1.0
    return sign * math.sin(math.pi * d), sign * math.cos(math.pi * d)


def _zeta_pair(s: float) -> tuple[float, float, float, float]:
    if s == 1.0:
        raise PoleError("Riemann zeta has a simple pole at s = 1 (residue 1)")
    if s >= -0.25:
        return _zeta_em(s)
    # reflection: zeta(s) = chi(s) zeta(1-s)
    z1, dz1, e1, de1 = _zeta_em(1.0 - s)
    sn, cs = _sin_cos_half_pi(s)
    g = math.gamma(1.0 - s)
    pref = 2.0 ** s * math.pi ** (s - 1.0)
    # gamma, pow: a few ulps each
    rel_chi = 16 * _EPS
    if sn == 0.0:
        # trivial zero: only the derivative of sin survives
        der = pref * 0.5 * math.pi * cs * g * z1
        return 0.0, der, 0.0, abs(der) * rel_chi + abs(pref * 0.5 * math.pi * g) * e1
    chi = pref * sn * g
    psi = digamma(1.0 - s)
    cot = 0.5 * math.pi * cs / sn
    # zeta'/zeta = log 2pi - psi(1-s) + (pi/2) cot(pi s/2) - zeta'(1-s)/zeta(1-s);
    # the first three terms cancel for large negative s, so sum them exactly
    logder = math.fsum([LOG_2PI, -psi, cot])
    # the reduced angle pi d carries one rounding; d cot/d angle = -1/sin^2
    angle = abs(math.pi * (0.5 * s - round(0.5 * s)))
    e_logder = 4 * _EPS * (LOG_2PI + abs(psi) + abs(cot) + 0.5 * math.pi * angle / (sn * sn))
    inner = logder * z1 - dz1
    val = chi * z1
    der = chi * inner
    err_val = abs(val) * rel_chi + abs(chi) * e1
    err_der = abs(der) * rel_chi + abs(chi) * (e_logder * abs(z1) + abs(logder) * e1 + de1 + _EPS * abs(inner))
    return val, der, err_val, err_der


def riemann_zeta(s: float, derivative_order: int = 0) -> SpecialValue:
    """Riemann zeta (order 0) or its first derivative (order 1) at real s."""
    if derivative_order not in (0, 1):
        raise ValidationError("derivative_order must be 0 or 1")
    s = float(s)
    k = as_integer(s, 0.0)
    if derivative_order == 0 and k is not None and k <= 0:
        # exact rational values at non-positive integers
        n = -k
        v = float((-1) ** n * bernoulli(n + 1) / (n + 1))
        return SpecialValue(v, _EPS * abs(v))
    val, der, err, derr = _zeta_pair(s)
    return SpecialValue(der, derr) if derivative_order else SpecialValue(val, err)


def zeta(s: float) -> float:
    return riemann_zeta(s, 0).value


def zeta_prime(s: float) -> float:
    return riemann_zeta(s, 1).value


def zeta_residue_at_one() -> float:
    return 1.0


def zeta_finite_part_at_one() -> float:
    """Constant term of the Laurent expansion of zeta at s = 1."""
    return EULER_GAMMA


def _check_pole(x: float, what: str) -> None:
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"{what} has a pole at {x}")


def digamma(x: float) -> float:
    x = float(x)
    _check_pole(x, "digamma")
    if x < 0.0:
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    p = inv2
    for k in range(1, 10):
        series += float(bernoulli(2 * k)) / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - series


def trigamma(x: float) -> float:
    x = float(x)
    _check_pole(x, "trigamma")
    if x < 0.0:
        return (math.pi / math.sin(math.pi * x)) ** 2 - trigamma(1.0 - x)
    acc = 0.0
    while x < 10.0:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = inv + 0.5 * inv2
    p = inv2 * inv
    for k in range(1, 10):
        series += float(bernoulli(2 * k)) * p
        p *= inv2
    return acc + series


def gamma(x: float) -> float:
    x = float(x)
    _check_pole(x, "gamma")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    """log|Gamma(x)|."""
    x = float(x)
    _check_pole(x, "log_gamma")
    return math.lgamma(x)


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x), zero at the poles of Gamma."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        return 0.0
    if x > 171.0:
        return 0.0
    return 1.0 / math.gamma(x)


def gamma_family(x: float, which: str) -> SpecialValue:
    """Euler Gamma, log|Gamma|, digamma or trigamma at real x."""
    funcs = {"gamma": gamma, "log_gamma": log_gamma, "digamma": digamma, "trigamma": trigamma}
    if which not in funcs:
        raise ValidationError(f"unknown gamma-family member {which!r}")
    v = funcs[which](x)
    return SpecialValue(v, 8 * _EPS * max(1.0, abs(v)))


def k_of_l(l: int) -> SpecialValue:
    """(-1)^l/(2 l!) (pi^2/3 + psi(l+1)^2 + psi'(l+1)), verbatim."""
    if l < 0 or int(l) != l:
        raise ValidationError("k_of_l needs a non-negative integer")
    l = int(l)
    p = digamma(l + 1.0)
    v = (-1) ** l / (2.0 * math.factorial(l)) * (math.pi ** 2 / 3.0 + p * p + trigamma(l + 1.0))
    return SpecialValue(v, 16 * _EPS * max(1.0, abs(v)))


def gamma_laurent_at_negative_integer(l: int) -> tuple[float, float, float]:
    """Coefficients (c_-1, c_0, c_1) of Gamma(l' + eps) with l' = -l, l >= 0.

    Gamma(eps - l) = (-1)^l / l! (1/eps + psi(l+1) + eps/2 (pi^2/3 + psi^2 - psi') + ...).
    """
    f = (-1) ** l / math.factorial(l)
    p = digamma(l + 1.0)
    q = trigamma(l + 1.0)
    return f, f * p, 0.5 * f * (math.pi ** 2 / 3.0 + p * p - q)
