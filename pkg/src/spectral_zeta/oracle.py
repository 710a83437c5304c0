"""Brute-force cross-checks that share no code path with the coefficient calculus.

* direct (double) series in the convergent half plane
* Mellin representation of zeta with the small-t heat expansion subtracted,
  evaluated by adaptive quadrature
* numerical contour integrals along the boundary of a sector
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from . import specfun
from .errors import PoleError, PrecisionError, ValidationError
from .seqcore import (
    SNAP,
    ExplicitList,
    PowerRule,
    SequenceDescriptor,
    SumSource,
    Triple,
    heat_function,
    sum_descriptor,
)

SeqArg = SequenceDescriptor | tuple[SequenceDescriptor, SequenceDescriptor]

T_SPLIT = 0.05  # below this the heat remainder is replaced by its expansion
SHALLOW = -2.0  # rows above this are subtracted on [T_SPLIT, 1]
DEEP_MIN = -12.0


@dataclass(frozen=True)
class ContinuationResult:
    s: float
    value: float
    error_estimate: float
    pieces: tuple[float, float, float]


def _as_descriptor(S: SeqArg) -> SequenceDescriptor:
    if isinstance(S, tuple):
        return sum_descriptor(*S)
    return S


# ---------------------------------------------------------------- direct series


def _log_tail(g: Callable[[float], float], x0: float) -> tuple[float, float]:
    """int_x0^inf g(x) dx in the variable u = log(x/x0), chunk by chunk.

    Integrands that stay flat up to a large scale and decay only after it
    are handled without a global change of variables.
    """
    h = lambda u: g(x0 * math.exp(u)) * x0 * math.exp(u)  # noqa: E731
    acc: list[float] = []
    err = 0.0
    prev = math.inf
    for k in range(400):
        v, e = integrate.quad(h, 2.0 * k, 2.0 * (k + 1), epsabs=0.0, epsrel=1e-13, limit=100)
        acc.append(v)
        err += e
        total = math.fsum(acc)
        if abs(v) <= 1e-17 * abs(total) and abs(v) <= prev:
            break
        prev = abs(v)
    else:
        raise PrecisionError("direct series tail integral did not settle")
    return math.fsum(acc), err


def _spectral_sum(S: SequenceDescriptor, F: Callable[[float], float], n_head: int = 64) -> tuple[float, float]:
    """sum_n m_n F(lam_n) for decreasing F, with a tail estimate; returns (value, error)."""
    src = S.source
    if isinstance(src, PowerRule):
        s, p, m = src.scale, src.power, src.multiplicity
        N = n_head
        head = math.fsum(F(s * n ** p) for n in range(1, N))
        g = lambda x: F(s * x ** p)  # noqa: E731
        tail, qerr = _log_tail(g, N - 0.5)
        # midpoint rule: sum_{n>=N} g(n) = int_{N-1/2} g + g1/24 - 7 g3/5760 + ...,
        # g1, g3 the first and third derivatives at N - 1/2
        h = 0.5
        x = N - 0.5
        d = 1e-3 * x
        g1 = (g(x + d) - g(x - d)) / (2 * d)
        g3 = (g(x + 2 * h) - 2 * g(x + h) + 2 * g(x - h) - g(x - 2 * h)) / (2 * h ** 3)
        corr3 = 7.0 * g3 / 5760.0
        tail += g1 / 24.0 - corr3
        # g3 carries an O(h^2) relative error, g1 an O(d^2) one
        err = qerr + 0.5 * abs(corr3) + abs(g3) * d * d / 144.0 + 1e-15 * abs(g(x)) / d
        return m * (head + tail), m * (err + 1e-16 * abs(head))
    if isinstance(src, ExplicitList):
        vals = src.values
        head = math.fsum(mu * F(v) for v, mu in zip(vals, src.mults))
        a0, c0, _ = S.heat_coeffs[0]
        dens = lambda lam: F(lam) * c0 * lam ** (a0 - 1.0) / math.gamma(a0)  # noqa: E731
        tail, qerr = _log_tail(dens, vals[-1])
        # the Weyl density is a model of the unlisted spectrum, not a certified bound
        return head + tail, abs(tail) + qerr
    if isinstance(src, SumSource):
        def outer(l1: float) -> float:
            return _spectral_sum(src.second, lambda l2: F(l1 + l2), n_head)[0]

        val, err = _spectral_sum(src.first, outer, n_head)
        inner_err = _spectral_sum(src.second, lambda l2: F(src.first.first_eigenvalue + l2), n_head)[1]
        return val, err + inner_err * max(1.0, abs(val))
    raise ValidationError("unsupported sequence source")


def zeta_direct_with_error(S: SeqArg, s: float) -> tuple[float, float]:
    S = _as_descriptor(S)
    if not s > S.exponent + 0.25:
        raise ValidationError(f"direct series needs s > exponent + 0.25 = {S.exponent + 0.25:g}")
    return _spectral_sum(S, lambda lam: lam ** (-s))


def zeta_direct(S: SeqArg, s: float) -> float:
    return zeta_direct_with_error(S, s)[0]


# ---------------------------------------------------------------- Mellin continuation


@dataclass(frozen=True)
class _HeatModel:
    f: Callable[[float], float]  # sum_n m_n e^{-t lam_n}
    rows: tuple[Triple, ...]
    order: float


def _model(S: SeqArg) -> _HeatModel:
    if isinstance(S, tuple) or S.is_sum:
        S1, S2 = (S if isinstance(S, tuple) else (S.source.first, S.source.second))
        m1, m2 = _model(S1), _model(S2)
        prod: dict[float, list[float]] = {}
        for a, c0, c1 in m1.rows:
            for b, d0, d1 in m2.rows:
                if c1 * d1 != 0.0:
                    raise ValidationError("log^2 t terms in the product heat expansion are not supported")
                key = next((k for k in prod if abs(k - (a + b)) <= SNAP), a + b + 0.0)
                acc = prod.setdefault(key, [0.0, 0.0])
                acc[0] += c0 * d0
                acc[1] += c0 * d1 + c1 * d0
        e1 = max(r[0] for r in m1.rows)
        e2 = max(r[0] for r in m2.rows)
        order = max(m1.order + e2, m2.order + e1)
        rows = tuple((a, v[0], v[1]) for a, v in sorted(prod.items(), reverse=True) if a > order + SNAP)
        # heat of a sum sequence is the product of the two heat functions
        return _HeatModel(lambda t: m1.f(t) * m2.f(t), rows, order)
    if S.heat_coeffs is None:
        raise ValidationError(f"{S.label} has no heat coefficients")
    return _HeatModel(lambda t: heat_function(S, t) - 1.0, tuple(S.heat_coeffs), S.order)


def _row_at(rows: Sequence[Triple], t: float, log_power: int = 0) -> float:
    lt = math.log(t)
    return math.fsum((c0 + c1 * lt) * t ** (-a) * lt ** log_power for a, c0, c1 in rows)


def _small_t_integrals(beta: float, t0: float) -> tuple[float, float, float]:
    """int_0^t0 t^(beta-1) log^k t dt for k = 0, 1, 2 (beta > 0)."""
    L = math.log(t0)
    p = t0 ** beta
    return p / beta, p * (L / beta - 1.0 / beta ** 2), p * (L * L / beta - 2 * L / beta ** 2 + 2.0 / beta ** 3)


def zeta_continued(S: SeqArg, s: float, derivative_order: int = 0) -> ContinuationResult:
    """zeta(s) or zeta'(s) by the subtracted Mellin integral, valid for s > -1 above the expansion order."""
    if derivative_order not in (0, 1):
        raise ValidationError("derivative_order must be 0 or 1")
    s = float(s)
    if s <= -1.0:
        raise ValidationError("continuation is implemented for s > -1")
    model = _model(S)
    shallow = [r for r in model.rows if r[0] > SHALLOW]
    deep = [r for r in model.rows if DEEP_MIN <= r[0] <= SHALLOW]
    omitted = [r for r in model.rows if r[0] < DEEP_MIN]
    if not s > model.order and not (deep or omitted) and math.isfinite(model.order):
        raise ValidationError(f"heat expansion known only down to {model.order:g}; too shallow for s = {s:g}")
    for a, _, _ in shallow:
        if abs(a) > SNAP and abs(s - a) <= SNAP:
            raise PoleError(f"zeta has a pole at {a:g}")
    t0 = T_SPLIT
    zero = [r for r in shallow if abs(r[0]) <= SNAP]
    c00, c01 = (zero[0][1], zero[0][2]) if zero else (0.0, 0.0)
    if c01 != 0.0:
        raise ValidationError("log t term at t^0: zeta has a pole at 0")
    others = [r for r in shallow if abs(r[0]) > SNAP]

    # pole part: int_0^1 t^(s-1) (c0 + c1 log t) t^-a dt
    pole = [c0 / (s - a) - c1 / (s - a) ** 2 for a, c0, c1 in others]
    dpole = [-c0 / (s - a) ** 2 + 2 * c1 / (s - a) ** 3 for a, c0, c1 in others]
    small, dsmall = [], []
    for a, c0, c1 in deep:
        j0, j1, j2 = _small_t_integrals(s - a, t0)
        small.append(c0 * j0 + c1 * j1)
        dsmall.append(c0 * j1 + c1 * j2)
    trunc = 0.0
    if omitted:
        a, c0, c1 = omitted[0]
        trunc = abs(c0) * t0 ** (s - a) / (s - a) + abs(c1) * abs(_small_t_integrals(s - a, t0)[1])
    elif math.isfinite(model.order) and model.order > DEEP_MIN:
        trunc = t0 ** (s - model.order) / (s - model.order)

    def lower(t: float) -> np.ndarray:
        r = model.f(t) - _row_at(shallow, t)
        w = t ** (s - 1.0) * r
        return np.array([w, w * math.log(t)])

    def upper(t: float) -> np.ndarray:
        w = t ** (s - 1.0) * model.f(t)
        return np.array([w, w * math.log(t)])

    lo, lo_err = integrate.quad_vec(lower, t0, 1.0, epsabs=1e-11, epsrel=1e-10, limit=200)
    hi, hi_err = integrate.quad_vec(upper, 1.0, np.inf, epsabs=1e-11, epsrel=1e-10, limit=200)
    # rounding in f - expansion near t0
    cancel = 4e-16 * (abs(model.f(t0)) + abs(_row_at(shallow, t0))) * t0 ** s / max(s, 1e-3) if s > 0 else 4e-16 * (
        abs(model.f(t0)) + abs(_row_at(shallow, t0))
    ) * t0 ** (s - 1.0)
    H = math.fsum(pole) + math.fsum(small) + lo[0] + hi[0]
    dH = math.fsum(dpole) + math.fsum(dsmall) + lo[1] + hi[1]
    herr = 10.0 * (lo_err + hi_err) + trunc + cancel

    g1 = math.gamma(s + 1.0)
    rg = s / g1
    if derivative_order == 0:
        value = rg * H + c00 / g1
        err = abs(rg) * herr + 1e-15 * abs(value)
    else:
        drg = (1.0 - s * specfun.digamma(s + 1.0)) / g1
        value = drg * H + rg * dH - c00 * specfun.digamma(s + 1.0) / g1
        err = (abs(drg) + abs(rg) * (1.0 + abs(math.log(t0)))) * herr + 1e-15 * abs(value)
    return ContinuationResult(s, value, err, (math.fsum(pole) + math.fsum(small), float(lo[derivative_order]), float(hi[derivative_order])))


# ---------------------------------------------------------------- finite differences


def finite_difference_deriv(f: Callable[[float], float], s0: float, h: float = 1e-3) -> float:
    """Central difference with step h, h/2, h/4, Richardson-extrapolated."""
    d = [(f(s0 + hh) - f(s0 - hh)) / (2 * hh) for hh in (h, h / 2, h / 4)]
    r1 = [(4 * d[1] - d[0]) / 3, (4 * d[2] - d[1]) / 3]
    return (16 * r1[1] - r1[0]) / 15


# ---------------------------------------------------------------- contour integrals


def _contour(F: Callable[[complex], complex], vertex: float, theta: float = math.pi / 2, rmax: float = math.inf) -> tuple[float, float]:
    """(1/2 pi i) int F over the boundary of {|arg(z - vertex)| <= theta/2}, counter-clockwise.

    F must satisfy F(conj z) = conj F(z); the two rays then combine into
    -(1/pi) int_0^inf Im(F(vertex + r e^{i phi}) e^{i phi}) dr.
    """
    phi = 0.5 * theta
    e = complex(math.cos(phi), math.sin(phi))

    def g(r: float) -> float:
        return (F(vertex + r * e) * e).imag

    near, err1 = integrate.quad(g, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)

    def g_log(x: float) -> float:
        r = math.exp(x)
        return g(r) * r

    far, err2 = integrate.quad(g_log, 0.0, math.log(rmax), epsabs=1e-14, epsrel=1e-12, limit=400)
    return -(near + far) / math.pi, (err1 + err2) / math.pi


def _mellin_of(I: Callable[[float], float], s: float, tmin: float = 1e-16) -> tuple[float, float]:
    """int_0^inf t^(s-1) I(t) dt, split at t = 1; the piece below tmin is estimated, not integrated."""
    # t = u^(1/s) on (0, 1]
    lo, e1 = integrate.quad(lambda u: I(u ** (1.0 / s)) / s, tmin ** s, 1.0, epsabs=1e-12, epsrel=1e-10, limit=200)
    hi, e2 = integrate.quad(lambda t: t ** (s - 1.0) * I(t), 1.0, np.inf, epsabs=1e-12, epsrel=1e-10, limit=200)
    cut = 2.0 * tmin ** s / s * abs(I(tmin))
    return lo + hi, e1 + e2 + cut


def _inner(kernel: Callable[[complex], complex], c: float, theta: float) -> Callable[[float], float]:
    def I(t: float) -> float:
        rmax = max(60.0, 60.0 / (t * math.cos(0.5 * theta)))
        return _contour(lambda lam: np.exp(-lam * t) / (-lam) * kernel(lam), c, theta, rmax)[0]

    return I


APPENDIX_GRIDS: dict[str, list[dict[str, float]]] = {
    "b1": [{"a": a, "c": c} for a in (-1.0, -0.5, 0.5) for c in (0.25, 0.5, 1.0)],
    "b2": [{"a": a, "c": c} for a in (-1.0, -0.5, 0.5) for c in (0.25, 0.5, 1.0)],
    "b4": [{"a": a, "s": s} for a in (0.5, 1.0, 1.5) for s in (0.75, 1.0, 2.0)],
    "b5": [{"a": a, "s": s} for a in (0.5, 1.0, 1.5) for s in (0.75, 1.0, 2.0)],
    "b7": [{"s": s} for s in (0.75, 1.0, 1.5)],
}


def appendix_closed_form(which: str, params: dict[str, float]) -> float:
    a = params.get("a", 0.0)
    s = params.get("s", 1.0)
    if which == "b1":
        return -specfun.reciprocal_gamma(-a)
    if which == "b2":
        return -specfun.digamma(-a) * specfun.reciprocal_gamma(-a)
    if which == "b4":
        return math.gamma(s + a) / (math.gamma(a) * s)
    if which == "b5":
        return math.gamma(s + a) / (math.gamma(a) * s) * (specfun.digamma(a) - specfun.digamma(s + a))
    if which == "b7":
        return -0.5 / math.sqrt(math.pi) * math.gamma(s + 0.5) / s ** 2
    raise ValidationError(f"unknown appendix identity {which!r}")


def appendix_numeric(which: str, params: dict[str, float]) -> tuple[float, float]:
    """(value, quadrature error) of the contour (and t-) integral."""
    theta = params.get("theta", math.pi / 2)
    a = params.get("a", 0.0)
    s = params.get("s", 1.0)
    if which in ("b1", "b2"):
        c = params.get("c", 0.5)
        if which == "b1":
            F = lambda lam: np.exp(-lam) * (-lam) ** a  # noqa: E731
        else:
            F = lambda lam: np.exp(-lam) * (-lam) ** a * np.log(-lam)  # noqa: E731
        return _contour(F, -c, theta, rmax=200.0)
    c = params.get("c", 0.5)
    if which == "b4":
        kern = lambda lam: (1.0 - lam) ** (-a)  # noqa: E731
    elif which == "b5":
        kern = lambda lam: np.log(1.0 - lam) * (1.0 - lam) ** (-a)  # noqa: E731
    elif which == "b7":
        kern = lambda lam: np.log(1.0 + np.sqrt(1.0 - lam))  # noqa: E731
    else:
        raise ValidationError(f"unknown appendix identity {which!r}")
    if not s > 0:
        raise ValidationError("the t-integral needs s > 0")
    return _mellin_of(_inner(kern, c, theta), s)


def verify_appendix(which: str, params: dict[str, float] | None = None) -> float:
    """|numeric - closed form| for one parameter point."""
    if params is None:
        params = APPENDIX_GRIDS[which][0]
    num, err = appendix_numeric(which, params)
    if not math.isfinite(num):
        raise PrecisionError(f"contour integral {which} did not converge (estimate {err:.3g})")
    return abs(num - appendix_closed_form(which, params))
