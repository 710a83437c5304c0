"""Gamma function of a sequence, resolvent traces r_k and the E-coefficients.

All three are sums over the spectrum of functions that behave like a power
of 1/lam_n for large n.  They are split at the first index N with
lam_N >= 4 |x|: below N the terms are summed directly, above N each term is
expanded in the small ratio x/lam_n and the expansion is summed against the
scaled power tails

    T(sigma) = sum_{n >= N} m_n (lam_N / lam_n)**sigma,

which are Hurwitz-type sums for power rules and a leading-order counting
estimate for explicit lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun
from .errors import PoleError, ValidationError
from .seqcore import ExplicitList, PowerRule, SequenceDescriptor


@dataclass(frozen=True)
class CanonicalProductValue:
    log_value: float
    truncation_terms: int
    tail_bound: float


@dataclass(frozen=True)
class _Split:
    head_values: np.ndarray
    head_mults: np.ndarray
    lam_cut: float
    tail: Callable[[float], float]  # sigma -> T(sigma)
    modelled: bool  # tail is an estimate rather than a convergent series


def _split(S: SequenceDescriptor, x: float) -> _Split:
    src = S.source
    if isinstance(src, PowerRule):
        s, p, m = src.scale, src.power, src.multiplicity
        N = max(1, int(math.ceil((4.0 * abs(x) / s) ** (1.0 / p))))
        n = np.arange(1, N, dtype=float)
        lam_cut = src.value(N)
        return _Split(s * n ** p, np.full(N - 1, m, dtype=float), lam_cut, lambda sig: m * specfun.power_tail(p * sig, N), False)
    if isinstance(src, ExplicitList):
        if not S.heat_coeffs or S.heat_coeffs[0][0] <= 0:
            raise ValidationError("explicit spectrum needs a positive leading heat coefficient for its tail")
        a0, c0, _ = S.heat_coeffs[0]
        vals = np.asarray(src.values, dtype=float)
        lam_cut = float(vals[-1])
        weight = c0 * lam_cut ** a0 / math.gamma(a0)

        def tail(sig: float) -> float:
            return weight / (sig - a0)

        return _Split(vals, np.asarray(src.mults, dtype=float), lam_cut, tail, True)
    raise ValidationError("Gamma functions of sum sequences are not evaluated directly; use the sumzeta module")


def _series(terms: Callable[[int], float], start: int, ratio: float) -> tuple[float, int, float]:
    """Sum terms(j) for j >= start until negligible; returns (sum, count, bound)."""
    acc = 0.0
    j = start
    last = 0.0
    while True:
        t = terms(j)
        acc += t
        last = abs(t)
        j += 1
        if last <= 1e-18 * abs(acc) or last == 0.0 or j - start > 400:
            break
    bound = 2.0 * last * max(1.0, ratio / (1.0 - ratio)) if ratio < 1 else math.inf
    return acc, j - start, bound


def _check_resolvent(S: SequenceDescriptor, lam: float) -> None:
    if lam >= S.first_eigenvalue:
        if isinstance(S.source, (PowerRule, ExplicitList)):
            # only the listed/exact spectrum matters
            from .seqcore import eigenvalues_upto

            for v, _ in eigenvalues_upto(S, lam * (1 + 1e-12)):
                if abs(v - lam) <= 1e-12 * abs(lam):
                    raise PoleError(f"lambda = {lam} lies on the spectrum")


def log_gamma_seq(lam: float, S: SequenceDescriptor) -> CanonicalProductValue:
    """log Gamma(-lam, S) for lam <= 0, i.e. minus the log of the canonical product at -lam."""
    lam = float(lam)
    if lam > 0:
        raise ValidationError("log_gamma_seq is evaluated on the negative real axis only")
    x = -lam
    if x == 0.0:
        return CanonicalProductValue(0.0, 0, 0.0)
    g = S.genus
    sp = _split(S, x)
    u = x / sp.head_values
    body = np.log1p(u)
    for j in range(1, g + 1):
        body = body + (-1) ** j / j * u ** j
    head = math.fsum(sp.head_mults * body)
    v = x / sp.lam_cut
    tail, count, bound = _series(lambda k: (-1) ** (k + 1) / k * v ** k * sp.tail(float(k)), g + 1, v)
    if sp.modelled:
        bound = max(bound, abs(tail))
    rounding = 4e-16 * math.fsum(np.abs(sp.head_mults * body))
    return CanonicalProductValue(-(head + tail), len(sp.head_values) + count, bound + rounding)


def r_k(lam: float, k: int, S: SequenceDescriptor) -> float:
    """r_k = -d^{k+1}/dlam^{k+1} log Gamma(-lam, S), for 0 <= k <= genus."""
    g = S.genus
    if k < 0 or k > g or int(k) != k:
        raise ValidationError(f"r_k is defined for 0 <= k <= genus = {g}")
    lam = float(lam)
    _check_resolvent(S, lam)
    sp = _split(S, max(abs(lam), 0.0))
    ln = sp.head_values
    body = math.factorial(k) / (ln - lam) ** (k + 1)
    for i in range(0, g - k):
        body = body - math.factorial(k) * math.comb(i + k, k) * lam ** i / ln ** (i + k + 1)
    head = math.fsum(sp.head_mults * body)
    w = lam / sp.lam_cut
    scale = sp.lam_cut ** (-k - 1)
    tail, _, _ = _series(
        lambda i: math.factorial(k) * math.comb(i + k, k) * w ** i * scale * sp.tail(float(i + k + 1)), g - k, abs(w)
    )
    return -(head + tail)


def e_coeff(k: int, p: int, a: float, S: SequenceDescriptor) -> float:
    """E^p_k(a) = sum_n [(-1)^k/k (a/(a+b_n))^k - sum_{j=k}^{p} (-1)^j/j C(j,k) (a/b_n)^j]."""
    if k < 1 or int(k) != k:
        raise ValidationError("E-coefficients start at k = 1")
    if p != S.genus:
        raise ValidationError(f"p = {p} must equal the genus {S.genus} of the sequence")
    if not a > 0:
        raise ValidationError("E-coefficients need a > 0")
    sp = _split(S, a)
    u = a / sp.head_values
    body = (-1) ** k / k * (u / (1.0 + u)) ** k
    for j in range(k, p + 1):
        body = body - (-1) ** j / j * math.comb(j, k) * u ** j
    head = math.fsum(sp.head_mults * body)
    v = a / sp.lam_cut
    tail, _, _ = _series(
        lambda j: (-1) ** j / k * math.comb(j - 1, k - 1) * v ** j * sp.tail(float(j)), max(p + 1, k), v
    )
    return head + tail


def e_coeff_from_derivative(k: int, a: float, S: SequenceDescriptor) -> float:
    """(-1)^k/k! (-lam)^k d^k/dlam^k log Gamma(-lam,S) at lam = -a, via r_{k-1} and direct sums."""
    g = S.genus
    if k - 1 <= g:
        d = -r_k(-a, k - 1, S)
    else:
        sp = _split(S, a)
        head = math.fsum(sp.head_mults * math.factorial(k - 1) / (sp.head_values + a) ** k)
        v = a / sp.lam_cut
        scale = sp.lam_cut ** (-k)
        tail, _, _ = _series(
            lambda i: math.factorial(k - 1) * math.comb(i + k - 1, i) * (-v) ** i * scale * sp.tail(float(i + k)), 0, v
        )
        d = head + tail
    return (-1) ** k / math.factorial(k) * a ** k * d
