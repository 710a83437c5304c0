"""Zeta invariants at s = 0 of a sum sequence lam_{1,n} + lam_{2,m}.

The sum is decomposed over the first summand: for each lam_1 the inner
sequence contributes log Gamma(lam_1, S2), whose large-lam_1 expansion is
subtracted term by term.  The subtracted pieces give the singular
contributions (finite sums over the ladders of both summands) and the
remainder is a convergent sum over lam_1, the regularized double product.

Every quantity with two independent closed forms is computed both ways and
the results are compared; a disagreement raises ``CrossCheckError``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import specfun
from .errors import CrossCheckError, MissingDataError, PrecisionError, ValidationError
from .gammaseq import log_gamma_seq
from .invariants import LaurentExpansion, as_integer, laurent_at, require
from .seqcore import SNAP, ExplicitList, PowerRule, SequenceDescriptor

ZERO_TOL = 1e-12
DERIV_TOL = 1e-10
MAX_OUTER_TERMS = 1_000_000


@dataclass(frozen=True)
class PhiLaurent:
    """Laurent data at s = 0 of one Phi function, paired with zeta(s + sigma, S1)."""

    sigma: float
    kind: str  # "tilde" (power terms) or "hat" (log terms)
    res2: float
    res1: float
    res0: float


@dataclass(frozen=True)
class ProductValue:
    value: float
    terms: int
    bound: float  # truncation plus accumulated rounding
    truncation: float = 0.0


@dataclass(frozen=True)
class DecompositionPlan:
    kappa: float
    length: int
    sigma_ladder: tuple[float, ...]
    rho_ladder: tuple[float, ...]
    phi_laurent: tuple[PhiLaurent, ...]
    A00_at_zero: float = math.nan
    A00_bound: float = math.nan
    A01_at_zero: float = 0.0
    A01_deriv_at_zero: float = 0.0
    alpha_ladder: tuple[float, ...] = field(default=())


# ---------------------------------------------------------------- ladders


def nominal_ladder(S: SequenceDescriptor, lower: float) -> list[float]:
    """Ladder points of the log-Gamma expansion of S that are >= lower, zero rows included.

    For power rules the ladder is the grid (1 - j)/p together with the
    non-positive integers; otherwise it is the listed rows plus 0..genus.
    """
    pts: set[float] = set()
    for rows in (S.gamma_coeffs, S.heat_coeffs):
        for r in rows or ():
            if r[0] >= lower - SNAP:
                pts.add(r[0])
    for k in range(0, S.genus + 1):
        pts.add(float(k))
    src = S.source
    if isinstance(src, PowerRule):
        j = 0
        while (1.0 - j) / src.power >= lower - SNAP:
            pts.add((1.0 - j) / src.power)
            j += 1
        k = 0
        while -k >= lower - SNAP:
            pts.add(float(-k))
            k += 1
    merged: list[float] = []
    for p in sorted(pts, reverse=True):
        n = as_integer(p)
        p = float(n) if n is not None else p
        if not merged or abs(merged[-1] - p) > SNAP:
            merged.append(p)
    return merged


def _in_naturals(alpha: float) -> bool:
    k = as_integer(alpha)
    return k is not None and k >= 0


def _in_integers(alpha: float) -> bool:
    return as_integer(alpha) is not None


def check_hypotheses(S1: SequenceDescriptor, S2: SequenceDescriptor) -> None:
    for S in (S1, S2):
        if S.is_sum:
            raise ValidationError("summands must be simple sequences; pair sums iteratively")
        if S.gamma_coeffs is None:
            raise MissingDataError(f"log-Gamma coefficients of {S.label} are required")
    if not S1.order < -S2.genus - 1:
        raise ValidationError(
            f"hypothesis failed: order of the first summand ({S1.order:g}) must be < -p2 - 1 = {-S2.genus - 1}"
        )
    if not -S2.order >= S1.exponent:
        raise ValidationError(
            f"hypothesis failed: minus the order of the second summand ({-S2.order:g}) must be >= s1 = {S1.exponent:g}"
        )


def plan_decomposition(
    S1: SequenceDescriptor, S2: SequenceDescriptor, with_product: bool = True, threads: int | None = None
) -> DecompositionPlan:
    check_hypotheses(S1, S2)
    alphas = nominal_ladder(S2, -S1.exponent)
    sigmas = tuple(-a + 0.0 for a in alphas)
    p2 = S2.genus
    phis: list[PhiLaurent] = []
    for a in alphas:
        if _in_naturals(a):
            phis.append(PhiLaurent(-a + 0.0, "tilde", 0.0, 0.0, 0.0))
        else:
            a0, _ = S2.gamma_coeff(a)
            phis.append(PhiLaurent(-a + 0.0, "tilde", 0.0, a0, specfun.digamma(-a) * a0))
    for l in range(0, p2 + 1):
        _, al1 = S2.gamma_coeff(float(l))
        psi = specfun.digamma(l + 1.0)
        const = 0.5 * (math.pi ** 2 / 3.0 + psi * psi - specfun.trigamma(l + 1.0))
        phis.append(PhiLaurent(float(-l) + 0.0, "hat", -al1, -psi * al1, -const * al1))
    rho = tuple(float(-(p2 - l)) + 0.0 for l in range(0, p2 + 1))
    a00 = bound = math.nan
    if with_product:
        prod = regularized_log_product(S1, S2, alphas=alphas, threads=threads)
        a00, bound = -prod.value, prod.bound
    return DecompositionPlan(1.0, len(alphas) - 1, sigmas, rho, tuple(phis), a00, bound, 0.0, 0.0, tuple(alphas))


# ---------------------------------------------------------------- zeta(0)


def zeta0_heat_pairing(S1: SequenceDescriptor, S2: SequenceDescriptor) -> float:
    """sum over the decomposition ladder of c_{1,-alpha,0} c_{2,alpha,0}."""
    alphas = nominal_ladder(S2, -S1.exponent)
    terms = [S1.heat_coeff(-a)[0] * S2.heat_coeff(a)[0] for a in alphas]
    return math.fsum(terms)


def zeta0_gamma_form(S1: SequenceDescriptor, S2: SequenceDescriptor) -> float:
    """zeta(0) from log-Gamma coefficients, including the pairing of S1's integer poles with S2's negative-integer rows."""
    alphas = nominal_ladder(S2, -S1.exponent)
    terms = [S1.gamma_coeff(0.0)[1] * S2.gamma_coeff(0.0)[1]]
    for j in range(1, S2.genus + 1):
        terms.append((-1) ** (j + 1) * j * S1.gamma_coeff(float(-j))[0] * S2.gamma_coeff(float(j))[1])
    for k in range(1, S1.genus + 1):
        terms.append((-1) ** (k + 1) * k * S1.gamma_coeff(float(k))[1] * S2.gamma_coeff(float(-k))[0])
    for a in alphas:
        if _in_integers(a):
            continue
        terms.append(S1.gamma_coeff(-a)[0] * S2.gamma_coeff(a)[0] / (math.gamma(-a) * math.gamma(a)))
    return math.fsum(terms)


def zeta0_gamma_form_printed(S1: SequenceDescriptor, S2: SequenceDescriptor) -> float:
    """The same sum without the S1-pole / S2-negative-integer pairing (kept for comparison)."""
    alphas = nominal_ladder(S2, -S1.exponent)
    terms = [S1.gamma_coeff(0.0)[1] * S2.gamma_coeff(0.0)[1]]
    for j in range(1, S2.genus + 1):
        terms.append((-1) ** (j + 1) * j * S1.gamma_coeff(float(-j))[0] * S2.gamma_coeff(float(j))[1])
    for a in alphas:
        if not _in_integers(a):
            terms.append(S1.gamma_coeff(-a)[0] * S2.gamma_coeff(a)[0] / (math.gamma(-a) * math.gamma(a)))
    return math.fsum(terms)


def _value(S: SequenceDescriptor, point: float) -> float:
    return require(laurent_at(S, point).res0, f"zeta({point:g}) of {S.label}")


def _res1(S: SequenceDescriptor, point: float) -> float:
    return require(laurent_at(S, point).res1, f"residue of zeta at {point:g} for {S.label}")


def zeta0_invariant_form(S1: SequenceDescriptor, S2: SequenceDescriptor) -> float:
    """zeta(0) from values and residues of the two summand zeta functions."""
    alphas = nominal_ladder(S2, -S1.exponent)
    terms = [_value(S1, 0.0) * _value(S2, 0.0)]
    for j in range(1, S2.genus + 1):
        terms.append((-1) ** j / j * _value(S1, -j) * _res1(S2, j))
    for l in range(1, S1.genus + 1):
        terms.append((-1) ** l / l * _value(S2, -l) * _res1(S1, l))
    for a in alphas:
        if _in_integers(a):
            continue
        terms.append(math.gamma(a) * math.gamma(-a) * _res1(S1, -a) * _res1(S2, a))
    return math.fsum(terms)


def sum_zeta_at_zero(S1: SequenceDescriptor, S2: SequenceDescriptor, tol: float = ZERO_TOL) -> float:
    check_hypotheses(S1, S2)
    heat = zeta0_heat_pairing(S1, S2)
    for name, other in (("log-Gamma", zeta0_gamma_form(S1, S2)), ("zeta-invariant", zeta0_invariant_form(S1, S2))):
        if abs(other - heat) > tol * max(1.0, abs(heat)):
            raise CrossCheckError(f"zeta(0): heat pairing and {name} forms disagree", heat, other, tol)
    return heat


# ---------------------------------------------------------------- regularized product


@dataclass(frozen=True)
class _Outer:
    values: Callable[[int, int], tuple[np.ndarray, np.ndarray]]  # index range -> (lam, mult)
    tail: Callable[[float, int], float]  # (beta, N) -> sum_{n >= N} m lam_n^beta, beta < -exponent
    size: float  # number of available terms (inf for rules)


def _outer(S1: SequenceDescriptor) -> _Outer:
    src = S1.source
    if isinstance(src, PowerRule):
        s, p, m = src.scale, src.power, src.multiplicity

        def values(a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
            n = np.arange(a + 1, b + 1, dtype=float)
            return s * n ** p, np.full(b - a, float(m))

        def tail(beta: float, N: int) -> float:
            n0 = N + 1
            return m * (s * float(n0) ** p) ** beta * specfun.power_tail(-p * beta, n0)

        return _Outer(values, tail, math.inf)
    if isinstance(src, ExplicitList):
        vals = np.asarray(src.values, dtype=float)
        mults = np.asarray(src.mults, dtype=float)
        a0, c0, _ = S1.heat_coeffs[0]
        lam_end = float(vals[-1])

        def values(a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
            return vals[a:b], mults[a:b]

        def tail(beta: float, N: int) -> float:
            if N < len(vals):
                head = math.fsum(mults[N:] * vals[N:] ** beta)
            else:
                head = 0.0
            # counting-function estimate beyond the listed spectrum
            return head + c0 / math.gamma(a0) * lam_end ** (a0 + beta) / -(a0 + beta)

        return _Outer(values, tail, float(len(vals)))
    raise ValidationError("the outer summand must be a simple sequence")


def _bracket_parts(S2: SequenceDescriptor, alphas: list[float]):
    logs = [(float(j), S2.gamma_coeff(float(j))[1]) for j in range(0, S2.genus + 1)]
    powers = [(a, S2.gamma_coeff(a)[0]) for a in alphas]
    return logs, powers


def _brackets(lams: np.ndarray, S2: SequenceDescriptor, logs, powers) -> np.ndarray:
    """Rows (bracket, rounding estimate) for each lam1."""
    out = np.empty((len(lams), 2))
    for i, lam in enumerate(lams):
        lg = log_gamma_seq(-float(lam), S2)
        parts = [a1 * lam ** j * math.log(lam) for j, a1 in logs] + [a0 * lam ** a for a, a0 in powers]
        out[i, 0] = lg.log_value - math.fsum(parts)
        out[i, 1] = lg.tail_bound + 4e-16 * (abs(lg.log_value) + math.fsum(abs(t) for t in parts))
    return out


def _threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("SPECTRAL_ZETA_THREADS")
        threads = int(env) if env else 1
    return max(1, int(threads))


def regularized_log_product(
    S1: SequenceDescriptor,
    S2: SequenceDescriptor,
    alphas: list[float] | None = None,
    threads: int | None = None,
    target: float = 1e-15,
    bracket_fn: Callable[[np.ndarray], np.ndarray] | None = None,
) -> ProductValue:
    """sum_{n1} [log Gamma(lam1, S2) - sum_j a_{2,j,1} lam1^j log lam1 - sum_h a_{2,alpha_h,0} lam1^alpha_h].

    The terms beyond the summed block are estimated with the next rows of
    S2's log-Gamma ladder; ``bound`` is the size of the last ladder row used
    in that estimate plus the unexplained part of the last bracket.
    """
    if alphas is None:
        alphas = nominal_ladder(S2, -S1.exponent)
    outer = _outer(S1)
    logs, powers = _bracket_parts(S2, alphas)
    deeper = [r for r in (S2.gamma_coeffs or ()) if r[0] < alphas[-1] - SNAP and r[1] != 0.0]
    if bracket_fn is None:
        bracket_fn = lambda lams: _brackets(lams, S2, logs, powers)  # noqa: E731
    nthreads = _threads(threads)
    blocks: list[float] = []
    noise: list[float] = []
    N = 0
    step = 16
    last_bracket = 0.0
    last_lam = 1.0
    last_noise = 0.0
    while True:
        stop = int(min(N + step, outer.size)) if math.isfinite(outer.size) else N + step
        lams, mults = outer.values(N, stop)
        if len(lams):
            chunks = np.array_split(np.arange(len(lams)), nthreads) if nthreads > 1 else [np.arange(len(lams))]
            if nthreads > 1:
                with ThreadPoolExecutor(max_workers=nthreads) as pool:
                    parts = list(pool.map(lambda idx: bracket_fn(lams[idx]), chunks))
            else:
                parts = [bracket_fn(lams)]
            rows = np.concatenate(parts)
            br = rows[:, 0]
            blocks.append(math.fsum(mults * br))
            noise.append(math.fsum(mults * rows[:, 1]))
            last_bracket, last_lam, last_noise = float(br[-1]), float(lams[-1]), float(rows[-1, 1])
        N = stop
        # model of what is left: the next ladder rows of S2
        model_terms = [a0 * outer.tail(a, N) for a, a0, _ in deeper] if N < outer.size or not math.isfinite(outer.size) else []
        if not math.isfinite(outer.size) or N < outer.size:
            predicted_last = math.fsum(a0 * last_lam ** a for a, a0, _ in deeper)
        else:
            predicted_last = last_bracket
        tail = math.fsum(model_terms)
        unexplained = max(0.0, abs(last_bracket - predicted_last) - last_noise) * max(N, 1)
        last_model = abs(model_terms[-1]) if model_terms else 0.0
        truncation = unexplained + last_model
        rounding = math.fsum(noise)
        total = math.fsum(blocks) + tail
        if N >= outer.size:
            if isinstance(S1.source, ExplicitList):
                truncation = max(truncation, abs(tail))
            return ProductValue(total, N, truncation + rounding, truncation)
        if truncation <= target * abs(total):
            return ProductValue(total, N, truncation + rounding, truncation)
        if N >= MAX_OUTER_TERMS:
            raise PrecisionError(f"regularized product not certified after {N} terms (truncation {truncation:.3g})")
        step = N


# ---------------------------------------------------------------- zeta'(0)


@dataclass(frozen=True)
class DerivativeParts:
    log_ladder: float
    power_ladder: float
    product: float
    product_bound: float

    @property
    def total(self) -> float:
        return self.log_ladder + self.power_ladder + self.product


def sum_zeta_deriv_parts(S1: SequenceDescriptor, S2: SequenceDescriptor, plan: DecompositionPlan) -> DerivativeParts:
    g = specfun.EULER_GAMMA
    t1 = []
    for l in range(0, S2.genus + 1):
        _, al1 = S2.gamma_coeff(float(l))
        if al1 == 0.0:
            continue
        e = laurent_at(S1, float(-l))
        t1.append(-al1 * (require(e.res_minus1, f"zeta'({-l}) of {S1.label}") + (g + specfun.digamma(l + 1.0)) * require(e.res0, f"zeta({-l})")))
    t2 = []
    for a in plan.alpha_ladder:
        if _in_naturals(a):
            continue
        a0, _ = S2.gamma_coeff(a)
        if a0 == 0.0:
            continue
        e = laurent_at(S1, -a)
        t2.append(a0 * (require(e.res0, f"finite part of zeta at {-a:g}") + (g + specfun.digamma(-a)) * require(e.res1, "residue")))
    return DerivativeParts(math.fsum(t1), math.fsum(t2), -plan.A00_at_zero, plan.A00_bound)


def sum_zeta_deriv_invariant_form(S1: SequenceDescriptor, S2: SequenceDescriptor, plan: DecompositionPlan, threads: int | None = None) -> float:
    """zeta'(0) written with values and residues of the summand zeta functions only."""
    g = specfun.EULER_GAMMA
    alphas = list(plan.alpha_ladder)
    z02 = _value(S2, 0.0)
    d01 = require(laurent_at(S1, 0.0).res_minus1, f"zeta'(0) of {S1.label}")
    terms = [z02 * d01]
    for a in alphas:
        if _in_integers(a):
            continue
        e1 = laurent_at(S1, -a)
        terms.append(math.gamma(a) * math.gamma(-a) * _res1(S2, a) * (require(e1.res0, "finite part") + (g + specfun.digamma(-a)) * require(e1.res1, "residue")))
    for l in range(1, S1.genus + 1):
        e1 = laurent_at(S1, float(l))
        terms.append((-1) ** l / l * _value(S2, -l) * (require(e1.res0, "finite part") + (g + specfun.digamma(float(l))) * require(e1.res1, "residue")))
    for l in range(1, S2.genus + 1):
        e1 = laurent_at(S1, float(-l))
        terms.append((-1) ** l / l * _res1(S2, l) * (require(e1.res_minus1, "zeta'") + (g + specfun.digamma(l + 1.0)) * require(e1.res0, "value")))

    # per-lam1 exponent of the product, rebuilt from S2's zeta invariants
    logs: list[tuple[float, float]] = [(0.0, -z02)]
    powers: list[tuple[float, float]] = [(0.0, -require(laurent_at(S2, 0.0).res_minus1, f"zeta'(0) of {S2.label}"))]
    for l in range(1, S2.genus + 1):
        e2 = laurent_at(S2, float(l))
        logs.append((float(l), -((-1) ** l) / l * require(e2.res1, "residue")))
        powers.append((float(l), -((-1) ** l) / l * (require(e2.res0, "finite part") - require(e2.res1, "residue") / l)))
    for a in alphas:
        if not _in_integers(a):
            powers.append((a, math.gamma(a) * math.gamma(-a) * _res1(S2, a)))
        elif as_integer(a) < 0:
            k = -as_integer(a)
            powers.append((a, (-1) ** k / k * _value(S2, -k)))
    prod = regularized_log_product(
        S1, S2, alphas=alphas, threads=threads, bracket_fn=lambda lams: _brackets(lams, S2, logs, powers)
    )
    return math.fsum(terms) + prod.value


def sum_zeta_deriv_at_zero(
    S1: SequenceDescriptor, S2: SequenceDescriptor, tol: float = DERIV_TOL, threads: int | None = None
) -> float:
    plan = plan_decomposition(S1, S2, threads=threads)
    main = sum_zeta_deriv_parts(S1, S2, plan).total
    alt = sum_zeta_deriv_invariant_form(S1, S2, plan, threads=threads)
    if abs(main - alt) > tol * max(1.0, abs(main)):
        raise CrossCheckError("zeta'(0): log-Gamma and zeta-invariant forms disagree", main, alt, tol)
    return main


# ---------------------------------------------------------------- general assembly


def zeta_data_for_plan(S1: SequenceDescriptor, plan: DecompositionPlan) -> dict[float, LaurentExpansion]:
    out: dict[float, LaurentExpansion] = {}
    for ph in plan.phi_laurent:
        if ph.sigma not in out:
            out[ph.sigma] = laurent_at(S1, ph.sigma)
    return out


def _lookup(zetaU: dict[float, LaurentExpansion], sigma: float) -> LaurentExpansion:
    for k, v in zetaU.items():
        if abs(k - sigma) <= SNAP:
            return v
    raise MissingDataError(f"no zeta data of the base sequence at {sigma:g}")


def sdl_assemble(plan: DecompositionPlan, zetaU: dict[float, LaurentExpansion]) -> LaurentExpansion:
    """Laurent data at 0 of zeta(s,S) = (1/Gamma(s)) (gamma A01 - A00 - A01/s + s sum Phi zeta(kappa s + sigma, U) + ...).

    Returns res1 = residue at 0, res0 = finite part, res_minus1 = finite
    part of the derivative.  Unused coefficients of U (multiplied by a
    vanishing Phi coefficient) are allowed to be unknown.
    """
    k = plan.kappa
    g = specfun.EULER_GAMMA
    c = g * g / 2.0 - math.pi ** 2 / 12.0
    res1, res0, der = [], [], []

    def use(coef: float, val: float, what: str) -> float:
        if coef == 0.0:
            return 0.0
        return coef * require(val, what)

    for ph in plan.phi_laurent:
        z = _lookup(zetaU, ph.sigma)
        r1 = use(ph.res2, z.res1, "residue") / k
        res1.append(r1)
        res0.append(use(ph.res2, z.res0, "finite part"))
        res0.append((use(ph.res1, z.res1, "residue") + g * use(ph.res2, z.res1, "residue")) / k)
        der.append(c * r1)
        der.append(g / k * use(ph.res1, z.res1, "residue"))
        der.append(g * use(ph.res2, z.res0, "finite part"))
        der.append(use(ph.res0, z.res1, "residue") / k)
        der.append(k * use(ph.res2, z.res_minus1, "derivative"))
        der.append(use(ph.res1, z.res0, "finite part"))
    res0.append(-plan.A01_at_zero)
    der.append(-require(plan.A00_at_zero, "A00(0)"))
    der.append(-plan.A01_deriv_at_zero)
    return LaurentExpansion(0.0, 0.0, math.fsum(res1), math.fsum(res0), math.fsum(der))
