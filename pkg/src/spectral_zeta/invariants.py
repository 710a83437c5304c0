"""Coefficient calculus: heat coefficients, log-Gamma coefficients and zeta invariants.

Conventions (``a`` is a ladder point alpha):

* heat:     f(t) - 1 ~ sum (c0 + c1 log t) t**-a           as t -> 0+
* log-Gamma: log Gamma(-lam) ~ sum (a0 + a1 log(-lam)) (-lam)**a   as lam -> -inf

Integer ladder points need global information (finite parts of zeta at
positive integers, zeta'(0)); those are passed in as ``zeta_data`` rows
``(point, res1, res0, deriv)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import specfun
from .errors import MissingDataError, ValidationError
from .seqcore import SNAP, PowerRule, SequenceDescriptor, Triple, ZetaPoint, power_rule_laurent

NAN = float("nan")


@dataclass(frozen=True)
class LaurentExpansion:
    """res2/(s-p)^2 + res1/(s-p) + res0 + res_minus1 (s-p) + ...; NaN marks unknown."""

    point: float
    res2: float = 0.0
    res1: float = 0.0
    res0: float = NAN
    res_minus1: float = NAN

    def merged(self, other: "LaurentExpansion") -> "LaurentExpansion":
        """Fill unknown fields from ``other``."""
        pick = lambda a, b: b if math.isnan(a) else a  # noqa: E731
        return LaurentExpansion(
            self.point,
            pick(self.res2, other.res2),
            pick(self.res1, other.res1),
            pick(self.res0, other.res0),
            pick(self.res_minus1, other.res_minus1),
        )


@dataclass(frozen=True)
class ZetaInvariants:
    poles: tuple[LaurentExpansion, ...]
    value_at_zero: float
    derivative_at_zero: float
    values_at_negative_integers: dict[int, float] = field(default_factory=dict)
    regular_points: tuple[LaurentExpansion, ...] = ()

    def pole_at(self, point: float) -> LaurentExpansion | None:
        for p in self.poles:
            if abs(p.point - point) <= SNAP:
                return p
        return None


def as_integer(x: float) -> int | None:
    return specfun.as_integer(x, SNAP)


def _zeta_row(zeta_data: Iterable[ZetaPoint], point: float) -> ZetaPoint | None:
    for row in zeta_data:
        if abs(row[0] - point) <= SNAP:
            return row
    return None


def _sorted(rows: dict[float, Triple]) -> tuple[Triple, ...]:
    return tuple(rows[k] for k in sorted(rows, reverse=True))


def heat_to_gamma(heat: Sequence[Triple], genus: int, zeta_data: Sequence[ZetaPoint] = ()) -> tuple[Triple, ...]:
    """Log-Gamma coefficients from heat coefficients.

    The returned ladder always contains 0 and 1..genus, where the
    coefficients depend on zeta'(0) and on the finite parts of zeta at the
    positive integers; those are looked up in ``zeta_data``.
    """
    rows: dict[float, Triple] = {}
    heat_at = {}
    for a, c0, c1 in heat:
        k = as_integer(a)
        key = float(k) if k is not None else a
        heat_at[key] = (c0, c1)
    for k in range(0, genus + 1):
        heat_at.setdefault(float(k), (0.0, 0.0))
    for a, (c0, c1) in heat_at.items():
        k = as_integer(a)
        if k is None or k < 0:
            g = math.gamma(-a)
            psi = specfun.digamma(-a)
            rows[a] = (a, g * c0 + psi * g * c1, -g * c1)
            continue
        if c1 != 0.0:
            raise ValidationError(f"log t term at integer ladder point {k} is outside the totally regular class")
        row = _zeta_row(zeta_data, float(k))
        if k == 0:
            if row is None or math.isnan(row[3]):
                raise MissingDataError("log-Gamma coefficient a_{0,0} needs zeta'(0)")
            if row[1] != 0.0:
                raise ValidationError("zeta has a pole at 0; sequence is not regular there")
            rows[0.0] = (0.0, -row[3], -c0)
        else:
            if k > genus:
                raise ValidationError(f"integer ladder point {k} exceeds the genus {genus}")
            if row is None or math.isnan(row[2]):
                raise MissingDataError(f"log-Gamma coefficient at {k} needs the finite part of zeta at {k}")
            fk = math.factorial(k)
            rows[float(k)] = (float(k), (-1) ** k / k * (c0 / fk - row[2]), (-1) ** (k + 1) / fk * c0)
    return _sorted(rows)


def gamma_to_heat(gamma: Sequence[Triple]) -> tuple[Triple, ...]:
    rows: dict[float, Triple] = {}
    for a, a0, a1 in gamma:
        k = as_integer(a)
        if k is not None and k >= 0:
            c0 = (-1) ** (k + 1) * math.factorial(k) * a1
            if c0 != 0.0 or k == 0:
                rows[float(k)] = (float(k), c0, 0.0)
            continue
        g = math.gamma(-a)
        c0 = (a0 + specfun.digamma(-a) * a1) / g
        c1 = -a1 / g
        rows[a] = (a, c0, c1)
    return _sorted(rows)


def zeta_invariants_from_gamma(gamma: Sequence[Triple], genus: int, order: float = -math.inf) -> ZetaInvariants:
    """Residues and special values of zeta from log-Gamma coefficients."""
    if order > 0:
        raise ValidationError("zeta(0) is only determined when the expansion is complete down to 0")
    poles: list[LaurentExpansion] = []
    regular: list[LaurentExpansion] = []
    neg: dict[int, float] = {}
    z0 = d0 = 0.0
    for a, a0, a1 in gamma:
        k = as_integer(a)
        if k is None:
            if a1 != 0.0:
                raise ValidationError(f"log term at non-integer point {a:g}: double pole, not totally regular")
            r1 = a0 / (math.gamma(a) * math.gamma(-a))
            if r1 != 0.0:
                poles.append(LaurentExpansion(a, 0.0, r1))
        elif k == 0:
            z0, d0 = -a1, -a0
        elif k > 0:
            r1 = (-1) ** (k + 1) * k * a1
            r0 = (-1) ** (k + 1) * (k * a0 + a1)
            entry = LaurentExpansion(float(k), 0.0, r1, r0)
            (poles if r1 != 0.0 else regular).append(entry)
        else:
            if a1 != 0.0:
                raise ValidationError(f"log term at negative integer {k}: not totally regular")
            neg[-k] = (-1) ** (-k) * (-k) * a0
    # negative integers above the completeness depth that carry no row
    kmax = int(math.floor(-order)) if math.isfinite(order) else 20
    for j in range(1, kmax + 1):
        if -j > order + SNAP:
            neg.setdefault(j, 0.0)
    poles.sort(key=lambda p: -p.point)
    return ZetaInvariants(tuple(poles), z0, d0, dict(sorted(neg.items())), tuple(regular))


def zeta_poles_from_heat(heat: Sequence[Triple], totally_regular: bool = True) -> list[LaurentExpansion]:
    """Local Laurent data of zeta read off the heat coefficients.

    Non-integer and positive-integer ladder points give poles whose residues
    are local; the finite parts there are global and come back as NaN.  At 0
    and the negative integers the values themselves are local.
    """
    out: list[LaurentExpansion] = []
    for a, c0, c1 in heat:
        k = as_integer(a)
        if k is None or k > 0:
            if totally_regular and k is None and c1 != 0.0:
                raise ValidationError(f"c1 != 0 at non-integer {a:g} gives a double pole")
            g = math.gamma(a)
            out.append(LaurentExpansion(a, -c1 / g, (c0 + c1 * specfun.digamma(a)) / g))
        elif k == 0:
            out.append(LaurentExpansion(0.0, 0.0, -c1, c0 - specfun.EULER_GAMMA * c1))
        else:
            j = -k
            f = (-1) ** j * math.factorial(j)
            out.append(LaurentExpansion(float(k), 0.0, -f * c1, f * (c0 + specfun.digamma(j + 1.0) * c1)))
    return out


def laplacian_dictionary(
    e: Sequence[float], m: int, dim_ker: int, zeta_data: Sequence[ZetaPoint] = ()
) -> tuple[tuple[Triple, ...], ZetaInvariants]:
    """Heat-trace coefficients Tr e^{-t Delta} ~ sum_h e_h t^{(h-m)/2} to gamma coefficients and invariants.

    ``zeta_data`` may carry zeta'(0) and finite parts at positive integers;
    without them the affected log-Gamma rows are left out and zeta'(0) is NaN.
    """
    if m < 1:
        raise ValidationError("manifold dimension must be at least 1")
    if dim_ker < 0:
        raise ValidationError("kernel dimension must be non-negative")
    if len(e) == 0:
        raise ValidationError("need at least one heat-trace coefficient")
    heat = []
    for h, eh in enumerate(e):
        c = eh - dim_ker if h == m else eh
        heat.append(((m - h) / 2.0, float(c), 0.0))
    if len(e) <= m:
        heat.append((0.0, float(-dim_ker), 0.0))
    heat = [r for r in heat if r[1] != 0.0 or r[0] == 0.0]
    exponent = m / 2.0
    genus = int(math.floor(exponent + SNAP))
    try:
        gam = heat_to_gamma(heat, genus, zeta_data)
    except MissingDataError:
        partial = [r for r in heat if as_integer(r[0]) is None or as_integer(r[0]) < 0]
        gam = heat_to_gamma(partial, -1, ())
        gam = tuple(r for r in gam if not (as_integer(r[0]) is not None and as_integer(r[0]) >= 0))
        c00 = next((r[1] for r in heat if as_integer(r[0]) == 0), 0.0)
        zrow = _zeta_row(zeta_data, 0.0)
        a00 = -zrow[3] if zrow is not None else NAN
        gam = tuple(sorted(gam + ((0.0, a00, -c00),), key=lambda r: -r[0]))
    poles = []
    for a, c0, _ in heat:
        k = as_integer(a)
        if (k is None or k > 0) and c0 != 0.0:
            poles.append(LaurentExpansion(a, 0.0, c0 / math.gamma(a)))
    neg = {}
    for k in range(1, (len(e) - 1 - m) // 2 + 1):
        neg[k] = (-1) ** k * math.factorial(k) * e[m + 2 * k]
    zrow = _zeta_row(zeta_data, 0.0)
    inv = ZetaInvariants(
        tuple(poles),
        (e[m] if len(e) > m else 0.0) - dim_ker,
        zrow[3] if zrow is not None else NAN,
        neg,
    )
    return tuple(gam), inv


def zeta_invariants(S: SequenceDescriptor) -> ZetaInvariants:
    if S.gamma_coeffs is None:
        raise MissingDataError(f"no log-Gamma coefficients for {S.label}")
    return zeta_invariants_from_gamma(S.gamma_coeffs, S.genus, S.order)


def laurent_at(S: SequenceDescriptor, point: float) -> LaurentExpansion:
    """Best available Laurent data of zeta(s,S) at ``point``.

    Local data from the heat ladder first, then stored zeta rows, then the
    closed form for power rules.  Fields that stay unknown are NaN.
    """
    out = LaurentExpansion(point, NAN, NAN, NAN, NAN)
    if S.heat_coeffs is not None:
        k = as_integer(point)
        try:
            c0, c1 = S.heat_coeff(point)
        except MissingDataError:
            c0 = c1 = NAN
        if not math.isnan(c0):
            local = zeta_poles_from_heat([(point, c0, c1)], totally_regular=False)[0]
            if k is not None and k <= 0:
                out = out.merged(LaurentExpansion(point, local.res2, local.res1, local.res0, NAN))
            else:
                out = out.merged(LaurentExpansion(point, local.res2, local.res1, NAN, NAN))
    row = S.zeta_point(point)
    if row is not None:
        out = out.merged(LaurentExpansion(point, 0.0, row[1], row[2], row[3]))
    if isinstance(S.source, PowerRule):
        r1, r0, d = power_rule_laurent(S.source, point)
        out = out.merged(LaurentExpansion(point, 0.0, r1, r0, d))
    return out


def require(value: float, what: str) -> float:
    if math.isnan(value):
        raise MissingDataError(f"{what} is not available")
    return value
