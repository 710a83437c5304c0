"""Sequences of spectral type as immutable data.

A descriptor bundles an eigenvalue source (a power rule ``scale * n**power``
with a multiplicity, an explicit finite list, or the sum of two
descriptors) with the analytic data that the coefficient calculus works on:
exponent of convergence, genus, sector, and the small-t heat coefficients
``c[alpha] = (c0, c1)`` of ``f(t) - 1 ~ sum (c0 + c1 log t) t**-alpha`` and
the large-lambda log-Gamma coefficients ``a[alpha] = (a0, a1)`` of
``log Gamma(-lam) ~ sum (a0 + a1 log(-lam)) (-lam)**alpha``.

``order`` records how far down the heat ladder the listed coefficients are
complete: every ladder point above ``order`` that is not listed has zero
coefficients, anything at or below it is unknown.  ``-inf`` means the
remainder is smaller than every power of t.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np
from scipy.special import gammaincc

from . import specfun
from .errors import MissingDataError, PrecisionError, ValidationError

SNAP = 1e-9
Triple = tuple[float, float, float]
ZetaPoint = tuple[float, float, float, float]  # (point, res1, res0, deriv)


@dataclass(frozen=True)
class Sector:
    theta: float = math.pi / 2
    c: float = 0.5

    def __post_init__(self) -> None:
        if not (0.0 < self.theta < math.pi):
            raise ValidationError(f"sector angle must lie in (0, pi), got {self.theta}")
        if not self.c > 0.0:
            raise ValidationError(f"sector vertex must be positive, got {self.c}")


@dataclass(frozen=True)
class PowerRule:
    """lam_n = scale * n**power for n >= 1, each with the given multiplicity."""

    scale: float
    power: float
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if not self.scale > 0 or not self.power > 0:
            raise ValidationError("power rule needs scale > 0 and power > 0")
        if self.multiplicity < 1:
            raise ValidationError("multiplicity must be a positive integer")

    def value(self, n: int) -> float:
        return self.scale * float(n) ** self.power


@dataclass(frozen=True)
class ExplicitList:
    values: tuple[float, ...]
    mults: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise ValidationError("an explicit spectrum needs at least one eigenvalue")
        if len(self.values) != len(self.mults):
            raise ValidationError("eigenvalue and multiplicity lists differ in length")
        for v, m in zip(self.values, self.mults):
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"eigenvalues must be finite and positive, got {v}")
            if int(m) != m or m < 1:
                raise ValidationError(f"multiplicities must be positive integers, got {m}")
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValidationError("explicit eigenvalues must be listed in non-decreasing order")


@dataclass(frozen=True)
class SumSource:
    first: "SequenceDescriptor"
    second: "SequenceDescriptor"


Source = PowerRule | ExplicitList | SumSource


def _find(ladder: Sequence[Triple] | None, alpha: float) -> Triple | None:
    if ladder is None:
        return None
    for row in ladder:
        if abs(row[0] - alpha) <= SNAP:
            return row
    return None


@dataclass(frozen=True)
class SequenceDescriptor:
    source: Source
    exponent: float
    genus: int
    sector: Sector = field(default_factory=Sector)
    heat_coeffs: tuple[Triple, ...] | None = None
    gamma_coeffs: tuple[Triple, ...] | None = None
    order: float = -math.inf
    zeta_data: tuple[ZetaPoint, ...] = ()
    name: str = ""
    truncation_note: str = ""

    def __post_init__(self) -> None:
        if self.exponent < 0:
            raise ValidationError("exponent must be non-negative")
        if self.genus != math.floor(self.exponent + SNAP):
            raise ValidationError(f"genus {self.genus} inconsistent with exponent {self.exponent}")
        for ladder in (self.heat_coeffs, self.gamma_coeffs):
            if ladder is None:
                continue
            alphas = [r[0] for r in ladder]
            if any(b >= a for a, b in zip(alphas, alphas[1:])):
                raise ValidationError("coefficient ladder must be strictly decreasing")
            if alphas and alphas[0] > self.exponent + SNAP:
                raise ValidationError("leading ladder point exceeds the exponent")
            if alphas and alphas[0] >= self.genus + 1:
                raise ValidationError("leading ladder point must be below genus + 1")

    @property
    def is_sum(self) -> bool:
        return isinstance(self.source, SumSource)

    @property
    def first_eigenvalue(self) -> float:
        src = self.source
        if isinstance(src, PowerRule):
            return src.scale
        if isinstance(src, ExplicitList):
            return src.values[0]
        return src.first.first_eigenvalue + src.second.first_eigenvalue

    def _coeff(self, ladder: tuple[Triple, ...] | None, alpha: float, what: str) -> tuple[float, float]:
        if ladder is None:
            raise MissingDataError(f"{what} coefficients of {self.label} are not available")
        row = _find(ladder, alpha)
        if row is not None:
            return row[1], row[2]
        if alpha > self.order + SNAP:
            return 0.0, 0.0
        raise MissingDataError(f"{what} coefficient at alpha={alpha:g} of {self.label} lies below the listed depth")

    def heat_coeff(self, alpha: float) -> tuple[float, float]:
        return self._coeff(self.heat_coeffs, alpha, "heat")

    def gamma_coeff(self, alpha: float) -> tuple[float, float]:
        return self._coeff(self.gamma_coeffs, alpha, "log-Gamma")

    def zeta_point(self, point: float) -> ZetaPoint | None:
        for row in self.zeta_data:
            if abs(row[0] - point) <= SNAP:
                return row
        return None

    @property
    def label(self) -> str:
        return self.name or type(self.source).__name__

    def ladder(self) -> list[float]:
        return [r[0] for r in (self.heat_coeffs or ())]


# ---------------------------------------------------------------- power rules


def power_rule_laurent(rule: PowerRule, z0: float) -> tuple[float, float, float]:
    """(res1, res0, deriv) of m s^-z zeta_R(p z) at z0.

    At the pole p z0 = 1 these are residue, finite part and the linear
    coefficient; elsewhere res1 = 0, res0 is the value and deriv the slope.
    """
    m, s, p = rule.multiplicity, rule.scale, rule.power
    ls = math.log(s)
    pre = m * s ** (-z0)
    if abs(p * z0 - 1.0) <= SNAP:
        g = specfun.EULER_GAMMA
        res1 = pre / p
        res0 = pre * (g - ls / p)
        lin = pre * (-specfun.STIELTJES_1 * p - g * ls + ls * ls / (2.0 * p))
        return res1, res0, lin
    z = specfun.riemann_zeta(p * z0).value
    dz = specfun.riemann_zeta(p * z0, 1).value
    return 0.0, pre * z, pre * (p * dz - ls * z)


def _power_heat(rule: PowerRule, max_depth: int = 21) -> tuple[tuple[Triple, ...], float]:
    m, s, p = rule.multiplicity, rule.scale, rule.power
    lead = 1.0 / p
    rows: list[Triple] = [(lead, m * math.gamma(lead) / (p * s ** lead), 0.0)]
    even = specfun.as_integer(p, 0.0) is not None and int(p) % 2 == 0
    depth = max_depth
    while depth > 0 and p * depth > 150.0:
        depth -= 1
    for k in range(0, depth + 1):
        z = specfun.riemann_zeta(-p * k).value
        c0 = m * (-s) ** k * z / math.factorial(k)
        rows.append((float(-k), c0, 0.0))
    rows = [r for r in rows if r[1] != 0.0 or r[2] != 0.0 or r[0] == 0.0]
    # even integer powers: zeta_R vanishes at every -p k, so the
    # expansion terminates and the remainder is exponentially small
    order = -math.inf if even else -float(depth + 1)
    return tuple(rows), order


def power_descriptor(scale: float, power: float, multiplicity: int = 1, name: str = "") -> SequenceDescriptor:
    from .invariants import heat_to_gamma

    rule = PowerRule(float(scale), float(power), int(multiplicity))
    exponent = 1.0 / rule.power
    genus = int(math.floor(exponent + SNAP))
    heat, order = _power_heat(rule)
    zeta_pts: list[ZetaPoint] = []
    for k in range(0, genus + 1):
        zeta_pts.append((float(k), *power_rule_laurent(rule, float(k))))
    gam = heat_to_gamma(heat, genus, tuple(zeta_pts))
    return SequenceDescriptor(
        source=rule,
        exponent=exponent,
        genus=genus,
        sector=Sector(math.pi / 2, 0.5 * rule.scale),
        heat_coeffs=heat,
        gamma_coeffs=gam,
        order=order,
        zeta_data=tuple(zeta_pts),
        name=name or f"{rule.scale:g}*n^{rule.power:g}" + (f" x{rule.multiplicity}" if rule.multiplicity > 1 else ""),
    )


def builtin(name: str, **params) -> SequenceDescriptor:
    """Built-in sequences: integers, squares, power, circle, from_file."""
    if name == "integers":
        return power_descriptor(params.get("scale", 1.0), 1.0, 1, name="integers")
    if name == "squares":
        return power_descriptor(params.get("scale", 1.0), 2.0, 1, name="squares")
    if name == "power":
        return power_descriptor(params["scale"], params["power"], params.get("multiplicity", 1))
    if name == "circle":
        # positive Laplace spectrum of a circle of radius r: (n/r)^2 twice
        r = float(params.get("radius", 1.0))
        if not r > 0:
            raise ValidationError("circle radius must be positive")
        return power_descriptor(1.0 / (r * r), 2.0, 2, name=f"circle(r={r:g})")
    if name == "from_file":
        return load_descriptor(params["path"])
    raise ValidationError(f"unknown built-in sequence {name!r}")


# ---------------------------------------------------------------- combinators


def _scale_laurent(row: ZetaPoint, y: float) -> ZetaPoint:
    z0, r1, r0, d = row
    ly = math.log(y)
    f = y ** (-z0)
    return (z0, f * r1, f * (r0 - ly * r1), f * (d - ly * r0 + 0.5 * ly * ly * r1))


def scale(S: SequenceDescriptor, y: float) -> SequenceDescriptor:
    """The sequence y*S."""
    if not y > 0:
        raise ValidationError("scale factor must be positive")
    y = float(y)
    if y == 1.0:
        return S
    ly = math.log(y)
    src = S.source
    if isinstance(src, PowerRule):
        new_src: Source = PowerRule(src.scale * y, src.power, src.multiplicity)
    elif isinstance(src, ExplicitList):
        new_src = ExplicitList(tuple(v * y for v in src.values), src.mults)
    else:
        new_src = SumSource(scale(src.first, y), scale(src.second, y))
    heat = None
    if S.heat_coeffs is not None:
        heat = tuple((a, y ** (-a) * (c0 + c1 * ly), y ** (-a) * c1) for a, c0, c1 in S.heat_coeffs)
    gam = None
    if S.gamma_coeffs is not None:
        gam = tuple((a, y ** (-a) * (a0 - a1 * ly), y ** (-a) * a1) for a, a0, a1 in S.gamma_coeffs)
    return replace(
        S,
        source=new_src,
        sector=Sector(S.sector.theta, S.sector.c * y),
        heat_coeffs=heat,
        gamma_coeffs=gam,
        zeta_data=tuple(_scale_laurent(r, y) for r in S.zeta_data),
        name=f"{y:g}*({S.label})",
    )


def sum_descriptor(S1: SequenceDescriptor, S2: SequenceDescriptor) -> SequenceDescriptor:
    """The double sequence lam_{1,n} + lam_{2,m}; expansion data come from sumzeta."""
    e = S1.exponent + S2.exponent
    return SequenceDescriptor(
        source=SumSource(S1, S2),
        exponent=e,
        genus=int(math.floor(e + SNAP)),
        sector=Sector(max(S1.sector.theta, S2.sector.theta), min(S1.sector.c, S2.sector.c)),
        heat_coeffs=None,
        gamma_coeffs=None,
        order=math.inf,
        name=f"({S1.label})+({S2.label})",
    )


# ---------------------------------------------------------------- enumeration


class _Lazy:
    """Index access into a (possibly infinite) value-sorted iterator."""

    def __init__(self, it: Iterator[tuple[float, int]]):
        self._it = it
        self.items: list[tuple[float, int]] = []

    def get(self, i: int) -> tuple[float, int] | None:
        while len(self.items) <= i:
            nxt = next(self._it, None)
            if nxt is None:
                return None
            self.items.append(nxt)
        return self.items[i]


def _iter_raw(S: SequenceDescriptor) -> Iterator[tuple[float, int]]:
    src = S.source
    if isinstance(src, PowerRule):
        n = 1
        while True:
            yield src.value(n), src.multiplicity
            n += 1
    elif isinstance(src, ExplicitList):
        yield from zip(src.values, src.mults)
    else:
        a, b = _Lazy(iter_eigenvalues(src.first)), _Lazy(iter_eigenvalues(src.second))
        first_a, first_b = a.get(0), b.get(0)
        if first_a is None or first_b is None:
            return
        heap = [(first_a[0] + first_b[0], 0, 0)]
        while heap:
            v, i, j = heapq.heappop(heap)
            yield v, a.get(i)[1] * b.get(j)[1]
            if j == 0 and a.get(i + 1) is not None:
                heapq.heappush(heap, (a.get(i + 1)[0] + b.get(0)[0], i + 1, 0))
            if b.get(j + 1) is not None:
                heapq.heappush(heap, (a.get(i)[0] + b.get(j + 1)[0], i, j + 1))


def iter_eigenvalues(S: SequenceDescriptor) -> Iterator[tuple[float, int]]:
    """Distinct eigenvalues in increasing order with their multiplicities."""
    pending: tuple[float, int] | None = None
    for v, m in _iter_raw(S):
        if pending is not None and v == pending[0]:
            pending = (v, pending[1] + m)
            continue
        if pending is not None:
            yield pending
        pending = (v, m)
    if pending is not None:
        yield pending


def eigenvalue_arrays(S: SequenceDescriptor, lam_max: float) -> tuple[np.ndarray, np.ndarray]:
    """All eigenvalues <= lam_max (unsorted, unmerged) and their multiplicities."""
    src = S.source
    if isinstance(src, PowerRule):
        nmax = int(math.floor((lam_max / src.scale) ** (1.0 / src.power) * (1 + 1e-12))) + 1
        n = np.arange(1, nmax + 1, dtype=float)
        v = src.scale * n ** src.power
        keep = v <= lam_max
        return v[keep], np.full(int(keep.sum()), src.multiplicity, dtype=np.int64)
    if isinstance(src, ExplicitList):
        v = np.asarray(src.values, dtype=float)
        keep = v <= lam_max
        return v[keep], np.asarray(src.mults, dtype=np.int64)[keep]
    v1, m1 = eigenvalue_arrays(src.first, lam_max - src.second.first_eigenvalue)
    v2, m2 = eigenvalue_arrays(src.second, lam_max - src.first.first_eigenvalue)
    vals, mults = [], []
    for a, ma in zip(v1, m1):
        keep = v2 <= lam_max - a
        vals.append(a + v2[keep])
        mults.append(ma * m2[keep])
    if not vals:
        return np.empty(0), np.empty(0, dtype=np.int64)
    return np.concatenate(vals), np.concatenate(mults)


def eigenvalues_upto(S: SequenceDescriptor, lam_max: float) -> list[tuple[float, int]]:
    v, m = eigenvalue_arrays(S, lam_max)
    order = np.argsort(v, kind="stable")
    out: list[tuple[float, int]] = []
    for val, mult in zip(v[order], m[order]):
        if out and out[-1][0] == val:
            out[-1] = (out[-1][0], out[-1][1] + int(mult))
        else:
            out.append((float(val), int(mult)))
    return out


# ---------------------------------------------------------------- heat function


def _power_heat_sum(rule: PowerRule, t: float) -> float:
    m, s, p = rule.multiplicity, rule.scale, rule.power
    if p == 1.0:
        return m * math.exp(-t * s) / -math.expm1(-t * s)
    # sum_{n<N} plus the integral bound for the rest
    N = int(math.ceil((45.0 / (t * s)) ** (1.0 / p))) + 1
    while True:
        n = np.arange(1, N, dtype=float)
        head = math.fsum(np.exp(-t * s * n ** p))
        x = t * s * float(N) ** p
        tail = math.exp(-x) + (t * s) ** (-1.0 / p) / p * math.gamma(1.0 / p) * gammaincc(1.0 / p, x)
        if tail <= 1e-18 * max(1.0, head):
            return m * head
        N *= 2


def _list_tail_estimate(S: SequenceDescriptor, t: float) -> float:
    # Weyl-type tail beyond the last listed eigenvalue, from the leading heat term
    src = S.source
    assert isinstance(src, ExplicitList)
    if not S.heat_coeffs:
        return math.inf
    a0, c0, _ = S.heat_coeffs[0]
    if a0 <= 0:
        return math.inf
    lam = src.values[-1]
    return abs(c0) * t ** (-a0) * float(gammaincc(a0, t * lam))


def heat_function(S: SequenceDescriptor, t: float, tol: float = 1e-12) -> float:
    """f(t,S) = 1 + sum_n e^{-t lam_n}."""
    if not t > 0:
        raise ValidationError("heat function needs t > 0")
    t = float(t)
    src = S.source
    if isinstance(src, PowerRule):
        return 1.0 + _power_heat_sum(src, t)
    if isinstance(src, ExplicitList):
        v = np.asarray(src.values)
        head = math.fsum(np.asarray(src.mults) * np.exp(-t * v))
        bound = _list_tail_estimate(S, t)
        if bound > tol:
            raise PrecisionError(
                f"listed spectrum too short for t={t:g}: estimated tail {bound:.3g} exceeds {tol:.3g}"
            )
        return 1.0 + head
    # enumerate pairs below lam_max; e^{-t(l1+l2)} <= e^{-t lam_max/2} e^{-t l1/2} e^{-t l2/2} beyond it
    f1 = heat_function(src.first, 0.5 * t, tol) - 1.0
    f2 = heat_function(src.second, 0.5 * t, tol) - 1.0
    lam_max = 2.0 * (45.0 + math.log(max(1.0, f1 * f2))) / t
    v, m = eigenvalue_arrays(S, lam_max)
    head = math.fsum(m * np.exp(-t * v))
    bound = math.exp(-0.5 * t * lam_max) * f1 * f2
    if bound > max(tol, 1e-18 * head):
        raise PrecisionError(f"sum heat tail bound {bound:.3g} not certified")
    return 1.0 + head


# ---------------------------------------------------------------- file format


def _fmt(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return "null"
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_fmt(v)}" for k, v in x.items()) + "}"
    return "[" + ", ".join(_fmt(v) for v in x) + "]"


def descriptor_to_dict(S: SequenceDescriptor) -> dict:
    src = S.source
    d: dict = {}
    if isinstance(src, PowerRule):
        d["kind"] = "rule"
        d["rule"] = {"family": "power", "scale": src.scale, "power": src.power, "multiplicity": src.multiplicity}
    elif isinstance(src, ExplicitList):
        d["kind"] = "list"
        d["eigenvalues"] = [[v, int(m)] for v, m in zip(src.values, src.mults)]
    else:
        raise ValidationError("sum descriptors have no file representation; store the summands")
    d["name"] = S.name
    d["exponent"] = S.exponent
    d["genus"] = S.genus
    d["sector"] = {"theta": S.sector.theta, "c": S.sector.c}
    d["heat_coeffs"] = [list(r) for r in S.heat_coeffs] if S.heat_coeffs is not None else None
    d["gamma_coeffs"] = [list(r) for r in S.gamma_coeffs] if S.gamma_coeffs is not None else None
    d["order"] = None if S.order == -math.inf else S.order
    d["zeta_data"] = [list(r) for r in S.zeta_data]
    return d


def dumps(S: SequenceDescriptor) -> str:
    return _fmt(descriptor_to_dict(S)) + "\n"


def dump_descriptor(S: SequenceDescriptor, path: str | Path) -> None:
    Path(path).write_text(dumps(S), encoding="utf-8")


def _triples(rows, what: str) -> tuple[Triple, ...]:
    try:
        out = tuple((float(a), float(b), float(c)) for a, b, c in rows)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{what} must be a list of [alpha, x0, x1] triples") from exc
    return out


def descriptor_from_dict(d: dict) -> SequenceDescriptor:
    from .invariants import heat_to_gamma

    if not isinstance(d, dict):
        raise ValidationError("descriptor must be a JSON object")
    kind = d.get("kind")
    if kind == "rule":
        rule = d.get("rule") or {}
        if rule.get("family", "power") != "power":
            raise ValidationError(f"unsupported rule family {rule.get('family')!r}")
        try:
            base = power_descriptor(float(rule["scale"]), float(rule["power"]), int(rule.get("multiplicity", 1)))
        except KeyError as exc:
            raise ValidationError(f"rule is missing field {exc}") from exc
        overrides = {}
        if d.get("name"):
            overrides["name"] = d["name"]
        if d.get("heat_coeffs") is not None:
            overrides["heat_coeffs"] = _triples(d["heat_coeffs"], "heat_coeffs")
        if d.get("gamma_coeffs") is not None:
            overrides["gamma_coeffs"] = _triples(d["gamma_coeffs"], "gamma_coeffs")
        if "sector" in d:
            overrides["sector"] = Sector(float(d["sector"]["theta"]), float(d["sector"]["c"]))
        if "order" in d:
            overrides["order"] = -math.inf if d["order"] is None else float(d["order"])
        if d.get("zeta_data"):
            overrides["zeta_data"] = tuple(tuple(float(x) for x in r) for r in d["zeta_data"])
        return replace(base, **overrides)
    if kind != "list":
        raise ValidationError(f"descriptor kind must be 'list' or 'rule', got {kind!r}")
    pairs = d.get("eigenvalues")
    if not pairs:
        raise ValidationError("explicit spectrum is empty")
    try:
        values = tuple(float(p[0]) for p in pairs)
        mults = tuple(int(p[1]) if len(p) > 1 else 1 for p in pairs)
    except (TypeError, ValueError, IndexError) as exc:
        raise ValidationError("eigenvalues must be [value, multiplicity] pairs") from exc
    if d.get("heat_coeffs") is None:
        raise ValidationError("file spectra must supply heat_coeffs explicitly")
    for key in ("exponent", "genus"):
        if key not in d:
            raise ValidationError(f"descriptor is missing {key!r}")
    heat = _triples(d["heat_coeffs"], "heat_coeffs")
    sector = d.get("sector") or {}
    zeta_pts = tuple(tuple(float(x) for x in r) for r in (d.get("zeta_data") or ()))
    genus = int(d["genus"])
    gam = None
    if d.get("gamma_coeffs") is not None:
        gam = _triples(d["gamma_coeffs"], "gamma_coeffs")
    else:
        try:
            gam = heat_to_gamma(heat, genus, zeta_pts)
        except MissingDataError:
            gam = None
    order = d.get("order")
    return SequenceDescriptor(
        source=ExplicitList(values, mults),
        exponent=float(d["exponent"]),
        genus=genus,
        sector=Sector(float(sector.get("theta", math.pi / 2)), float(sector.get("c", 0.5 * values[0]))),
        heat_coeffs=heat,
        gamma_coeffs=gam,
        order=-math.inf if order is None else float(order),
        zeta_data=zeta_pts,
        name=str(d.get("name", "")),
        truncation_note=f"{len(values)} listed eigenvalues up to {values[-1]:.17g}; tail estimated from the leading heat coefficient",
    )


def loads(text: str) -> SequenceDescriptor:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed descriptor JSON: {exc}") from exc
    return descriptor_from_dict(d)


def load_descriptor(path: str | Path) -> SequenceDescriptor:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read descriptor {path}: {exc}") from exc
    return loads(text)
