"""Command line front end.

    spectral-zeta invariants <seq>
    spectral-zeta sum <seq1> <seq2> [--y R] [--oracle]
    spectral-zeta eta --y R [--seq <seq>]
    spectral-zeta kronecker --y R
    spectral-zeta det-product <m1> <m2>
    spectral-zeta det-circle --y R <m>
    spectral-zeta verify-appendix

A sequence argument is a descriptor JSON file or one of the built-in names
integers, squares, circle.  Exit status: 0 when every cross-check passes,
2 for invalid input, 3 for a failed cross-check, 4 for a precision failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import applications, oracle, specfun
from .errors import SpectralZetaError, ValidationError
from .invariants import laurent_at, zeta_invariants
from .seqcore import SequenceDescriptor, builtin, load_descriptor, scale
from .sumzeta import (
    plan_decomposition,
    sdl_assemble,
    sum_zeta_at_zero,
    sum_zeta_deriv_at_zero,
    zeta0_gamma_form,
    zeta0_invariant_form,
    zeta_data_for_plan,
)

BUILTINS = ("integers", "squares", "circle")

DEFAULT_TOL = {
    "invariants": 1e-7,
    "sum": 1e-5,
    "eta": 1e-10,
    "kronecker": 1e-9,
    "det-product": 1e-8,
    "det-circle": 1e-8,
    "verify-appendix": 1e-6,
}


@dataclass
class RunReport:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    results: list[tuple[str, float, str, float]] = field(default_factory=list)
    cross_checks: list[tuple[str, float, float, float, float, bool]] = field(default_factory=list)

    def add(self, name: str, value: float, method: str, bound: float = math.nan) -> None:
        self.results.append((name, float(value), method, float(bound)))

    def check(self, name: str, lhs: float, rhs: float, tol: float) -> None:
        res = abs(lhs - rhs)
        self.cross_checks.append((name, float(lhs), float(rhs), res, tol, bool(res <= tol)))

    @property
    def ok(self) -> bool:
        return all(c[5] for c in self.cross_checks)


def _num(x: float) -> str:
    return format(x, ".17g")


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def render_text(rep: RunReport) -> str:
    out = [f"command: {rep.command}"]
    for k, v in rep.inputs.items():
        out.append(f"  {k} = {v}")
    if rep.results:
        rows = [["name", "value", "method", "error_bound"]]
        rows += [[n, _num(v), m, "" if math.isnan(b) else f"{b:.3g}"] for n, v, m, b in rep.results]
        out += ["", _table(rows)]
    if rep.cross_checks:
        rows = [["check", "lhs", "rhs", "residual", "tolerance", "status"]]
        rows += [[n, _num(a), _num(b), f"{r:.3g}", f"{t:.3g}", "pass" if ok else "FAIL"] for n, a, b, r, t, ok in rep.cross_checks]
        out += ["", _table(rows)]
    return "\n".join(out) + "\n"


def render_csv(rep: RunReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["kind", "name", "value", "method_or_rhs", "error_bound_or_residual", "tolerance", "status"])
    for n, v, m, b in rep.results:
        w.writerow(["result", n, _num(v), m, "" if math.isnan(b) else _num(b), "", ""])
    for n, a, b, r, t, ok in rep.cross_checks:
        w.writerow(["check", n, _num(a), _num(b), _num(r), _num(t), "pass" if ok else "fail"])
    return buf.getvalue()


def resolve_sequence(arg: str) -> SequenceDescriptor:
    p = Path(arg)
    if p.exists():
        return load_descriptor(p)
    if arg in BUILTINS:
        return builtin(arg)
    raise ValidationError(f"{arg}: no such descriptor file or built-in sequence")


# ---------------------------------------------------------------- subcommands


def cmd_invariants(a: argparse.Namespace, rep: RunReport) -> None:
    S = resolve_sequence(a.seq)
    rep.inputs["sequence"] = S.label
    inv = zeta_invariants(S)
    rep.add("zeta(0)", inv.value_at_zero, "log-Gamma coefficients")
    rep.add("zeta'(0)", inv.derivative_at_zero, "log-Gamma coefficients")
    for p in inv.poles:
        rep.add(f"Res zeta({p.point:g})", p.res1, "log-Gamma coefficients")
        fp = laurent_at(S, p.point).res0
        if not math.isnan(fp):
            rep.add(f"FP zeta({p.point:g})", fp, "stored or closed form")
    for k, v in inv.values_at_negative_integers.items():
        if k <= 5:
            rep.add(f"zeta({-k})", v, "log-Gamma coefficients")
    if a.oracle:
        r0 = oracle.zeta_continued(S, 0.0)
        r1 = oracle.zeta_continued(S, 0.0, 1)
        rep.add("zeta(0)", r0.value, "Mellin continuation", r0.error_estimate)
        rep.add("zeta'(0)", r1.value, "Mellin continuation", r1.error_estimate)
        rep.check("zeta(0) formula vs oracle", inv.value_at_zero, r0.value, a.tol)
        rep.check("zeta'(0) formula vs oracle", inv.derivative_at_zero, r1.value, a.tol)


def cmd_sum(a: argparse.Namespace, rep: RunReport) -> None:
    S1 = resolve_sequence(a.seq1)
    S2 = resolve_sequence(a.seq2)
    if a.y != 1.0:
        S1 = scale(S1, a.y * a.y)
    rep.inputs.update(first=S1.label, second=S2.label, y=_num(a.y))
    z0 = sum_zeta_at_zero(S1, S2)
    d0 = sum_zeta_deriv_at_zero(S1, S2, threads=a.threads)
    plan = plan_decomposition(S1, S2, threads=a.threads)
    rep.inputs["decomposition length"] = str(plan.length)
    rep.add("zeta(0)", z0, "heat pairing")
    rep.add("zeta(0)", zeta0_invariant_form(S1, S2), "zeta invariants")
    rep.add("zeta(0)", zeta0_gamma_form(S1, S2), "log-Gamma coefficients")
    rep.add("zeta'(0)", d0, "decomposition")
    rep.add("regularized product", -plan.A00_at_zero, "decomposition", plan.A00_bound)
    e = sdl_assemble(plan, zeta_data_for_plan(S1, plan))
    rep.check("zeta'(0) decomposition vs general assembly", d0, e.res_minus1, 1e-10)
    rep.check("residue at 0 vanishes", e.res1, 0.0, 1e-12)
    if a.oracle:
        r0 = oracle.zeta_continued((S1, S2), 0.0)
        r1 = oracle.zeta_continued((S1, S2), 0.0, 1)
        rep.add("zeta(0)", r0.value, "Mellin continuation", r0.error_estimate)
        rep.add("zeta'(0)", r1.value, "Mellin continuation", r1.error_estimate)
        rep.check("zeta(0) formula vs oracle", z0, r0.value, min(a.tol, 1e-6))
        rep.check("zeta'(0) formula vs oracle", d0, r1.value, a.tol)


def cmd_eta(a: argparse.Namespace, rep: RunReport) -> None:
    rep.inputs["y"] = _num(a.y)
    if a.seq is None:
        d = applications.dedekind_eta(a.y)
        rep.add("log eta_D(iy)", d.log_value, "q-product")
        g = applications.generalized_eta(builtin("squares"), a.y, threads=a.threads)
        rep.add("log eta(iy, squares)", g.log_value, "decomposition")
        rep.check("eta(iy, squares) = eta_D(iy)/sqrt(2 pi)", g.log_value, d.log_value - 0.5 * specfun.LOG_2PI, a.tol)
        rep.check("eta_D modular relation", applications.dedekind_functional_residual(a.y), 0.0, a.tol)
        S = builtin("squares")
    else:
        S = resolve_sequence(a.seq)
        rep.inputs["sequence"] = S.label
        g = applications.generalized_eta(S, a.y, threads=a.threads)
        rep.add(f"log eta(iy, {S.label})", g.log_value, "decomposition")
    rep.check("functional equation residual", applications.eta_functional_equation_residual(S, a.y), 0.0, a.tol)


def cmd_kronecker(a: argparse.Namespace, rep: RunReport) -> None:
    rep.inputs["y"] = _num(a.y)
    z0, d0 = applications.epstein_expansion(a.y)
    k = applications.kronecker_coefficient(a.y)
    rep.add("zeta(0,0,y)", z0, "Epstein assembly")
    rep.add("s-coefficient", d0, "Epstein assembly")
    rep.add("-2(log 2pi + 2 log eta_D)", k, "q-product")
    rep.check("zeta(0,0,y) = -1", z0, -1.0, 0.0)
    rep.check("s-coefficient vs eta_D", d0, k, a.tol)


def cmd_det_product(a: argparse.Namespace, rep: RunReport) -> None:
    M1 = resolve_sequence(a.m1)
    M2 = resolve_sequence(a.m2)
    rep.inputs.update(first=M1.label, second=M2.label)
    ld = applications.det_product(M1, M2, log=True)
    rep.add("log det M1", applications.log_det(M1), "zeta'(0)")
    rep.add("log det M2", applications.log_det(M2), "zeta'(0)")
    rep.add("log det M1 x M2", ld, "sum decomposition")
    rep.add("det M1 x M2", math.exp(ld), "sum decomposition")


def cmd_det_circle(a: argparse.Namespace, rep: RunReport) -> None:
    M = resolve_sequence(a.m)
    rep.inputs.update(y=_num(a.y), manifold=M.label)
    closed = applications.det_circle_times_M(a.y, M, cross_check=False, log=True)
    prod = applications.det_product(builtin("circle", radius=1.0 / a.y), M, log=True)
    rep.add("log det S^1 x M", closed, "closed product")
    rep.add("log det S^1 x M", prod, "sum decomposition")
    rep.check("closed product vs decomposition", closed, prod, a.tol * max(1.0, abs(prod)))


def cmd_verify_appendix(a: argparse.Namespace, rep: RunReport) -> None:
    for which, grid in oracle.APPENDIX_GRIDS.items():
        for params in grid:
            num, err = oracle.appendix_numeric(which, params)
            closed = oracle.appendix_closed_form(which, params)
            label = which + "(" + ", ".join(f"{k}={v:g}" for k, v in params.items()) + ")"
            rep.add(label, num, "contour quadrature", err)
            rep.check(label, num, closed, a.tol)


COMMANDS = {
    "invariants": cmd_invariants,
    "sum": cmd_sum,
    "eta": cmd_eta,
    "kronecker": cmd_kronecker,
    "det-product": cmd_det_product,
    "det-circle": cmd_det_circle,
    "verify-appendix": cmd_verify_appendix,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spectral-zeta", description="Zeta invariants of sequences of spectral type.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", metavar="PATH", help="also write the report as CSV")
    common.add_argument("--tol", type=float, help="cross-check tolerance (default depends on the command)")
    common.add_argument("--threads", type=int, help="threads for the regularized product (env SPECTRAL_ZETA_THREADS)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="zeta(0), zeta'(0) and poles of one sequence")
    p.add_argument("seq")
    p.add_argument("--oracle", action="store_true")

    p = sub.add_parser("sum", parents=[common], help="zeta(0), zeta'(0) of y^2 S1 + S2")
    p.add_argument("seq1")
    p.add_argument("seq2")
    p.add_argument("--y", type=float, default=1.0, help="the first sequence is scaled by y^2")
    p.add_argument("--oracle", action="store_true")

    p = sub.add_parser("eta", parents=[common], help="eta(iy, S); Dedekind eta when no sequence is given")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--seq")

    p = sub.add_parser("kronecker", parents=[common], help="Epstein zeta expansion at s = 0")
    p.add_argument("--y", type=float, required=True)

    p = sub.add_parser("det-product", parents=[common], help="determinant on a product of two manifolds")
    p.add_argument("m1")
    p.add_argument("m2")

    p = sub.add_parser("det-circle", parents=[common], help="determinant on S^1 of radius 1/y times M")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("m")

    sub.add_parser("verify-appendix", parents=[common], help="contour-integral identities")
    return ap


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if a.tol is None:
        a.tol = DEFAULT_TOL[a.command]
    if a.threads is None and os.environ.get("SPECTRAL_ZETA_THREADS"):
        try:
            a.threads = int(os.environ["SPECTRAL_ZETA_THREADS"])
        except ValueError:
            print("error: SPECTRAL_ZETA_THREADS must be an integer", file=sys.stderr)
            return 2
    if a.threads is not None and a.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return 2
    if getattr(a, "y", 1.0) is not None and not getattr(a, "y", 1.0) > 0:
        print("error: --y must be positive", file=sys.stderr)
        return 2
    rep = RunReport(a.command)
    try:
        COMMANDS[a.command](a, rep)
    except SpectralZetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    stdout.write(render_text(rep))
    if a.csv:
        Path(a.csv).write_text(render_csv(rep), encoding="utf-8", newline="")
    return 0 if rep.ok else 3


def main() -> None:
    sys.exit(run())
