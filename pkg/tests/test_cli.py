from __future__ import annotations

import csv
import io
import math
import subprocess
import sys
from pathlib import Path

import pytest

from spectral_zeta import cli
from spectral_zeta.errors import ValidationError

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    return cli.run(list(argv), stdout=out), out.getvalue()


def rows(text: str, name: str) -> list[list[str]]:
    # results table only; the cross-check table follows the "check" header
    results = text.split("\ncheck ")[0]
    return [ln.split() for ln in results.splitlines() if ln.startswith(name)]


def test_invariants_with_oracle():
    code, out = run("invariants", "squares", "--oracle")
    assert code == 0
    assert "pass" in out and "FAIL" not in out


def test_sum_of_data_files():
    code, out = run("sum", str(DATA / "squares.json"), str(DATA / "squares_y2.json"), "--y", "1", "--oracle")
    assert code == 0
    vals = [float(r[1]) for r in rows(out, "zeta(0) ")]
    assert vals and all(v == 0.25 for v in vals)


def test_sum_scales_first_by_y_squared():
    _, a = run("sum", "squares", "squares", "--y", "2")
    _, b = run("sum", str(DATA / "squares_y2.json"), "squares")
    da = float(rows(a, "zeta'(0)")[0][1])
    db = float(rows(b, "zeta'(0)")[0][1])
    assert da == pytest.approx(db, abs=1e-12)


def test_kronecker():
    code, out = run("kronecker", "--y", "1")
    assert code == 0
    assert float(rows(out, "zeta(0,0,y)")[0][1]) == -1.0


@pytest.mark.parametrize("argv", [["eta", "--y", "2"], ["det-product", "circle", "circle"], ["det-circle", "--y", "1.5", "circle"]])
def test_other_commands(argv):
    code, out = run(*argv)
    assert code == 0, out


def test_csv(tmp_path):
    p = tmp_path / "k.csv"
    code, _ = run("kronecker", "--y", "0.5", "--csv", str(p))
    assert code == 0
    raw = p.read_bytes()
    assert b"\r\n" in raw
    table = list(csv.reader(io.StringIO(raw.decode())))
    assert table[0][:3] == ["kind", "name", "value"]
    assert all(len(r) == len(table[0]) for r in table)
    for r in table[1:]:
        v = float(r[2])
        assert float(f"{v:.17g}") == v
        assert r[2] == f"{v:.17g}"


def test_missing_file_is_validation_error():
    code, _ = run("invariants", "missing.json")
    assert code == ValidationError.exit_code == 2


@pytest.mark.parametrize("argv", [["kronecker", "--y", "-1"], ["kronecker", "--y", "0"], ["kronecker"], ["nope"]])
def test_bad_arguments(argv):
    assert run(*argv)[0] == 2


def test_failed_cross_check_exits_3():
    code, out = run("invariants", "integers", "--oracle", "--tol", "1e-30")
    assert code == 3
    assert "FAIL" in out


def test_thread_env(monkeypatch):
    monkeypatch.setenv("SPECTRAL_ZETA_THREADS", "3")
    code, out3 = run("sum", "integers", "integers")
    monkeypatch.setenv("SPECTRAL_ZETA_THREADS", "1")
    _, out1 = run("sum", "integers", "integers")
    assert code == 0 and out1 == out3
    monkeypatch.setenv("SPECTRAL_ZETA_THREADS", "many")
    assert run("sum", "integers", "integers")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "spectral_zeta", "kronecker", "--y", "2"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "zeta(0,0,y)" in r.stdout
    assert not math.isnan(float(rows(r.stdout, "s-coefficient")[0][1]))
