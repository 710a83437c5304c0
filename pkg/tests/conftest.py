from __future__ import annotations

import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion and return whether it passed.

    checks: list of (name, residual, tolerance).
    """

    def record(label: str, checks: list[tuple[str, float, float]]) -> bool:
        worst = max(checks, key=lambda c: (c[1] > c[2], c[1] / c[2] if c[2] else c[1]))
        ok = all(r <= t for _, r, t in checks)
        failed = [n for n, r, t in checks if r > t]
        line = f"{'PASS' if ok else 'FAIL'}  {label}  [{len(checks)} checks, worst: {worst[0]} residual {worst[1]:.3g} tol {worst[2]:g}]"
        if failed:
            line += "  failing: " + ", ".join(failed)
        request.config.stash[_LINES].append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
