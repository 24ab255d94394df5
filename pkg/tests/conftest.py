"""Collects the acceptance verdict lines and prints them after the run."""
from __future__ import annotations

import pytest

_LINES: list[str] = []


@pytest.fixture
def verdict():
    def record(n: int, ok: bool, summary: str) -> None:
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {summary}"
        print(line)
        _LINES.append(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES):
            terminalreporter.write_line(line)
