"""Shared fixtures and the acceptance summary hook."""

import pytest

from cwgrass.chow import grassmannian

ACCEPTANCE_LINES: dict = {}


def record(num: int, passed: bool, text: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {num}: {text}"
    ACCEPTANCE_LINES[num] = line
    print(line)


@pytest.fixture(scope="session")
def gr24():
    return grassmannian(2, 4)


@pytest.fixture(scope="session")
def gr25():
    return grassmannian(2, 5)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])
