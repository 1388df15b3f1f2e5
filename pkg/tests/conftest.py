from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
ACCEPTANCE: dict = {}


@pytest.fixture
def instances_dir() -> Path:
    return ROOT / "instances"


def record(number: int, title: str, passed: bool, detail: str = ""):
    ACCEPTANCE[number] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        line = f"[{'PASS' if passed else 'FAIL'}] {number}. {title}"
        terminalreporter.write_line(line + (f": {detail}" if detail else ""))
