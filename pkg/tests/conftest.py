import json
from pathlib import Path

import pytest

DATA = Path(__file__).with_name("data")
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def oracle() -> dict:
    return json.loads((DATA / "oracle_values.json").read_text())


def rel(x: float, y: float) -> float:
    return abs(x - y) / max(abs(x), abs(y), 1e-300)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
