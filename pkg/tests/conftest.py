import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

# (criterion number, passed, detail) recorded by the acceptance suite
ACCEPTANCE_RESULTS: list[tuple[int, bool, str]] = []


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def acceptance_record():
    def record(number: int, ok: bool, detail: str) -> None:
        line = f"ACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        ACCEPTANCE_RESULTS.append((number, ok, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{number:2d} {'PASS' if ok else 'FAIL'}  {detail}")
