import pytest

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def record(key: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[key] = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE[key])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])


@pytest.fixture
def acceptance():
    return record
