import pytest

ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def record_criterion():
    """Store the PASS/FAIL line of one acceptance criterion."""

    def record(label, passed: bool, elapsed: float, limit: float | None, detail: str):
        ok = passed and (limit is None or elapsed < limit)
        budget = "no time limit" if limit is None else f"limit {limit:g} s"
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'} ({detail}; {elapsed:.2f} s, {budget})"
        ACCEPTANCE_LINES[str(label)] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for label in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[label])
