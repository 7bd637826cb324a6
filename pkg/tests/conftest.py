import os

# several numba workers even on a single-core box, so thread-count invariance is exercised
os.environ.setdefault("NUMBA_NUM_THREADS", "4")

import pytest  # noqa: E402

ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str):
        ACCEPTANCE_LINES[f"{number:02d}"] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
