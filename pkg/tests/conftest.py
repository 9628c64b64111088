import time

import pytest

ACCEPTANCE_FILE = "test_acceptance.py"


@pytest.fixture
def criterion(record_property):
    """Record a criterion's worst deviation and runtime for the summary."""

    class Recorder:
        def __init__(self):
            self.start = time.perf_counter()

        def elapsed(self):
            return time.perf_counter() - self.start

        def report(self, worst, limit):
            record_property("worst", worst)
            record_property("limit", limit)
            record_property("seconds", self.elapsed())

    return Recorder()


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if ACCEPTANCE_FILE not in getattr(rep, "nodeid", "") or rep.when not in ("call", "setup"):
                continue
            if rep.when == "setup" and rep.passed:
                continue
            props = dict(rep.user_properties)
            rows.append((rep.nodeid.split("::")[-1], outcome, props))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, props in sorted(rows):
        status = "PASS" if outcome == "passed" else "FAIL"
        extra = ""
        if "worst" in props:
            extra = f"  worst={props['worst']:.3e} (tol {props['limit']:g})  {props['seconds']:.1f}s"
        terminalreporter.write_line(f"{status}  {name}{extra}")
