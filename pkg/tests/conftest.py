"""Shared test plumbing: the acceptance-criterion result registry.

test_acceptance.py records one entry per criterion; the terminal summary
prints a single PASS/FAIL line for each so the gate is readable at a
glance even inside a long pytest run.
"""

ACCEPTANCE_RESULTS = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        verdict = "PASS" if passed else "FAIL"
        tr.write_line(f"[criterion {number:02d}] {verdict} — {detail}")
