import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    marker = "test_acceptance.py::test_criterion_"
    if report.when == "call" and marker in report.nodeid:
        num = int(report.nodeid.split(marker)[1].split("_")[0])
        title = report.nodeid.split(marker)[1].split("_", 1)[1].replace("_", " ")
        ACCEPTANCE_RESULTS[num] = ("PASS" if report.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        status, title = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"[{status}] criterion {num:2d}: {title}")
