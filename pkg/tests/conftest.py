import pytest
from hypothesis import settings

from turanpoly.scalar import DEFAULT_PRECISION, precision


@pytest.fixture(autouse=True)
def _default_precision():
    with precision(DEFAULT_PRECISION):
        yield


settings.register_profile("default", deadline=None)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid and rep.when == "call":
                num = int(nodeid.split("test_criterion_")[1][:2])
                lines.append((num, "PASS" if outcome == "passed" else "FAIL", nodeid.split("::")[1]))
    if lines:
        terminalreporter.section("acceptance criteria")
        for num, verdict, name in sorted(lines):
            terminalreporter.write_line(f"criterion {num:2d}: {verdict}  {name}")
