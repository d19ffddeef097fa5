import pytest

# tests in test_acceptance.py tag themselves with a "criterion" user property;
# the summary prints one PASS/FAIL line per criterion
_ACCEPTANCE: dict[str, list[str]] = {}


def pytest_runtest_logreport(report):
    name = dict(report.user_properties).get("criterion")
    if name is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _ACCEPTANCE.setdefault(name, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcomes in _ACCEPTANCE.items():
        status = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}")


@pytest.fixture
def criterion(record_property):
    def mark(name: str):
        record_property("criterion", name)

    return mark
