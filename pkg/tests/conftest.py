import pytest

ACCEPTANCE_TITLES = {
    1: "sector dimensions",
    2: "outcome distributions (projector and Wigner-d routes)",
    3: "microcanonical midpoint gaps",
    4: "approximate-microcanonical midpoint values",
    5: "noncommuting curve above commuting curve",
    6: "exact counting sums equal dense reduced states",
    7: "closed-form convergence",
    8: "additivity-ansatz ordering",
    9: "partial-constraint kernel dimensions",
    10: "property suites",
}

_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    number = props.get("criterion")
    if number is None:
        return
    status = "PASS" if report.outcome == "passed" else "FAIL"
    _results[number] = (status, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_TITLES):
        if number not in _results:
            continue
        status, detail = _results[number]
        line = f"criterion {number:2d} {status}: {ACCEPTANCE_TITLES[number]}"
        terminalreporter.write_line(line + (f" | {detail}" if detail else ""))


@pytest.fixture
def criterion(record_property):
    """Tag a test with its acceptance criterion and collect a one-line detail."""
    def tag(number, detail=""):
        record_property("criterion", number)
        if detail:
            record_property("detail", detail)
    return tag
