import pytest

from natorder.catalog.setups import load_catalog


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def q2(catalog):
    return catalog.get("Q-2")


@pytest.fixture(scope="session")
def golden(catalog):
    return catalog.get("golden")


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _CRITERIA[props["criterion"]] = (report.outcome, "; ".join(props.get("summary", [])), report.duration)


_CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        outcome, summary, secs = _CRITERIA[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  ({secs:.1f} s)  {summary}")
