import pytest

from k3picard.family import CoefficientVector

S1 = CoefficientVector((1, 1, 1, -7, 16, 6, -9, 12))
S2 = CoefficientVector((1, 1, 1, -1, -16, 7, 10, -10))
S3 = CoefficientVector((1, 1, 1, 3, -16, 2, 4, 15))
S4 = CoefficientVector((1, 1, 1, -1, 13, -11, 1, 15))
S5 = CoefficientVector((1, 1, 1, -1, -13, 0, 11, -11))


@pytest.fixture(scope="session")
def examples():
    return {"S1": S1, "S2": S2, "S3": S3, "S4": S4, "S5": S5}


CRITERIA: dict[int, tuple[str, str, list[str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n, title = mark.args
    notes = [v for k, v in item.user_properties if k == "note"]
    CRITERIA[n] = (title, "PASS" if rep.passed else "FAIL", notes)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, status, notes = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {status}: {title}")
        for line in notes:
            terminalreporter.write_line(f"    {line}")


@pytest.fixture
def note(request):
    """Attach a diagnostic line to the criterion summary."""
    def add(text: str) -> None:
        request.node.user_properties.append(("note", text))
        print(text)
    return add
