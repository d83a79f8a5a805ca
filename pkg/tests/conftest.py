import pytest

_LINES = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion."""
    state = {"detail": ""}

    def note(text):
        state["detail"] = text

    yield note
    report = getattr(request.node, "rep_call", None)
    ok = report is not None and report.passed
    label = request.node.get_closest_marker("criterion").args[0]
    _LINES.append(f"{label}: {'PASS' if ok else 'FAIL'}  {state['detail']}")


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
