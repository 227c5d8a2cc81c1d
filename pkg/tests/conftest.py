import pytest

_ACCEPTANCE = []


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run 10^6-10^7 draw Monte Carlo tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test body asserts, the hook prints the verdict."""

    def record(number, text):
        request.node._criterion = (number, text)

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    info = getattr(item, "_criterion", None)
    if info is not None and report.when == "call":
        _ACCEPTANCE.append((info[0], info[1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, passed in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {text}")
