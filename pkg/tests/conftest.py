import pytest


def pytest_addoption(parser):
    parser.addoption("--big", action="store_true", default=False, help="run the large free nilpotent cases")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: minutes-long exhaustive searches")
    config._acceptance = {}


def pytest_collection_modifyitems(config, items):
    if config.getoption("--big"):
        return
    skip = pytest.mark.skip(reason="needs --big")
    for item in items:
        if "big" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, label, passed)`` for the end-of-run summary."""
    store = request.config._acceptance

    def record(number, label, passed):
        store[(number, label)] = bool(passed)
        print(f"criterion {number} [{label}]: {'PASS' if passed else 'FAIL'}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = getattr(config, "_acceptance", {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for (number, label), passed in sorted(store.items()):
        terminalreporter.write_line(f"criterion {number:>2} {label}: {'PASS' if passed else 'FAIL'}")
