import pytest

from xrheadroom import builtin_profiles, default_mr_scenario


@pytest.fixture(scope="session")
def registry():
    return builtin_profiles()


@pytest.fixture(scope="session")
def xr2(registry):
    return registry["xr2-gen2"]


@pytest.fixture(scope="session")
def sd8(registry):
    return registry["sd8-gen3"]


@pytest.fixture(scope="session")
def d9300(registry):
    return registry["dimensity-9300"]


@pytest.fixture
def default():
    return default_mr_scenario()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
