import numpy as np
import pytest

from uavisac.config import ScenarioConfig, desk_scenario


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def table_cfg():
    return ScenarioConfig()


@pytest.fixture
def desk_cfg():
    return desk_scenario()


def random_unit_complex(rng, m):
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return v / np.linalg.norm(v)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
