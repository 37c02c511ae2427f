import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lumifuse.core import IlluminationPattern as P
from lumifuse.simulator import SceneSpec, simulate_capture_set

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_set():
    """A 5-pattern simulated sphere, 32x24, used across optimizer tests."""
    scene = SceneSpec("sphere", width=32, height=24, radius=8.0, depth=3.0, seed=7)
    patterns = [P(15, 15, 15), P(0, 15, 0), P(15, 0, 0), P(0, 0, 15), P(5, 5, 15)]
    return simulate_capture_set(scene, patterns, "sphere-7")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
