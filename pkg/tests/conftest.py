import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from flutelab import presets  # noqa: E402

DEMO_SPECS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "demos", "specs")


@pytest.fixture(scope="session")
def rapid10():
    return presets.rapid10()


@pytest.fixture(scope="session")
def rapid12():
    return presets.rapid12()


@pytest.fixture(scope="session")
def doubling10():
    return presets.doubling(10)


@pytest.fixture(scope="session")
def small_twisted():
    from flutelab import FluteSpec
    return FluteSpec.from_values([str(n) for n in range(1, 10)],
                                 ["0.3", "-1.1", "2.5", "0", "0.7", "-3", "4.2", "1.5", "0"],
                                 precision_bits=192, label="small")


@pytest.fixture
def spec_dir():
    return DEMO_SPECS
