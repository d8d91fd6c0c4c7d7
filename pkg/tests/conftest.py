import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bdcoh.examples import build_c3_family  # noqa: E402
from bdcoh.group import FiniteGroup  # noqa: E402
from bdcoh.modules import GAlgebra  # noqa: E402


@pytest.fixture(scope="session")
def c3():
    return FiniteGroup.cyclic(3)


@pytest.fixture(scope="session")
def f3(c3):
    return GAlgebra.trivial_ring(c3, 3)


@pytest.fixture(scope="session")
def c3_family():
    return build_c3_family()


@pytest.fixture
def rng():
    return np.random.default_rng(20241018)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
