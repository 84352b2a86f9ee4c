import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from adralg import adrcore as ac  # noqa: E402
from adralg import families as fm  # noqa: E402
from adralg.endoalg import endomorphism_algebra  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def br():
    pres, mods = fm.branching_example()
    adr = ac.build_adr(pres, mods)
    return pres, mods, adr


@pytest.fixture(scope="session")
def br_b(br):
    return endomorphism_algebra(br[2])


@pytest.fixture(scope="session")
def loop():
    pres, mods = fm.loop_example()
    adr = ac.build_adr(pres, mods)
    return pres, mods, adr


@pytest.fixture(scope="session")
def loop_b(loop):
    return endomorphism_algebra(loop[2])
