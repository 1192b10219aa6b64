import sys

import pytest
from hypothesis import HealthCheck, settings

from simpvec.doldkan import bnr
from simpvec.simplicial import Constant, Pair, Zero

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def named():
    """The standard small fixtures, keyed by their usual names."""
    return {
        "Zero": Zero(), "Id(1)": Constant(1), "Id(2)": Constant(2), "Id(3)": Constant(3),
        "Pair(1)": Pair(1), "Pair(2)": Pair(2), "B1": bnr(1), "B2": bnr(2),
    }


def pytest_terminal_summary(terminalreporter):
    gate = sys.modules.get("test_acceptance")
    if gate is None or not gate.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(gate.RESULTS):
        ok, label = gate.RESULTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {label}")
