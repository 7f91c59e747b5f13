import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from schmidt2d.angular import build_radial_grid  # noqa: E402
from schmidt2d.models import GaussianPairState, normalize_state  # noqa: E402

SQRT2 = math.sqrt(2.0)
NONINTERACTING = (SQRT2, 1.0 / SQRT2)
WEAK = (2.0, 1.0 / SQRT2)

ACCEPTANCE = []


@pytest.fixture(scope="session")
def grid96():
    return build_radial_grid(96, 10.0)


@pytest.fixture(scope="session")
def grid48():
    return build_radial_grid(48, 10.0)


@pytest.fixture(scope="session")
def free_state(grid96):
    return normalize_state(GaussianPairState(*NONINTERACTING), grid96)


@pytest.fixture(scope="session")
def weak_state(grid96):
    return normalize_state(GaussianPairState(*WEAK), grid96)


@pytest.fixture
def record_criterion():
    def record(number, title, passed, detail):
        ACCEPTANCE.append((number, title, bool(passed), detail))
        assert passed, f"criterion {number} ({title}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        tag = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{tag}] {number}. {title}: {detail}")
