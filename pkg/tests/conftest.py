import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from phasecell.klein_gordon import initial_state, run_trajectory  # noqa: E402
from phasecell.lattice_ops import TruncatedBasis  # noqa: E402
from phasecell.poincare import build_generators  # noqa: E402

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def bases4_n6():
    return (TruncatedBasis(6, 4),) * 4


@pytest.fixture(scope="session")
def generators_n6(bases4_n6):
    return build_generators(bases4_n6)


@pytest.fixture(scope="session")
def mode1_trajectory():
    """n_max = 6, m = 1, mode 1, dt = 0.01, 400 steps."""
    bases = (TruncatedBasis(6),) * 3
    return run_trajectory(initial_state(bases, 1.0, "eigenmode", 1), 0.01, 400)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
