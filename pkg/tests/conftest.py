import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sympswitch.graph import build_symplectic  # noqa: E402
from sympswitch.orbits import canonical_quadruple  # noqa: E402
from sympswitch.switching import VARIANTS, build_variant  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def sp6():
    return build_symplectic(3)


@pytest.fixture(scope="session")
def sp8():
    return build_symplectic(4)


@pytest.fixture(scope="session")
def variants():
    """``variants[nu][name]`` for nu = 3, 4 and every variant."""
    out = {}
    for nu in (3, 4):
        base = build_symplectic(nu)
        quad = canonical_quadruple(nu)
        out[nu] = {v: build_variant(nu, v, quad, base=base) for v in VARIANTS}
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
