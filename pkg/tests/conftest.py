from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from multikat.gamma import k_theory  # noqa: E402
from multikat.multicat import build_E, build_I, build_terminal, build_unit_u, wedge  # noqa: E402
from multikat.permutative import delooping, discrete_cyclic, from_permutative, saturating  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "multikat" / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def E():
    return build_E(4)


@pytest.fixture(scope="session")
def Z2():
    return from_permutative(discrete_cyclic(2), 4)


@pytest.fixture(scope="session")
def BZ3():
    return from_permutative(delooping(3), 4)


@pytest.fixture(scope="session")
def sat1():
    return from_permutative(saturating(), 4)


@pytest.fixture(scope="session")
def samples(E, Z2, BZ3, sat1):
    return {
        "terminal": build_terminal(4),
        "E": E,
        "I": build_I(4),
        "u": build_unit_u(4),
        "wedge(E,E)": wedge(E, E),
        "Z/2": Z2,
        "BZ/3": BZ3,
        "sat1": sat1,
    }


@pytest.fixture(scope="session")
def J_E(E):
    return k_theory(E, 3)


@pytest.fixture(scope="session")
def J_Z2(Z2):
    return k_theory(Z2, 3)


@pytest.fixture(scope="session")
def J_sat1(sat1):
    return k_theory(sat1, 3)


@pytest.fixture(scope="session")
def J_BZ3(BZ3):
    return k_theory(BZ3, 3)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
