import numpy as np
import pytest

from lieaff import catalog
from lieaff.module import AffineMap, CoordinateModule
from lieaff.scalars import GF


@pytest.fixture(scope="session")
def m2():
    return catalog.m2_gf2()


@pytest.fixture(scope="session")
def m2_lie():
    return catalog.m2_gf2_commutator()


@pytest.fixture(scope="session")
def upper_lie():
    return catalog.upper_gf3_commutator()


@pytest.fixture(scope="session")
def gf5_line():
    return CoordinateModule(GF(5), 1)


@pytest.fixture(scope="session")
def sigma_lie(gf5_line):
    return catalog.sigma_lie(GF(5), 1, [[2]], [0])


def line_map(A, m, t):
    return AffineMap.chart(A, A, [[m]], [t])


def mat(*rows):
    return np.array(rows, dtype=np.int64).reshape(-1)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
