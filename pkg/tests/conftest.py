import pytest

from qpmut import fd_algebra, grid3_qp, hex_qp, tub_qp


@pytest.fixture(scope="session")
def hexqp():
    return hex_qp()


@pytest.fixture(scope="session")
def grid3():
    return grid3_qp()


@pytest.fixture(scope="session")
def tub2():
    return tub_qp(2)


@pytest.fixture(scope="session")
def tub3():
    return tub_qp(3)


@pytest.fixture(scope="session")
def hex_alg(hexqp):
    return fd_algebra(hexqp)


@pytest.fixture(scope="session")
def grid3_alg(grid3):
    return fd_algebra(grid3)


@pytest.fixture(scope="session")
def tub2_alg(tub2):
    return fd_algebra(tub2)
