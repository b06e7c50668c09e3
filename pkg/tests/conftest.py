import pytest

from ringfv.rings import modular_ring, product_ring
from ringfv.suites import ring_suite


@pytest.fixture(scope="session")
def suite_rings():
    return ring_suite()


@pytest.fixture(scope="session")
def z4():
    return modular_ring(4)


@pytest.fixture(scope="session")
def z6():
    return modular_ring(6)


@pytest.fixture(scope="session")
def z60():
    return modular_ring(60)


@pytest.fixture(scope="session")
def z2xz3():
    return product_ring([modular_ring(2), modular_ring(3)])
