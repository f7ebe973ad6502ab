import pytest

from gentlecones import FieldCtx, five_vertex_example, kronecker_pair


@pytest.fixture
def kron():
    return kronecker_pair()


@pytest.fixture
def five():
    return five_vertex_example()


@pytest.fixture
def Fp():
    return FieldCtx.default_prime(12).field
