import pytest

from simpla.fixtures import hex_kripke, hex_simplicial, intro


@pytest.fixture
def intro_model():
    return intro()


@pytest.fixture
def hex_s():
    return hex_simplicial()


@pytest.fixture
def hex_k():
    return hex_kripke()
