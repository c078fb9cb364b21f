import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import dysonlab as dl


@pytest.fixture(scope="session")
def dyson_spec():
    return dl.dyson_potential(2.0, 0.1)


@pytest.fixture(scope="session")
def dyson_model_10(dyson_spec):
    return dl.build_transfer_model(dyson_spec, 10)


@pytest.fixture(scope="session")
def dyson_inter():
    return dl.dyson_interaction(2.0, 0.1)
