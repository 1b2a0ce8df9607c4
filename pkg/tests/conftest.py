import importlib.resources

import pytest

from galoispoints.scenario import load_scenario


def data_path(name):
    return str(importlib.resources.files("galoispoints.data").joinpath(name))


@pytest.fixture(scope="session")
def h9():
    return load_scenario(data_path("h9_inner.json"))


@pytest.fixture(scope="session")
def h9_extend():
    return load_scenario(data_path("h9_extend.json"))


@pytest.fixture(scope="session")
def fq9():
    # resolving G3 enumerates the order-6048 automorphism group once
    return load_scenario(data_path("fq9_outer.json"))


@pytest.fixture(scope="session")
def fq9_two():
    return load_scenario(data_path("fq9_two_outer.json"))
