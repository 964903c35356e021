import pytest

from abyssal.scenario import load_builtin


@pytest.fixture(scope="session")
def two_auv():
    return load_builtin("two_auv")


@pytest.fixture(scope="session")
def replay_demo():
    return load_builtin("replay_demo")
