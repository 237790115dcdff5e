import pytest

from faithlab import build


@pytest.fixture(scope="session")
def corpus():
    return build.corpus()
