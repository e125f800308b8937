import pytest

from helpers import running_instance


@pytest.fixture
def running():
    return running_instance()
