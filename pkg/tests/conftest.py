import pytest

from kp2.localization import build_context
from kp2.mirror import mirror_data


@pytest.fixture(scope="session")
def mirror12():
    return mirror_data(12)


@pytest.fixture(scope="session")
def ctx1():
    return build_context(genus=1)


@pytest.fixture(scope="session")
def ctx2():
    """Production-size context: kmax 10, qmax 22."""
    return build_context(genus=2)
