import pytest

from spreadcodes import corpus


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: exhaustive enumerations taking minutes"
    )


@pytest.fixture(scope="session")
def reference_pairs():
    return corpus.pairs()


@pytest.fixture(scope="session")
def bulk():
    """Exhaustive spread enumeration + classification (about 2 minutes)."""
    from spreadcodes.spreads import classify_all

    return classify_all()
