import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: whole-catalog runs")


@pytest.fixture(scope="session")
def catalog():
    from catalog import build_catalog
    return build_catalog()
