import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from charimset import enumerate_dags


@pytest.fixture(scope="session")
def universe3():
    return enumerate_dags(3)


@pytest.fixture(scope="session")
def universe4():
    return enumerate_dags(4)
