import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orthogeo.fuchsian import standard_genus2_group  # noqa: E402


@pytest.fixture(scope="session")
def G2():
    return standard_genus2_group()
