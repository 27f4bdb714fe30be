import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mobigossip.generators import gen_family, gen_gstar  # noqa: E402


@pytest.fixture
def k4():
    return gen_family("complete", 4)


@pytest.fixture
def p2():
    return gen_family("path", 2)


@pytest.fixture
def star3():
    return gen_gstar(1, 3)


@pytest.fixture
def star5():
    return gen_gstar(1, 5)
