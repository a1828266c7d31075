import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from normcc import graph as graphmod  # noqa: E402


@pytest.fixture
def path3():
    """The 3-vertex path a-b-c: the running hand-checked example."""
    return graphmod.load_edge_list(["a b", "b c"])


@pytest.fixture
def star6():
    return graphmod.generate_star(6)
