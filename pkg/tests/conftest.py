import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from flowguide import build_network, random_network


@pytest.fixture
def diamond():
    """4-vertex network with max flow 5 and min cut {s->a, s->b}."""
    return build_network(4, [(0, 1, 3), (0, 2, 2), (1, 2, 1), (1, 3, 2), (2, 3, 3)], 0, 3)


def small_random_pool(count, base_seed=0, n_max=8, m_max=14, cap_max=10):
    """Deterministic mixed-size pool for property tests."""
    import random

    rng = random.Random(base_seed)
    nets = []
    for i in range(count):
        n = rng.randint(2, n_max)
        m = rng.randint(0, min(m_max, n * (n - 1)))
        nets.append(random_network(n, m, cap_max, base_seed * 100_003 + i))
    return nets
