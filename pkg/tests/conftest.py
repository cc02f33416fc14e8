import random

import pytest

from simplexfp import Point


def random_simplex_point(rng, max_index=6, allow_slack=True):
    """Random finitely supported point of the closed simplex."""
    n = rng.randint(1, max_index)
    raw = [rng.random() for _ in range(n)]
    total = sum(raw)
    scale = rng.uniform(0.0, 1.0) if allow_slack else 1.0
    if total == 0:
        return Point()
    values = [v / total * scale for v in raw]
    return Point([(i + 1, v) for i, v in enumerate(values) if v > 1e-12])


@pytest.fixture
def rng():
    return random.Random(20240817)
