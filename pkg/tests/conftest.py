import warnings

import numpy as np
import pytest

from ordshrink import Layout


@pytest.fixture(autouse=True)
def _quiet_grid_warning():
    with warnings.catch_warnings():
        warnings.filterwarnings('ignore', message='candidate grid larger')
        yield


def random_layout(rng, p, max_count=5, spacing='equal'):
    if spacing == 'equal':
        levels = np.arange(1, p + 1, dtype=float)
    else:
        levels = np.cumsum(rng.uniform(0.2, 3.0, size=p))
    counts = rng.integers(1, max_count + 1, size=p)
    groups = tuple(rng.normal(np.sin(s), 1.0, size=c) for s, c in zip(levels, counts))
    return Layout(levels, None, groups)
