import numpy as np
import pytest

import ascribe as asc


@pytest.fixture
def rng():
    return np.random.default_rng(24)


@pytest.fixture(autouse=True)
def ascribe_config():
    from ascribe._src.config import __default_conf

    for key, value in __default_conf.items():
        asc.config(key, value)
