from __future__ import annotations

import numpy as np
import pytest

from endomon.census import enumerate_normalized
from endomon.group import GroupParams

_CACHE: dict = {}


def normalized_endos(params: GroupParams):
    if params not in _CACHE:
        _CACHE[params] = enumerate_normalized(params)
    return _CACHE[params]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


P2_10 = GroupParams(2, (1, 0))
P2_01 = GroupParams(2, (0, 1))
P2_11 = GroupParams(2, (1, 1))
P3_10 = GroupParams(3, (1, 0))
P3_01 = GroupParams(3, (0, 1))
P3_11 = GroupParams(3, (1, 1))
P3_21 = GroupParams(3, (2, 1))
