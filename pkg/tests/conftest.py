import json

import numpy as np
import pytest

from txpack import GameParams, Mempool, Transaction

# Seven-transaction golden instance: prices in exponential form, unit sizes,
# k = 3, lambda = 1. Solved by hand, the raw marginals are
# (2/3, 5/3, 7/12, 13/12, 2/3, 2/3, -7/3), the clamp shift is 1/3, and the
# clamped profile is (1/3, 1, 1/4, 3/4, 1/3, 1/3, 0).
GOLDEN_PRICES = [1.0, np.exp(1.0), np.exp(-1 / 12), np.exp(5 / 12), 1.0, 1.0, np.exp(-3.0)]
GOLDEN_PHAT = [2 / 3, 5 / 3, 7 / 12, 13 / 12, 2 / 3, 2 / 3, -7 / 3]
GOLDEN_PROFILE = [1 / 3, 1.0, 1 / 4, 3 / 4, 1 / 3, 1 / 3, 0.0]
GOLDEN_XHAT = 1 / 3
GOLDEN_W = np.exp(-1 / 3)
GOLDEN_INTERVALS = {
    1: (0.0, 1 / 3),
    2: (1 / 3, 4 / 3),
    3: (4 / 3, 19 / 12),
    4: (19 / 12, 7 / 3),
    5: (7 / 3, 8 / 3),
    6: (8 / 3, 3.0),
}


@pytest.fixture
def golden_mempool():
    return Mempool([Transaction(i + 1, v) for i, v in enumerate(GOLDEN_PRICES)])


@pytest.fixture
def golden_params():
    return GameParams(k=3, lam=1.0)


@pytest.fixture
def golden_mempool_file(tmp_path, golden_mempool):
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(golden_mempool.to_dict()))
    return path


def random_unit_mempool(rng, m):
    prices = np.exp(rng.uniform(-3, 3, m))
    return Mempool([Transaction(i, float(v)) for i, v in enumerate(prices)])


def random_sized_mempool(rng, m):
    prices = np.exp(rng.uniform(-3, 3, m))
    sizes = rng.uniform(0.2, 4.0, m)
    return Mempool([Transaction(i, float(v), float(s)) for i, (v, s) in enumerate(zip(prices, sizes))])
