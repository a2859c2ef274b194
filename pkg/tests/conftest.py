import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from semiradius import build_weight
from semiradius.genfuzz import GenConfig, gen_adjointable, gen_weight


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def eye2():
    return build_weight(np.eye(2))


@pytest.fixture
def eye3():
    return build_weight(np.eye(3))


@pytest.fixture
def proj10():
    """Rank-one diagonal weight diag(1, 0)."""
    return build_weight(np.diag([1.0, 0.0]))


def random_instance(seed: int, n: int, rank: int | None = None):
    """One (weight, operator) pair from the deterministic stream."""
    cfg = GenConfig(seed=seed, n=n, rank=rank)
    w = gen_weight(cfg, seed)
    return w, gen_adjointable(cfg, w, seed)


def random_pair(seed: int, n: int, rank: int | None = None):
    """A weight and two independent operators bound to it."""
    cfg = GenConfig(seed=seed, n=n, rank=rank)
    w = gen_weight(cfg, seed)
    t = gen_adjointable(cfg, w, seed, label="pair_t")
    s = gen_adjointable(cfg, w, seed, label="pair_s")
    return w, t, s
