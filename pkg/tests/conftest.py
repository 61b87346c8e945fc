"""
测试公共夹具
"""

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from rmlkit import gallery  # noqa: E402
from rmlkit.generators import all_models  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(20240501)


@pytest.fixture
def chain():
    return gallery.chain(4)


@pytest.fixture
def fork():
    return gallery.backward_fork()


@pytest.fixture
def left():
    return gallery.refinement_left()


@pytest.fixture
def right():
    return gallery.refinement_right()


@pytest.fixture
def uncertain():
    return gallery.p_uncertainty()


@pytest.fixture(scope="session")
def small_models():
    """单主体单命题：1、2 个状态的全部点模型，加上 150 个 3 状态点模型的抽样"""
    sampled = random.Random(3).sample(list(all_models(3)), 150)
    return [*all_models(1), *all_models(2), *sampled]
