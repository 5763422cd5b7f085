"""
测试公共夹具与生成策略
"""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as strat

from cubecoup import CubicToolkit, FiniteAbelianGroup, FiniteProbSpace, Partition
from cubecoup.config import Config

settings.register_profile(
    "cubecoup",
    max_examples=25,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cubecoup")


@pytest.fixture(autouse=True)
def _safe_caps(monkeypatch):
    # --unsafe 会改写全局配置
    monkeypatch.setattr(Config, "UNSAFE", False)


@pytest.fixture
def toolkit():
    return CubicToolkit()


@pytest.fixture
def z2():
    return FiniteAbelianGroup.cyclic(2)


@pytest.fixture
def z3():
    return FiniteAbelianGroup.cyclic(3)


@pytest.fixture
def z4():
    return FiniteAbelianGroup.cyclic(4)


@pytest.fixture
def standard_z2(toolkit, z2):
    return toolkit.standard_cubic_coupling(z2, 3)


@pytest.fixture
def standard_z3(toolkit, z3):
    return toolkit.standard_cubic_coupling(z3, 2)


@pytest.fixture
def uniform3():
    return FiniteProbSpace.uniform([1, 2, 3])


rationals = strat.fractions(min_value=-3, max_value=3, max_denominator=6)


@strat.composite
def weighted_spaces(draw, min_atoms=2, max_atoms=5):
    """原子为 0..k−1、权重为正有理数的空间"""
    raw = draw(strat.lists(strat.integers(min_value=1, max_value=5), min_size=min_atoms, max_size=max_atoms))
    total = sum(raw)
    return FiniteProbSpace(list(range(len(raw))), [Fraction(w, total) for w in raw])


@strat.composite
def partitions(draw, space):
    """space 上的随机划分"""
    labels = draw(strat.lists(strat.integers(min_value=0, max_value=2), min_size=len(space), max_size=len(space)))
    return Partition.from_labels(space, lambda atom: labels[space.index(atom)])


@strat.composite
def spaces_with_partitions(draw, count=2):
    space = draw(weighted_spaces())
    return (space,) + tuple(draw(partitions(space)) for _ in range(count))
