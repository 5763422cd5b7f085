# -*- coding: utf-8 -*-
"""
立方耦合工具包

有限概率空间上的立方耦合、一致性范数、Host–Kra 构造与立方可交换性。
"""

# 初始化日志系统
from .utils.logger import setup_logger

setup_logger()

# 主要工具包类
from .client import CubicToolkit, create_toolkit
# 核心对象
from .core.couplings import Coupling
from .core.finite_measure import FiniteProbSpace, FunctionOnSpace, Partition
# 异常类
from .exceptions import (CapExceededError, ConfigError, CouplingError,
                         CubeCoupError, DimensionError, SampleSizeError,
                         SpaceMismatchError, SpecFormatError,
                         VerificationError)
# 服务类
from .services.abelian_cubes import AbelianCubeService, FiniteAbelianGroup
from .services.cubic_coupling import CubicCoupling, CubicCouplingService
from .services.exchangeability import ExchangeabilityService, KernelMap, Pattern
from .services.host_kra import FilteredAction, HostKraService
from .services.uniformity import UniformityService

__version__ = "0.1.0"

__all__ = [
    # 主要工具包
    'CubicToolkit',
    'create_toolkit',

    # 核心对象
    'Coupling',
    'FiniteProbSpace',
    'FunctionOnSpace',
    'Partition',
    'CubicCoupling',
    'FiniteAbelianGroup',
    'FilteredAction',
    'KernelMap',
    'Pattern',

    # 服务类
    'AbelianCubeService',
    'CubicCouplingService',
    'UniformityService',
    'HostKraService',
    'ExchangeabilityService',

    # 异常
    'CubeCoupError',
    'ConfigError',
    'SpecFormatError',
    'DimensionError',
    'SpaceMismatchError',
    'CapExceededError',
    'CouplingError',
    'VerificationError',
    'SampleSizeError',
]
