# -*- coding: utf-8 -*-
"""
服务模块
"""

from .abelian_cubes import AbelianCubeService, Character, CubeGroupSpec, FiniteAbelianGroup
from .cubic_coupling import CubicCoupling, CubicCouplingService
from .exchangeability import ExchangeabilityService, KernelMap, Pattern, SampleBatch
from .host_kra import FilteredAction, HostKraService, PermutationGroup
from .reports import CheckResult, Report, VerificationReport, Verdict
from .uniformity import UniformityService, UNorm

__all__ = [
    'AbelianCubeService', 'Character', 'CubeGroupSpec', 'FiniteAbelianGroup',
    'CubicCoupling', 'CubicCouplingService',
    'ExchangeabilityService', 'KernelMap', 'Pattern', 'SampleBatch',
    'FilteredAction', 'HostKraService', 'PermutationGroup',
    'CheckResult', 'Report', 'VerificationReport', 'Verdict',
    'UniformityService', 'UNorm',
]
