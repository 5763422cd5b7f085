"""
核心模块
"""

from .couplings import Coupling
from .finite_measure import FiniteProbSpace, FunctionOnSpace, Partition
from .scalars import ComplexRational, PhaseScalar, ScalarMode

__all__ = ['Coupling', 'FiniteProbSpace', 'FunctionOnSpace', 'Partition', 'ComplexRational', 'PhaseScalar', 'ScalarMode']
