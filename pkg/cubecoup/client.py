# -*- coding: utf-8 -*-
"""
立方耦合工具包主类
"""

from typing import Any, Dict, Optional

from .config import Config
from .core.finite_measure import FunctionOnSpace, Partition
from .core.scalars import Scalar
from .services.abelian_cubes import AbelianCubeService, FiniteAbelianGroup
from .services.cubic_coupling import CubicCoupling, CubicCouplingService
from .services.exchangeability import ExchangeabilityService, KernelMap, Pattern, SampleBatch
from .services.host_kra import FilteredAction, HostKraService
from .services.reports import VerificationReport
from .services.uniformity import UniformityService


class CubicToolkit:
    """立方耦合工具包主类"""

    def __init__(self):
        # 初始化服务
        self.abelian = AbelianCubeService()
        self.cubic = CubicCouplingService()
        self.uniformity = UniformityService()
        self.host_kra = HostKraService(self.cubic, self.uniformity, self.abelian)
        self.exchange = ExchangeabilityService(self.abelian)

    # 立方耦合快捷方法
    def standard_cubic_coupling(self, group: FiniteAbelianGroup, n_max: int = Config.DEFAULT_NMAX) -> CubicCoupling:
        """有限阿贝尔群的标准立方耦合"""
        return self.abelian.standard_cubic_coupling(group, n_max)

    def host_kra_coupling(self, action: FilteredAction, n_max: int = Config.DEFAULT_NMAX) -> CubicCoupling:
        """滤过作用的 Host–Kra 立方耦合"""
        return self.host_kra.host_kra_coupling(action, n_max)

    def verify_axioms(self, cc: CubicCoupling, n_max: Optional[int] = None) -> VerificationReport:
        """两套公理及其一致性"""
        return self.cubic.verify_all(cc, n_max)

    # 一致性范数快捷方法
    def gowers_norm(self, group: FiniteAbelianGroup, f: FunctionOnSpace, degree: int) -> Dict[str, Any]:
        """
        群上函数的 U^d 范数

        Args:
            group: 有限阿贝尔群
            f: 群上的函数（底空间为 group.as_space()）
            degree: 次数 d

        Returns:
            {"u_norm_pow", "u_norm", "degree"}
        """
        cc = self.standard_cubic_coupling(group, max(degree, 1))
        return self.uniformity.gowers_norm(cc, degree, f)

    def fourier_factor(self, cc: CubicCoupling, d: int) -> Partition:
        return self.uniformity.fourier_factor(cc, d)

    # 可交换性快捷方法
    def pattern_density(self, group: FiniteAbelianGroup, f: FunctionOnSpace, pattern: Pattern) -> Scalar:
        return self.exchange.pattern_density(group, f, pattern)

    def sample_zeta(self, kernel: KernelMap, n: int, n_samples: int, seed: int = 0, **kwargs: Any) -> SampleBatch:
        return self.exchange.sample_zeta(kernel, n, n_samples, seed, **kwargs)

    def test_exchangeable(self, batch: SampleBatch) -> VerificationReport:
        return self.exchange.test_exchangeable(batch)


# 便捷函数
def create_toolkit() -> CubicToolkit:
    """创建工具包的便捷函数"""
    return CubicToolkit()
