# -*- coding: utf-8 -*-
"""
一致性范数服务

U^d 乘积、U^d 卷积、一致性半范数，以及 Fourier σ-代数 F_{d−1}（按根坐标与角坐标的交计算）。
半范数以 2^d 次幂的形式保存，精确模式下始终是有理数。
"""

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional

from ..core.couplings import xi
from ..core.cube_combinatorics import SimplicialSet, Vertex, corner, format_bits, height, vertices
from ..core.finite_measure import FunctionOnSpace, Partition, cond_expect, meet
from ..core.scalars import Real, Scalar, abs_squared, as_real, is_zero, product, scalar_eq
from ..exceptions import DimensionError, VerificationError
from ..utils.logger import get_logger
from .cubic_coupling import CubicCoupling
from .reports import CheckResult

FunctionSystem = Mapping[Vertex, FunctionOnSpace]


@dataclass(frozen=True)
class UNorm:
    """‖f‖_{U^d}，powered = ‖f‖^{2^d}"""

    degree: int
    powered: Real

    @property
    def value(self) -> float:
        return float(self.powered) ** (1.0 / 2 ** self.degree)

    @property
    def is_zero(self) -> bool:
        return is_zero(self.powered)


def _constant_system(cc: CubicCoupling, verts: List[Vertex]) -> Dict[Vertex, FunctionOnSpace]:
    one = FunctionOnSpace.constant(cc.base, Fraction(1))
    return {v: one for v in verts}


class UniformityService:
    """U^d 乘积、卷积、半范数与特征因子"""

    def __init__(self):
        self.logger = get_logger(__name__)

    def _check_system(self, system: FunctionSystem, verts: List[Vertex], what: str) -> None:
        missing = [v for v in verts if v not in system]
        if missing:
            raise DimensionError(f"{what}缺少顶点 {format_bits(missing[0])} 上的函数")

    def full_system(self, cc: CubicCoupling, d: int, partial: Mapping[Vertex, FunctionOnSpace]) -> Dict[Vertex, FunctionOnSpace]:
        """未给出的顶点补常数 1"""
        system = _constant_system(cc, vertices(d))
        system.update(partial)
        return system

    # ------------------------------------------------------------ 乘积与半范数

    def u_product(self, cc: CubicCoupling, d: int, system: FunctionSystem) -> Scalar:
        """
        ⟨F⟩_{U^d} = ∫ ∏ C^{|v|} f_v∘p_v dμ^⟦d⟧

        Args:
            cc: 立方耦合
            d: 维数
            system: ⟦d⟧ 的每个顶点上的函数

        Returns:
            复数标量（精确模式下为 Fraction、ComplexRational 或 PhaseScalar）
        """
        verts = vertices(d)
        self._check_system(system, verts, "U^d 乘积")
        mu = cc.measure(d)
        return xi(mu, {v: system[v].conj_power(height(v)) for v in verts})

    def u_seminorm(self, cc: CubicCoupling, d: int, f: FunctionOnSpace) -> UNorm:
        """
        ‖f‖_{U^d}

        Raises:
            DimensionError: d < 1
            VerificationError: ⟨f⟩_{U^d} 不是非负实数（说明立方耦合本身有问题）
        """
        if d < 1:
            raise DimensionError(f"U^d 半范数需要 d ≥ 1，实际为 {d}")
        value = self.u_product(cc, d, {v: f for v in vertices(d)})
        powered = as_real(value)
        if powered is None or (powered < 0 and not is_zero(powered)):
            raise VerificationError(f"U^{d} 乘积不是非负实数: {value}")
        if powered < 0:
            powered = type(powered)(0)
        return UNorm(d, powered)

    def gowers_norm(self, cc: CubicCoupling, d: int, f: FunctionOnSpace) -> Dict[str, Any]:
        """报告用：u_norm_pow 与 u_norm"""
        norm = self.u_seminorm(cc, d, f)
        return {"u_norm_pow": norm.powered, "u_norm": norm.value, "degree": d}

    # ------------------------------------------------------------ 卷积

    def u_convolution(self, cc: CubicCoupling, d: int, system: FunctionSystem) -> FunctionOnSpace:
        """
        [F]_{U^d}(x) = E(∏_{v∈K_d} C^{|v|+1} f_v∘p_v | p_{0^d} = x)

        根坐标测度为零的原子取 0
        """
        verts = vertices(d)
        corner_verts = verts[1:]
        self._check_system(system, corner_verts, "U^d 卷积")
        mu = cc.measure(d)
        conjugated = [system[v].conj_power(height(v) + 1) for v in corner_verts]
        sums: Dict[Any, Scalar] = defaultdict(Fraction)
        for key, value in mu.items():
            sums[key[0]] += value * product(f(x) for f, x in zip(conjugated, key[1:]))
        values = []
        for atom, weight in zip(cc.base.atoms, cc.base.weights):
            values.append(Fraction(0) if is_zero(weight) else sums.get(atom, Fraction(0)) / weight)
        return FunctionOnSpace(cc.base, values)

    def dual_function(self, cc: CubicCoupling, d: int, system: FunctionSystem) -> FunctionOnSpace:
        """U^d 对偶函数（即 U^d 卷积）"""
        return self.u_convolution(cc, d, system)

    def convolution_identity(self, cc: CubicCoupling, d: int, system: FunctionSystem) -> bool:
        """⟨F⟩_{U^d} = ∫ f_{0^d}·conj([F′]_{U^d}) dλ，F′ 为 F 在 K_d 上的部分"""
        root = vertices(d)[0]
        convolution = self.u_convolution(cc, d, system)
        return scalar_eq(self.u_product(cc, d, system), (system[root] * convolution.conj()).mean())

    # ------------------------------------------------------------ Fourier σ-代数

    def fourier_factor(self, cc: CubicCoupling, d: int) -> Partition:
        """
        F_{d−1}：μ^⟦d⟧ 中 A_{0^d} ∧ A_{K_d}，按根坐标推到底空间

        Args:
            cc: 立方耦合
            d: 维数（≥ 1）

        Returns:
            底空间支撑上的划分
        """
        if d < 1:
            raise DimensionError(f"fourier_factor 需要 d ≥ 1，实际为 {d}")
        mu = cc.measure(d)
        space = mu.support_space()
        root = vertices(d)[:1]
        common = meet(mu.coordinate_partition(root, space), mu.coordinate_partition(corner(d), space))
        block_of_root = {key[0]: common.block_index(key) for key in space.atoms}
        partition = Partition.from_labels(cc.base, block_of_root)
        self.logger.debug(f"F_{d - 1}: {len(partition)} 个块")
        return partition

    def fourier_sigma_algebra(self, cc: CubicCoupling, k: int) -> Partition:
        """F_k"""
        return self.fourier_factor(cc, k + 1)

    def zero_norm_projection_check(self, cc: CubicCoupling, d: int, f: FunctionOnSpace,
                                   factor: Optional[Partition] = None) -> bool:
        """‖f‖_{U^d} = 0 与 E(f|F_{d−1}) = 0 是否同时成立或同时不成立"""
        factor = factor or self.fourier_factor(cc, d)
        norm_zero = self.u_seminorm(cc, d, f).is_zero
        projection_zero = cond_expect(f, factor).is_zero()
        return norm_zero == projection_zero

    def factor_cubic_coupling(self, cc: CubicCoupling, d: int) -> CubicCoupling:
        """以 F_d 为因子的立方耦合"""
        partition = self.fourier_sigma_algebra(cc, d)
        return cc.factor(partition, name=f"{cc.name}/F_{d}")

    # ------------------------------------------------------------ 不等式与恒等式

    def check_gowers_cauchy_schwarz(self, cc: CubicCoupling, d: int, system: FunctionSystem) -> CheckResult:
        """|⟨F⟩|^{2^d} ≤ ∏ ‖f_v‖^{2^d}，两边都取 2^d 次幂比较"""
        if d < 1:
            raise DimensionError(f"Gowers–Cauchy–Schwarz 需要 d ≥ 1，实际为 {d}")
        value = self.u_product(cc, d, system)
        left = abs_squared(value) ** (2 ** (d - 1))
        right = product(self.u_seminorm(cc, d, system[v]).powered for v in vertices(d))
        ok = left <= right or scalar_eq(left, right)
        return CheckResult.from_bool("gowers_cauchy_schwarz", ok, {"d": d},
                                     {"product_pow": left, "bound_pow": right}, {"d": d})

    def check_monotonicity(self, cc: CubicCoupling, d: int, f: FunctionOnSpace) -> CheckResult:
        """‖f‖_{U^d}^{2^{d+1}} ≤ ‖f‖_{U^{d+1}}^{2^{d+1}}"""
        low = self.u_seminorm(cc, d, f).powered
        high = self.u_seminorm(cc, d + 1, f).powered
        left = low * low
        ok = left <= high or scalar_eq(left, high)
        return CheckResult.from_bool("monotonicity", ok, {"d": d}, {"low_pow": left, "high_pow": high}, {"d": d})

    def check_module_property(self, cc: CubicCoupling, d: int, f: FunctionOnSpace, g: FunctionOnSpace,
                              factor: Optional[Partition] = None) -> CheckResult:
        """‖f‖_{U^d} = 0 且 g 关于 F_{d−1} 可测时 ‖fg‖_{U^d} = 0"""
        factor = factor or self.fourier_factor(cc, d)
        params = {"d": d}
        if not self.u_seminorm(cc, d, f).is_zero:
            return CheckResult.not_applicable("module_property", "‖f‖ ≠ 0", params)
        if not g.is_measurable(factor):
            return CheckResult.not_applicable("module_property", "g 不是 F_{d−1} 可测的", params)
        ok = self.u_seminorm(cc, d, f * g).is_zero
        return CheckResult.from_bool("module_property", ok, params, witness={"d": d})

    def check_zero_norm_vanishing(self, cc: CubicCoupling, n: int, simplicial: SimplicialSet,
                                  system: FunctionSystem) -> CheckResult:
        """
        单纯支撑上若某个 f_u 满足 ‖f_u‖_{U^{d(u)}} = 0（d(u) ≥ 1），则 ⟨F⟩_{U^n} = 0

        system 在 S 之外的顶点上必须是常数 1
        """
        params = {"n": n, "support": [format_bits(v) for v in simplicial.ordered()]}
        system = self.full_system(cc, n, system)
        one = FunctionOnSpace.constant(cc.base, Fraction(1))
        for v in vertices(n):
            if v not in simplicial and not system[v].equals(one):
                return CheckResult.not_applicable("zero_norm_vanishing", "S 之外的函数不是常数 1", params)
        for u in simplicial.ordered():
            d = simplicial.degree(u)
            if d >= 1 and d <= cc.n_max and self.u_seminorm(cc, d, system[u]).is_zero:
                value = self.u_product(cc, n, system)
                return CheckResult.from_bool("zero_norm_vanishing", is_zero(value), params,
                                             {"vertex": format_bits(u), "degree": d, "product": value},
                                             {"vertex": format_bits(u)})
        return CheckResult.not_applicable("zero_norm_vanishing", "没有半范数为零的顶点", params)

    def verify_simplicial_projection(self, cc: CubicCoupling, n: int, simplicial: SimplicialSet,
                                     system: FunctionSystem, d: Optional[int] = None) -> CheckResult:
        """
        高度 ≤ d 的单纯支撑上把 f_v 换成 E(f_v|F_{d−1}) 不改变 ⟨F⟩_{U^n}

        S 之外的函数一律取常数 1
        """
        d = simplicial.height if d is None else d
        params = {"n": n, "d": d, "support": [format_bits(v) for v in simplicial.ordered()]}
        if d < 1:
            return CheckResult.not_applicable("simplicial_projection", "需要 d ≥ 1", params)
        if simplicial.height > d:
            raise DimensionError(f"单纯集高度 {simplicial.height} 超过 d={d}")
        factor = self.fourier_factor(cc, d)
        original = self.full_system(cc, n, {v: system[v] for v in simplicial.ordered()})
        projected = self.full_system(cc, n, {v: cond_expect(system[v], factor) for v in simplicial.ordered()})
        before = self.u_product(cc, n, original)
        after = self.u_product(cc, n, projected)
        return CheckResult.from_bool("simplicial_projection", scalar_eq(before, after), params,
                                     {"before": before, "after": after})

    def verify_neighbour_vanishing(self, cc: CubicCoupling, d: int, system: FunctionSystem,
                                   w1: Vertex, w2: Vertex) -> CheckResult:
        """
        ⟦d+1⟧ 中相邻顶点 w1, w2：f_{w1} 关于 F_{d−1} 可测且 ‖f_{w2}‖_{U^d} = 0 时 ⟨F⟩_{U^{d+1}} = 0
        """
        params = {"d": d, "w1": format_bits(w1), "w2": format_bits(w2)}
        if sum(a != b for a, b in zip(w1, w2)) != 1:
            raise DimensionError(f"{format_bits(w1)} 与 {format_bits(w2)} 不相邻")
        factor = self.fourier_factor(cc, d)
        if not system[w1].is_measurable(factor) or not self.u_seminorm(cc, d, system[w2]).is_zero:
            return CheckResult.not_applicable("neighbour_vanishing", "前提不满足", params)
        value = self.u_product(cc, d + 1, system)
        return CheckResult.from_bool("neighbour_vanishing", is_zero(value), params, {"product": value})

    def verify_factor_convolution(self, cc: CubicCoupling, d: int, system: FunctionSystem) -> CheckResult:
        """K_{d+1} 上 g_v = E(f_v|F_{d−1}) 时 [G]_{U^{d+1}} = E([F]_{U^{d+1}}|F_{d−1})"""
        factor = self.fourier_factor(cc, d)
        projected = {v: cond_expect(system[v], factor) for v in corner(d + 1)}
        left = self.u_convolution(cc, d + 1, projected)
        right = cond_expect(self.u_convolution(cc, d + 1, system), factor)
        return CheckResult.from_bool("factor_convolution", left.equals(right), {"d": d},
                                     witness={"left": list(left.values), "right": list(right.values)})

    def convolution_is_measurable(self, cc: CubicCoupling, n: int, d: int, system: FunctionSystem) -> CheckResult:
        """F_d 可测函数组的 U^n 卷积仍是 F_d 可测的"""
        factor = self.fourier_sigma_algebra(cc, d)
        params = {"n": n, "d": d}
        corner_verts = corner(n)
        if not all(system[v].is_measurable(factor) for v in corner_verts):
            return CheckResult.not_applicable("convolution_measurable", "函数组不是 F_d 可测的", params)
        convolution = self.u_convolution(cc, n, system)
        return CheckResult.from_bool("convolution_measurable", convolution.is_measurable(factor), params,
                                     witness={"convolution": list(convolution.values)})

    def verify_factor_nesting(self, cc: CubicCoupling, d: int) -> CheckResult:
        """F_{d−1} ⊑ F_d"""
        lower = self.fourier_factor(cc, d)
        upper = self.fourier_factor(cc, d + 1)
        return CheckResult.from_bool("factor_nesting", upper.refines(lower), {"d": d},
                                     {"lower_blocks": len(lower), "upper_blocks": len(upper)})

    def verify_factor_meet_identity(self, cc: CubicCoupling, d: int) -> CheckResult:
        """(F_{d−1})_{0^d} = A_{0^d} ∧ (F_{d−1})_{K_d}，在 μ^⟦d⟧ 的支撑上比较"""
        factor = self.fourier_factor(cc, d)
        mu = cc.measure(d)
        space = mu.support_space()
        lifted_root = Partition.from_labels(space, lambda key: factor.block_index(key[0]))
        lifted_corner = Partition.from_labels(space, lambda key: tuple(factor.block_index(x) for x in key[1:]))
        right = meet(mu.coordinate_partition(vertices(d)[:1], space), lifted_corner)
        return CheckResult.from_bool("factor_meet_identity", lifted_root == right, {"d": d},
                                     {"blocks": len(lifted_root)})

    def verify_characteristic_factor(self, cc: CubicCoupling, d: int, functions: List[FunctionOnSpace]) -> CheckResult:
        """对一批函数检查 ‖f‖_{U^d} = 0 ⇔ E(f|F_{d−1}) = 0"""
        factor = self.fourier_factor(cc, d)
        for k, f in enumerate(functions):
            if not self.zero_norm_projection_check(cc, d, f, factor):
                return CheckResult.from_bool("characteristic_factor", False, {"d": d},
                                             {"checked": k + 1}, {"function": list(f.values)})
        return CheckResult.from_bool("characteristic_factor", True, {"d": d},
                                     {"checked": len(functions), "blocks": len(factor)})


