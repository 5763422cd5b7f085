# -*- coding: utf-8 -*-
"""
有限阿贝尔群的立方体群服务

群元素是按循环因子取模的整数元组；特征标以有理转数记录，湮灭判定全部在 Q/Z 中精确完成。
"""

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..config import Config, check_cap
from ..core.couplings import Coupling
from ..core.cube_combinatorics import Face, Vertex, corner, faces, height, vertices
from ..core.finite_measure import FiniteProbSpace, FunctionOnSpace
from ..core.scalars import Scalar, phase_value
from ..exceptions import DimensionError
from ..utils.logger import get_logger
from .cubic_coupling import CubicCoupling
from .reports import CheckResult

Element = Tuple[int, ...]
CubePoint = Tuple[Element, ...]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z_{N_1} × ⋯ × Z_{N_r}"""

    cyclic_orders: Tuple[int, ...]

    def __post_init__(self) -> None:
        orders = tuple(int(order) for order in self.cyclic_orders)
        if not orders or any(order < 1 for order in orders):
            raise ValueError(f"循环因子的阶必须是正整数: {self.cyclic_orders}")
        object.__setattr__(self, 'cyclic_orders', orders)

    @classmethod
    def cyclic(cls, order: int) -> 'FiniteAbelianGroup':
        return cls((order,))

    def __str__(self) -> str:
        return "×".join(f"Z_{order}" for order in self.cyclic_orders)

    @property
    def order(self) -> int:
        result = 1
        for order in self.cyclic_orders:
            result *= order
        return result

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @property
    def zero(self) -> Element:
        return tuple([0] * self.rank)

    def elements(self) -> List[Element]:
        return [tuple(x) for x in itertools.product(*(range(order) for order in self.cyclic_orders))]

    def normalize(self, x: Sequence[int]) -> Element:
        if len(x) != self.rank:
            raise DimensionError(f"元素 {tuple(x)} 的分量数不是 {self.rank}")
        return tuple(int(a) % order for a, order in zip(x, self.cyclic_orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % order for a, b, order in zip(x, y, self.cyclic_orders))

    def neg(self, x: Element) -> Element:
        return tuple(-a % order for a, order in zip(x, self.cyclic_orders))

    def sub(self, x: Element, y: Element) -> Element:
        return self.add(x, self.neg(y))

    def scale(self, k: int, x: Element) -> Element:
        return tuple(k * a % order for a, order in zip(x, self.cyclic_orders))

    def as_space(self) -> FiniteProbSpace:
        """以 Haar（均匀）测度看成概率空间"""
        return FiniteProbSpace.uniform(self.elements())

    def characters(self) -> List['Character']:
        """对偶群 Ẑ（与 Z 同构）"""
        return [Character(self, x) for x in self.elements()]


@dataclass(frozen=True)
class Character:
    """χ(x) = exp(2πi Σ k_j x_j / N_j)"""

    group: FiniteAbelianGroup
    frequency: Element

    def __post_init__(self) -> None:
        object.__setattr__(self, 'frequency', self.group.normalize(self.frequency))

    def phase(self, x: Element) -> Fraction:
        """转数 Σ k_j x_j / N_j（mod 1）"""
        total = sum((Fraction(k * a, order) for k, a, order in zip(self.frequency, x, self.group.cyclic_orders)),
                    Fraction(0))
        return total % 1

    def __call__(self, x: Element) -> Scalar:
        return phase_value(self.phase(x))

    def __mul__(self, other: 'Character') -> 'Character':
        return Character(self.group, self.group.add(self.frequency, other.frequency))

    def conj(self) -> 'Character':
        return Character(self.group, self.group.neg(self.frequency))

    @property
    def is_trivial(self) -> bool:
        return self.frequency == self.group.zero

    def as_function(self, space: Optional[FiniteProbSpace] = None) -> FunctionOnSpace:
        space = space or self.group.as_space()
        return FunctionOnSpace(space, [self(x) for x in space.atoms])


@dataclass(frozen=True)
class CubeGroupSpec:
    """C^n(D_k(Z))，rooted 时为 C^n_0(D_k(Z))"""

    group: FiniteAbelianGroup
    n: int
    k: int
    rooted: bool = False

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DimensionError(f"立方体维数不能为负: {self.n}")

    def describe(self) -> Dict[str, Any]:
        return {"group": str(self.group), "n": self.n, "k": self.k, "rooted": self.rooted}


CharacterMap = Mapping[Vertex, Character]


def _alternating_sum(group: FiniteAbelianGroup, face: Face, values: Mapping[Vertex, Element]) -> Element:
    # σ_{dim}(q∘φ)：按定义域顶点的高度交替求和
    phi = face.face_map()
    total = group.zero
    for w in vertices(face.dimension):
        x = values[phi(w)]
        total = group.add(total, x if height(w) % 2 == 0 else group.neg(x))
    return total


def _face_conditions(n: int, dim: int, rooted: bool) -> List[Face]:
    if dim > n:
        return []
    result = faces(n, dim)
    if rooted:
        origin = tuple([0] * n)
        result = [face for face in result if not face.contains(origin)]
    return result


class AbelianCubeService:
    """标准立方体耦合、k 次立方体群与湮灭判据"""

    def __init__(self):
        self.logger = get_logger(__name__)

    # ------------------------------------------------------------ 标准立方体

    def cube_points(self, group: FiniteAbelianGroup, n: int) -> Counter:
        """参数 (x, h_1, …, h_n) 下立方体 (x + Σ v_i h_i)_v 的出现次数"""
        check_cap(group.order ** (n + 1), Config.MAX_CUBE_ENUMERATION, "立方体参数")
        verts = vertices(n)
        counts: Counter = Counter()
        for params in itertools.product(group.elements(), repeat=n + 1):
            x, steps = params[0], params[1:]
            point = []
            for v in verts:
                y = x
                for bit, h in zip(v, steps):
                    if bit:
                        y = group.add(y, h)
                point.append(y)
            counts[tuple(point)] += 1
        return counts

    def standard_cube_coupling(self, group: FiniteAbelianGroup, n: int,
                               space: Optional[FiniteProbSpace] = None) -> Coupling:
        """
        标准立方体群上的均匀测度

        Args:
            group: 有限阿贝尔群 Z
            n: 立方体维数
            space: 底空间（默认 group.as_space()）

        Returns:
            ⟦n⟧ 上的耦合，每个立方体质量相同

        Raises:
            CapExceededError: |Z|^{n+1} 超出上限
        """
        space = space or group.as_space()
        counts = self.cube_points(group, n)
        total = sum(counts.values())
        mass = {point: Fraction(count, total) for point, count in counts.items()}
        self.logger.debug(f"标准立方体耦合 {group}, n={n}: {len(mass)} 个立方体")
        return Coupling(space, vertices(n), mass, validate=False)

    def standard_cubic_coupling(self, group: FiniteAbelianGroup, n_max: int = Config.DEFAULT_NMAX) -> CubicCoupling:
        space = group.as_space()
        return CubicCoupling(space, lambda n: self.standard_cube_coupling(group, n, space), n_max,
                             name=f"standard({group})", ergodic=True)

    # ------------------------------------------------------------ k 次立方体群

    def is_cube(self, q: Mapping[Vertex, Element], spec: CubeGroupSpec) -> bool:
        """q ∈ C^n(D_k(Z))（rooted 时还要求 q(0^n) = 0）"""
        group, n = spec.group, spec.n
        values = {v: group.normalize(q[v]) for v in vertices(n)}
        if spec.rooted and values[tuple([0] * n)] != group.zero:
            return False
        if spec.k < 0:
            return all(x == group.zero for x in values.values())
        return all(_alternating_sum(group, face, values) == group.zero
                   for face in _face_conditions(n, spec.k + 1, False))

    def degree_cube_group(self, spec: CubeGroupSpec) -> List[CubePoint]:
        """
        枚举 C^n(D_k(Z))

        元素按 vertices(n) 的顺序写成元组

        Raises:
            CapExceededError: |Z|^{2^n} 超出上限（此时仍可用 is_cube 判定成员）
        """
        group, verts = spec.group, vertices(spec.n)
        if spec.k < 0:
            return [tuple([group.zero] * len(verts))]
        check_cap(group.order ** len(verts), Config.MAX_CUBE_ENUMERATION, "k 次立方体群")
        result = []
        for point in itertools.product(group.elements(), repeat=len(verts)):
            if self.is_cube(dict(zip(verts, point)), spec):
                result.append(point)
        self.logger.debug(f"C^{spec.n}(D_{spec.k}({group})): {len(result)} 个元素")
        return result

    # ------------------------------------------------------------ 湮灭判据

    def _domain(self, spec: CubeGroupSpec) -> List[Vertex]:
        return corner(spec.n) if spec.rooted else vertices(spec.n)

    def pairing_phase(self, eta: CharacterMap, q: Sequence[Element], spec: CubeGroupSpec) -> Fraction:
        """∏ C^{|v|} η_v(q(v)) 的转数"""
        values = dict(zip(vertices(spec.n), q))
        total = Fraction(0)
        for v in self._domain(spec):
            phase = eta[v].phase(values[v])
            total += phase if height(v) % 2 == 0 else -phase
        return total % 1

    def annihilates(self, eta: CharacterMap, spec: CubeGroupSpec,
                    cube_group: Optional[List[CubePoint]] = None) -> bool:
        """η 是否湮灭（枚举出的）立方体群"""
        self._check_domain(eta, spec)
        cube_group = self.degree_cube_group(spec) if cube_group is None else cube_group
        return all(self.pairing_phase(eta, q, spec) == 0 for q in cube_group)

    def dual_criterion(self, eta: CharacterMap, spec: CubeGroupSpec) -> bool:
        """
        对偶判据：η ∈ C^n(D_{n−k−1}(Ẑ))

        rooted 时只检查完全落在 K_n 内的 (n−k)-维面
        """
        self._check_domain(eta, spec)
        group = spec.group
        j = spec.n - spec.k - 1
        values = {v: eta[v].frequency for v in self._domain(spec)}
        if j < 0:
            return all(x == group.zero for x in values.values())
        return all(_alternating_sum(group, face, values) == group.zero
                   for face in _face_conditions(spec.n, j + 1, spec.rooted))

    def _check_domain(self, eta: CharacterMap, spec: CubeGroupSpec) -> None:
        missing = [v for v in self._domain(spec) if v not in eta]
        if missing:
            raise DimensionError(f"η 在顶点 {missing[0]} 上没有定义")

    def character_assignments(self, spec: CubeGroupSpec) -> Iterable[Dict[Vertex, Character]]:
        domain = self._domain(spec)
        characters = spec.group.characters()
        check_cap(len(characters) ** len(domain), Config.MAX_CUBE_ENUMERATION, "特征标赋值")
        for choice in itertools.product(characters, repeat=len(domain)):
            yield dict(zip(domain, choice))

    def cross_check(self, spec: CubeGroupSpec) -> CheckResult:
        """对全部特征标赋值比较 annihilates 与 dual_criterion"""
        cube_group = self.degree_cube_group(spec)
        checked = 0
        annihilating = 0
        for eta in self.character_assignments(spec):
            checked += 1
            direct = self.annihilates(eta, spec, cube_group)
            annihilating += direct
            if direct != self.dual_criterion(eta, spec):
                witness = {"".join(map(str, v)): list(chi.frequency) for v, chi in eta.items()}
                self.logger.warning(f"湮灭判据不一致: {spec.describe()}")
                return CheckResult.from_bool("annihilator_criterion", False, spec.describe(),
                                             {"checked": checked}, {"eta": witness, "annihilates": direct})
        return CheckResult.from_bool("annihilator_criterion", True, spec.describe(),
                                     {"checked": checked, "annihilating": annihilating,
                                      "cube_group_order": len(cube_group)})

    # ------------------------------------------------------------ 函数

    def function_from_values(self, group: FiniteAbelianGroup, values: Mapping[Element, Scalar],
                             space: Optional[FiniteProbSpace] = None) -> FunctionOnSpace:
        """群上的取值表 → 函数（未给出的元素取 0）"""
        space = space or group.as_space()
        normalized = {group.normalize(x): value for x, value in values.items()}
        return FunctionOnSpace.from_mapping(space, normalized)

    def function_from_list(self, group: FiniteAbelianGroup, values: Sequence[Scalar],
                           space: Optional[FiniteProbSpace] = None) -> FunctionOnSpace:
        """按 group.elements() 的顺序给出取值"""
        elements = group.elements()
        if len(values) != len(elements):
            raise DimensionError(f"取值个数 {len(values)} 与群的阶 {len(elements)} 不符")
        return self.function_from_values(group, dict(zip(elements, values)), space)
