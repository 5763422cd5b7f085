# -*- coding: utf-8 -*-
"""
有限空间上的耦合

耦合以稀疏字典存储：支撑元组（按标签顺序排列的原子）→ 质量。
每个标签上的边缘必须等于底空间的权重。
"""

import itertools
from collections import defaultdict
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..config import Config, check_cap
from ..exceptions import CapExceededError, CouplingError, SpaceMismatchError
from ..utils.logger import get_logger
from .finite_measure import Atom, FiniteProbSpace, FunctionOnSpace, Partition, components
from .scalars import Scalar, is_zero, product, scalar_eq

logger = get_logger(__name__)

Label = Hashable
AtomTuple = Tuple[Atom, ...]


class Coupling:
    """以有限标签集 S 为指标的耦合 μ ∈ Coup(Ω, S)"""

    def __init__(self, base: FiniteProbSpace, labels: Sequence[Label], mass: Mapping[AtomTuple, Scalar],
                 validate: bool = True):
        self.base = base
        self.labels: Tuple[Label, ...] = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise CouplingError(f"标签必须互不相同: {self.labels}")
        self._label_index = {label: k for k, label in enumerate(self.labels)}

        check_cap(len(mass), Config.MAX_SUPPORT, "耦合支撑")
        order = {atom: i for i, atom in enumerate(base.atoms)}
        cleaned = {}
        for key, value in mass.items():
            if not is_zero(value):
                cleaned[tuple(key)] = value
        try:
            keys = sorted(cleaned, key=lambda key: tuple(order[atom] for atom in key))
        except KeyError as e:
            raise CouplingError(f"原子 {e.args[0]!r} 不在底空间中")
        self._mass: Dict[AtomTuple, Scalar] = {key: cleaned[key] for key in keys}

        if validate:
            self._validate()

    def _validate(self) -> None:
        width = len(self.labels)
        total: Scalar = Fraction(0)
        for key, value in self._mass.items():
            if len(key) != width:
                raise CouplingError(f"支撑元组 {key} 的长度不是 {width}", witness=key)
            if not isinstance(value, (int, float, Fraction)) or value < 0:
                raise CouplingError(f"支撑元组 {key} 的质量无效: {value}", witness=key)
            total = total + value
        if not scalar_eq(total, 1):
            raise CouplingError(f"质量之和必须为 1，实际为 {total}")
        for label in self.labels:
            marginal = self.marginal(label)
            for atom, weight in zip(self.base.atoms, self.base.weights):
                if not scalar_eq(marginal.get(atom, Fraction(0)), weight):
                    raise CouplingError(f"标签 {label!r} 的边缘在原子 {atom!r} 处与底测度不符",
                                        witness=(label, atom))

    # ------------------------------------------------------------ 访问

    @property
    def mass(self) -> Mapping[AtomTuple, Scalar]:
        return MappingProxyType(self._mass)

    def items(self) -> Iterable[Tuple[AtomTuple, Scalar]]:
        return self._mass.items()

    def __len__(self) -> int:
        return len(self._mass)

    def __repr__(self) -> str:
        return f"Coupling(labels={self.labels}, support={len(self._mass)})"

    def label_index(self, label: Label) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise CouplingError(f"标签 {label!r} 不在指标集中", witness=label)

    def positions(self, labels: Iterable[Label]) -> List[int]:
        return [self.label_index(label) for label in labels]

    def marginal(self, label: Label) -> Dict[Atom, Scalar]:
        k = self.label_index(label)
        result: Dict[Atom, Scalar] = defaultdict(Fraction)
        for key, value in self._mass.items():
            result[key[k]] += value
        return dict(result)

    def project(self, labels: Sequence[Label]) -> Dict[AtomTuple, Scalar]:
        """μ_T：投影到标签子集（按给定顺序）"""
        positions = self.positions(labels)
        result: Dict[AtomTuple, Scalar] = defaultdict(Fraction)
        for key, value in self._mass.items():
            result[tuple(key[p] for p in positions)] += value
        return dict(result)

    def support_space(self) -> FiniteProbSpace:
        """以支撑元组为原子、质量为权重的概率空间"""
        return FiniteProbSpace(list(self._mass), list(self._mass.values()))

    def coordinate_partition(self, labels: Sequence[Label], space: Optional[FiniteProbSpace] = None) -> Partition:
        """A^S_T 在支撑空间上对应的划分"""
        space = space or self.support_space()
        positions = self.positions(labels)
        return Partition.from_labels(space, lambda key: tuple(key[p] for p in positions))

    def relabel(self, mapping: Mapping[Label, Label]) -> 'Coupling':
        labels = [mapping.get(label, label) for label in self.labels]
        return Coupling(self.base, labels, self._mass, validate=False)

    def difference_witness(self, other: 'Coupling') -> Optional[AtomTuple]:
        """按规范顺序返回第一个质量不同的支撑元组"""
        if self.labels != other.labels:
            raise CouplingError(f"标签集不同: {self.labels} ≠ {other.labels}")
        for key in list(self._mass) + [k for k in other._mass if k not in self._mass]:
            if not scalar_eq(self._mass.get(key, Fraction(0)), other._mass.get(key, Fraction(0))):
                return key
        return None

    def equals(self, other: 'Coupling') -> bool:
        if self.base != other.base or self.labels != other.labels:
            return False
        return self.difference_witness(other) is None


# ---------------------------------------------------------------- 构造

def product_coupling(base: FiniteProbSpace, labels: Sequence[Label]) -> Coupling:
    """独立耦合 λ^S"""
    support = base.support()
    check_cap(len(support) ** len(labels), Config.DENSE_COUPLING_CAP, "乘积耦合")
    mass = {}
    for key in itertools.product(support, repeat=len(labels)):
        mass[key] = product(base.weight(atom) for atom in key)
    return Coupling(base, labels, mass, validate=False)


def diagonal_coupling(base: FiniteProbSpace, labels: Sequence[Label]) -> Coupling:
    """对角耦合：全部坐标相同"""
    mass = {tuple([atom] * len(labels)): base.weight(atom) for atom in base.support()}
    return Coupling(base, labels, mass, validate=False)


def relative_square(space: FiniteProbSpace, partition: Partition, labels: Sequence[Label] = ("a", "b")) -> Coupling:
    """
    λ 关于 σ-代数 P 的相对平方

    μ(x, y) = λ(x)λ(y)/λ(B)，其中 x, y 同属块 B
    """
    if partition.space != space:
        raise SpaceMismatchError("划分不在给定空间上")
    mass = {}
    for block, block_weight in zip(partition.blocks(), partition.block_weights()):
        for x in block:
            for y in block:
                mass[(x, y)] = space.weight(x) * space.weight(y) / block_weight
    return Coupling(space, labels, mass, validate=False)


# ---------------------------------------------------------------- 基本运算

FunctionSystem = Mapping[Label, FunctionOnSpace]


def xi(mu: Coupling, system: FunctionSystem) -> Scalar:
    """ξ(μ, F) = ∫ ∏ f_v∘p_v dμ"""
    if set(system) != set(mu.labels):
        raise CouplingError("函数组与耦合的指标集不一致")
    functions = [system[label] for label in mu.labels]
    for f in functions:
        if f.space != mu.base:
            raise SpaceMismatchError("函数不在耦合的底空间上")
    total: Scalar = Fraction(0)
    for key, value in mu.items():
        total = total + value * product(f(atom) for f, atom in zip(functions, key))
    return total


def subcoupling(mu: Coupling, tau: Union[Mapping[Label, Label], Sequence[Label]]) -> Coupling:
    """
    沿单射 τ: R → S 的子耦合

    Args:
        mu: 原耦合
        tau: 新标签 → 原标签的映射；给出序列时新标签与原标签相同

    Returns:
        以 R 为指标集的耦合
    """
    if not isinstance(tau, Mapping):
        tau = {label: label for label in tau}
    targets = list(tau.values())
    if len(set(targets)) != len(targets):
        raise CouplingError(f"τ 不是单射: {dict(tau)}")
    return Coupling(mu.base, list(tau), mu.project(targets), validate=False)


def factor_coupling(mu: Coupling, partition: Partition) -> Coupling:
    """因子耦合：每个坐标替换为所在块的编号"""
    if partition.space != mu.base:
        raise SpaceMismatchError("划分不在耦合的底空间上")
    quotient = mu.base.quotient(partition)
    mass: Dict[AtomTuple, Scalar] = defaultdict(Fraction)
    for key, value in mu.items():
        mass[tuple(partition.block_index(atom) for atom in key)] += value
    return Coupling(quotient, mu.labels, mass, validate=False)


def _conditional_law_is_local(mu: Coupling, t1: Sequence[Label], t2: Sequence[Label]) -> bool:
    # E(1_{x_T1=a} | A_T2) 只能依赖 x_{T1∩T2}
    common = [label for label in t2 if label in set(t1)]
    p1 = mu.positions(t1)
    p2 = mu.positions(t2)
    pc = [list(t2).index(label) for label in common]

    joint: Dict[AtomTuple, Dict[AtomTuple, Scalar]] = defaultdict(lambda: defaultdict(Fraction))
    for key, value in mu.items():
        a = tuple(key[p] for p in p1)
        b = tuple(key[p] for p in p2)
        joint[b][a] += value

    reference: Dict[AtomTuple, Dict[AtomTuple, Scalar]] = {}
    for b, row in joint.items():
        total = sum(row.values(), Fraction(0))
        law = {a: value / total for a, value in row.items()}
        c = tuple(b[k] for k in pc)
        if c not in reference:
            reference[c] = law
            continue
        expected = reference[c]
        for a in set(law) | set(expected):
            if not scalar_eq(law.get(a, Fraction(0)), expected.get(a, Fraction(0))):
                return False
    return True


def index_cond_independent(mu: Coupling, t1: Iterable[Label], t2: Iterable[Label]) -> bool:
    """
    T1 ⊥_μ T2

    对每个 A_{T1} 可测的 f，E(f|A_{T2}) 必须 A_{T1∩T2} 可测；两个方向都检查
    """
    t1, t2 = list(t1), list(t2)
    return _conditional_law_is_local(mu, t1, t2) and _conditional_law_is_local(mu, t2, t1)


def glue_cond_independent(mu: Coupling, other: Coupling, sigma: Mapping[Label, Label],
                          rename: Optional[Mapping[Label, Label]] = None) -> Coupling:
    """
    μ 与 μ′ 沿 σ: T → T′ 的条件独立耦合

    ν(s, s′) = μ(s)·μ′(s′)/μ_T(t)，其中 s 在 T 上的投影 t 经 σ 对应 s′ 在 T′ 上的投影

    Args:
        mu: 以 S 为指标的耦合
        other: 以 S′ 为指标的耦合
        sigma: T ⊂ S 到 T′ ⊂ S′ 的双射
        rename: S′∖T′ 中标签的新名字（避免与 S 冲突）

    Raises:
        CouplingError: μ_T 与 μ′_{T′} 不一致（附第一个违例柱集），或标签冲突
    """
    if mu.base != other.base:
        raise SpaceMismatchError("两个耦合的底空间不同")
    overlap = list(sigma)
    image = [sigma[label] for label in overlap]
    if len(set(image)) != len(image):
        raise CouplingError(f"σ 不是双射: {dict(sigma)}")

    left = mu.project(overlap)
    right = other.project(image)
    for cylinder in list(left) + [c for c in right if c not in left]:
        if not scalar_eq(left.get(cylinder, Fraction(0)), right.get(cylinder, Fraction(0))):
            raise CouplingError(f"重叠部分的子耦合不一致，柱集 {cylinder}", witness=cylinder)

    rename = rename or {}
    rest = [label for label in other.labels if label not in set(image)]
    new_labels = list(mu.labels) + [rename.get(label, label) for label in rest]
    if len(set(new_labels)) != len(new_labels):
        raise CouplingError(f"粘合后的标签冲突: {new_labels}")

    mu_pos = mu.positions(overlap)
    other_pos = other.positions(image)
    rest_pos = other.positions(rest)
    fibres: Dict[AtomTuple, List[Tuple[AtomTuple, Scalar]]] = defaultdict(list)
    for key, value in other.items():
        fibres[tuple(key[p] for p in other_pos)].append((tuple(key[p] for p in rest_pos), value))

    mass: Dict[AtomTuple, Scalar] = defaultdict(Fraction)
    for key, value in mu.items():
        t = tuple(key[p] for p in mu_pos)
        denominator = left[t]
        for tail, other_value in fibres.get(t, []):
            mass[key + tail] += value * other_value / denominator
    logger.debug(f"条件独立粘合: {len(mu)} × {len(other)} → {len(mass)} 个支撑点")
    return Coupling(mu.base, new_labels, mass)


def _two_labels(mu: Coupling) -> Tuple[Label, Label]:
    if len(mu.labels) != 2:
        raise CouplingError(f"需要双标签耦合，实际标签为 {mu.labels}")
    return mu.labels[0], mu.labels[1]


def idempotence_witness(mu: Coupling) -> Optional[AtomTuple]:
    """
    幂等性检验

    沿 b 把 μ 与自身条件独立地粘合得到 ν(x, x′, y)，再比较 ν 在 (a, a′) 上的子耦合与 μ；
    返回第一个不一致的支撑元组，幂等时返回 None
    """
    a, b = _two_labels(mu)
    primed = (a, "'")
    nu = glue_cond_independent(mu, mu, {b: b}, rename={a: primed})
    pair = subcoupling(nu, {a: a, b: primed})
    return mu.difference_witness(pair)


def is_idempotent(mu: Coupling) -> bool:
    return idempotence_witness(mu) is None


def recover_factor(mu: Coupling) -> Partition:
    """
    幂等耦合对应的 σ-代数：支撑二部图的连通分支

    Raises:
        CouplingError: μ 不是幂等耦合
    """
    witness = idempotence_witness(mu)
    if witness is not None:
        raise CouplingError("耦合不是幂等的，无法还原因子", witness=witness)
    space = mu.base
    support = space.support_indices
    position = {i: k for k, i in enumerate(support)}
    edges = [(position[space.index(x)], position[space.index(y)]) for x, y in mu.mass]
    labels = components(len(support), edges)
    return Partition.from_labels(space, lambda atom: labels[position[space.index(atom)]])


def completely_dependent(mu: Coupling) -> bool:
    """每个坐标都是其余坐标在支撑上的函数"""
    width = len(mu.labels)
    for k in range(width):
        seen: Dict[AtomTuple, Atom] = {}
        for key in mu.mass:
            rest = key[:k] + key[k + 1:]
            if seen.setdefault(rest, key[k]) != key[k]:
                return False
    return True


def inner_product(mu: Coupling, f: FunctionOnSpace, g: FunctionOnSpace) -> Scalar:
    """⟨f, g⟩_μ = ∫ f∘p_a · conj(g∘p_b) dμ"""
    _two_labels(mu)
    total: Scalar = Fraction(0)
    for (x, y), value in mu.items():
        total = total + value * f(x) * g(y).conjugate()
    return total


# ---------------------------------------------------------------- 局部化

def is_local(mu: Coupling, labels: Iterable[Label]) -> bool:
    """T 在 μ 中局部：对每个 v ∉ T，A_v 与 A_T 独立"""
    labels = list(labels)
    outside = [label for label in mu.labels if label not in set(labels)]
    marginal_t = mu.project(labels)
    for v in outside:
        joint = mu.project(labels + [v])
        for t, t_mass in marginal_t.items():
            for atom, weight in zip(mu.base.atoms, mu.base.weights):
                if is_zero(weight):
                    continue
                if not scalar_eq(joint.get(t + (atom,), Fraction(0)), t_mass * weight):
                    return False
    return True


def conditional_coupling(mu: Coupling, labels: Sequence[Label], condition: Iterable[AtomTuple]) -> Coupling:
    """
    条件耦合 μ(M × ·)/μ_T(M)

    Args:
        mu: 原耦合
        labels: 局部的标签子集 T
        condition: T 上的元组集合 M

    Raises:
        CouplingError: T 不是局部的，或 μ_T(M) = 0
    """
    labels = list(labels)
    if not is_local(mu, labels):
        raise CouplingError(f"标签集 {labels} 在耦合中不是局部的")
    condition = {tuple(t) for t in condition}
    positions = mu.positions(labels)
    rest = [label for label in mu.labels if label not in set(labels)]
    rest_positions = mu.positions(rest)

    selected: Dict[AtomTuple, Scalar] = defaultdict(Fraction)
    total: Scalar = Fraction(0)
    for key, value in mu.items():
        if tuple(key[p] for p in positions) in condition:
            selected[tuple(key[p] for p in rest_positions)] += value
            total = total + value
    if is_zero(total):
        raise CouplingError(f"条件集的测度为 0: {sorted(condition)}")
    return Coupling(mu.base, rest, {key: value / total for key, value in selected.items()})


def localize(mu: Coupling, labels: Sequence[Label]) -> Dict[AtomTuple, Coupling]:
    """T-局部化 x ↦ μ_x（对 μ_T 支撑中的每个 x）"""
    labels = list(labels)
    return {t: conditional_coupling(mu, labels, [t]) for t in mu.project(labels)}


def is_isomorphic(mu: Coupling, other: Coupling, sigma: Optional[Mapping[Label, Label]] = None) -> bool:
    """
    耦合同构：存在（或给定）标签双射 σ 使 μ 重新标号后等于 μ′

    Raises:
        CapExceededError: 未给出 σ 且标签超过 4 个
    """
    if mu.base != other.base or len(mu.labels) != len(other.labels):
        return False
    if sigma is not None:
        return subcoupling(mu.relabel(sigma), other.labels).equals(other)
    if len(mu.labels) > 4 and not Config.UNSAFE:
        raise CapExceededError("穷举同构仅支持至多 4 个标签", size=len(mu.labels), limit=4)
    for image in itertools.permutations(other.labels):
        if is_isomorphic(mu, other, dict(zip(mu.labels, image))):
            return True
    return False


def describe(mu: Coupling) -> Dict[str, Any]:
    """报告用的耦合摘要"""
    return {"labels": [str(label) for label in mu.labels], "support": len(mu), "atoms": len(mu.base)}
