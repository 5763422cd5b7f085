# -*- coding: utf-8 -*-
"""
有限概率空间与 σ-代数格

σ-代数用支撑原子的划分表示：零测原子不进入任何块，于是“模零测集”的关系都成了精确的集合关系。
"""

from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..config import Config
from ..exceptions import SpaceMismatchError
from ..utils.logger import get_logger
from .scalars import Scalar, is_exact, is_zero, real_part, scalar_eq, to_float

logger = get_logger(__name__)

Atom = Hashable


class FiniteProbSpace:
    """带权有限原子集 (Ω, λ)"""

    def __init__(self, atoms: Sequence[Atom], weights: Sequence[Scalar]):
        if len(atoms) != len(weights):
            raise ValueError("原子与权重个数不一致")
        self.atoms: Tuple[Atom, ...] = tuple(atoms)
        self.weights: Tuple[Scalar, ...] = tuple(weights)
        self._index: Dict[Atom, int] = {atom: i for i, atom in enumerate(self.atoms)}
        if len(self._index) != len(self.atoms):
            raise ValueError("原子必须互不相同")

        for atom, weight in zip(self.atoms, self.weights):
            if real_part(weight) < 0 or not is_zero(weight - real_part(weight)):
                raise ValueError(f"原子 {atom!r} 的权重无效: {weight}")
        total = sum(self.weights, Fraction(0))
        if not scalar_eq(total, 1):
            raise ValueError(f"权重之和必须为 1，实际为 {total}")

    @classmethod
    def uniform(cls, atoms: Sequence[Atom]) -> 'FiniteProbSpace':
        atoms = list(atoms)
        if not atoms:
            raise ValueError("空间至少需要一个原子")
        return cls(atoms, [Fraction(1, len(atoms))] * len(atoms))

    @classmethod
    def from_mapping(cls, weights: Mapping[Atom, Scalar]) -> 'FiniteProbSpace':
        return cls(list(weights), list(weights.values()))

    def __len__(self) -> int:
        return len(self.atoms)

    def __contains__(self, atom: object) -> bool:
        return atom in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteProbSpace):
            return NotImplemented
        return self is other or (self.atoms == other.atoms and self.weights == other.weights)

    def __hash__(self) -> int:
        return hash(self.atoms)

    def __repr__(self) -> str:
        return f"FiniteProbSpace({len(self.atoms)} atoms)"

    def index(self, atom: Atom) -> int:
        try:
            return self._index[atom]
        except KeyError:
            raise SpaceMismatchError(f"原子 {atom!r} 不在空间中")

    def weight(self, atom: Atom) -> Scalar:
        return self.weights[self.index(atom)]

    @cached_property
    def support_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, weight in enumerate(self.weights) if not is_zero(weight))

    def support(self) -> List[Atom]:
        return [self.atoms[i] for i in self.support_indices]

    @property
    def is_exact(self) -> bool:
        return all(is_exact(weight) for weight in self.weights)

    def quotient(self, partition: 'Partition') -> 'FiniteProbSpace':
        """商空间：原子为块编号，权重为块的总测度"""
        _check_space(self, partition.space)
        return FiniteProbSpace(list(range(len(partition))), partition.block_weights())


def _check_space(a: FiniteProbSpace, b: FiniteProbSpace) -> None:
    if a is not b and a != b:
        raise SpaceMismatchError("两个对象不在同一个概率空间上")


def components(size: int, edges: Iterable[Tuple[int, int]]) -> List[int]:
    """
    无向图的连通分支标号

    Args:
        size: 顶点数
        edges: 边 (i, j)

    Returns:
        每个顶点所在分支的编号
    """
    if size == 0:
        return []
    rows, cols = [], []
    for i, j in edges:
        rows.append(i)
        cols.append(j)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    _, labels = connected_components(graph, directed=False)
    return [int(label) for label in labels]


class Partition:
    """有限空间上的 σ-代数，表示为支撑原子的划分"""

    def __init__(self, space: FiniteProbSpace, blocks: Iterable[Iterable[Atom]]):
        self.space = space
        support = set(space.support_indices)
        seen: Dict[int, int] = {}
        canonical = []
        for block in blocks:
            indices = sorted({space.index(atom) for atom in block} & support)
            if not indices:
                continue
            for i in indices:
                if i in seen:
                    raise ValueError(f"原子 {space.atoms[i]!r} 同时出现在两个块中")
                seen[i] = len(canonical)
            canonical.append(tuple(indices))
        if set(seen) != support:
            missing = sorted(support - set(seen))
            raise ValueError(f"划分没有覆盖支撑，缺少原子 {space.atoms[missing[0]]!r}")

        canonical.sort(key=lambda block: block[0])
        self._blocks: Tuple[Tuple[int, ...], ...] = tuple(canonical)
        self._labels: Dict[int, int] = {i: k for k, block in enumerate(self._blocks) for i in block}

    @classmethod
    def discrete(cls, space: FiniteProbSpace) -> 'Partition':
        return cls(space, [[atom] for atom in space.support()])

    @classmethod
    def trivial(cls, space: FiniteProbSpace) -> 'Partition':
        return cls(space, [space.support()])

    @classmethod
    def from_labels(cls, space: FiniteProbSpace, label: Union[Callable[[Atom], Hashable], Mapping[Atom, Hashable]]) -> 'Partition':
        """按标签函数（或映射）分块"""
        lookup = label.__getitem__ if isinstance(label, Mapping) else label
        groups: Dict[Hashable, List[Atom]] = {}
        for atom in space.support():
            groups.setdefault(lookup(atom), []).append(atom)
        return cls(space, groups.values())

    @classmethod
    def _from_index_labels(cls, space: FiniteProbSpace, labels: Mapping[int, Hashable]) -> 'Partition':
        groups: Dict[Hashable, List[Atom]] = {}
        for i, label in labels.items():
            groups.setdefault(label, []).append(space.atoms[i])
        return cls(space, groups.values())

    def __len__(self) -> int:
        return len(self._blocks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.space == other.space and self._blocks == other._blocks

    def __hash__(self) -> int:
        return hash(self._blocks)

    def __repr__(self) -> str:
        return f"Partition({self.blocks()})"

    @property
    def index_blocks(self) -> Tuple[Tuple[int, ...], ...]:
        return self._blocks

    def blocks(self) -> List[List[Atom]]:
        return [[self.space.atoms[i] for i in block] for block in self._blocks]

    def block_index(self, atom: Atom) -> int:
        """原子所在块的编号（零测原子返回 -1）"""
        return self._labels.get(self.space.index(atom), -1)

    def block_weights(self) -> List[Scalar]:
        return [sum((self.space.weights[i] for i in block), Fraction(0)) for block in self._blocks]

    def refines(self, other: 'Partition') -> bool:
        """self 是否比 other 细（other 的每个块都是 self 的块之并）"""
        _check_space(self.space, other.space)
        return all(len({other._labels[i] for i in block}) == 1 for block in self._blocks)

    def is_discrete(self) -> bool:
        return all(len(block) == 1 for block in self._blocks)

    def is_trivial(self) -> bool:
        return len(self._blocks) <= 1

    def indicator(self, k: int) -> 'FunctionOnSpace':
        return FunctionOnSpace.indicator(self.space, [self.space.atoms[i] for i in self._blocks[k]])


class FunctionOnSpace:
    """有限空间上的（复值）函数"""

    def __init__(self, space: FiniteProbSpace, values: Sequence[Scalar]):
        if len(values) != len(space):
            raise ValueError(f"函数值个数 {len(values)} 与原子个数 {len(space)} 不符")
        self.space = space
        self.values: Tuple[Scalar, ...] = tuple(values)

    @classmethod
    def from_mapping(cls, space: FiniteProbSpace, mapping: Mapping[Atom, Scalar], default: Scalar = 0) -> 'FunctionOnSpace':
        return cls(space, [mapping.get(atom, default) for atom in space.atoms])

    @classmethod
    def constant(cls, space: FiniteProbSpace, value: Scalar = 1) -> 'FunctionOnSpace':
        return cls(space, [value] * len(space))

    @classmethod
    def indicator(cls, space: FiniteProbSpace, atoms: Iterable[Atom]) -> 'FunctionOnSpace':
        members = {space.index(atom) for atom in atoms}
        return cls(space, [Fraction(1) if i in members else Fraction(0) for i in range(len(space))])

    def __call__(self, atom: Atom) -> Scalar:
        return self.values[self.space.index(atom)]

    def __repr__(self) -> str:
        return f"FunctionOnSpace({list(self.values)})"

    def _combine(self, other: Union['FunctionOnSpace', Scalar], op: Callable[[Scalar, Scalar], Scalar]) -> 'FunctionOnSpace':
        if isinstance(other, FunctionOnSpace):
            _check_space(self.space, other.space)
            return FunctionOnSpace(self.space, [op(a, b) for a, b in zip(self.values, other.values)])
        return FunctionOnSpace(self.space, [op(a, other) for a in self.values])

    def __add__(self, other: Union['FunctionOnSpace', Scalar]) -> 'FunctionOnSpace':
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: Union['FunctionOnSpace', Scalar]) -> 'FunctionOnSpace':
        return self._combine(other, lambda a, b: a - b)

    def __mul__(self, other: Union['FunctionOnSpace', Scalar]) -> 'FunctionOnSpace':
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self) -> 'FunctionOnSpace':
        return FunctionOnSpace(self.space, [-a for a in self.values])

    def conj(self) -> 'FunctionOnSpace':
        """共轭算子 C"""
        return FunctionOnSpace(self.space, [a.conjugate() for a in self.values])

    def conj_power(self, times: int) -> 'FunctionOnSpace':
        """C^times"""
        return self.conj() if times % 2 else self

    def mean(self) -> Scalar:
        """∫ f dλ"""
        total: Scalar = Fraction(0)
        for weight, value in zip(self.space.weights, self.values):
            if not is_zero(weight):
                total = total + weight * value
        return total

    def norm2_squared(self) -> Scalar:
        return (self * self.conj()).mean()

    @cached_property
    def sup_norm(self) -> float:
        return max((abs(to_float(self.values[i])) for i in self.space.support_indices), default=0.0)

    def equals(self, other: 'FunctionOnSpace', tol: Optional[float] = None) -> bool:
        """在支撑上逐点相等"""
        _check_space(self.space, other.space)
        return all(scalar_eq(self.values[i], other.values[i], tol) for i in self.space.support_indices)

    def is_zero(self, tol: Optional[float] = None) -> bool:
        return all(is_zero(self.values[i], tol) for i in self.space.support_indices)

    def is_measurable(self, partition: Partition, tol: Optional[float] = None) -> bool:
        """在划分的每个块上取常值"""
        _check_space(self.space, partition.space)
        for block in partition.index_blocks:
            first = self.values[block[0]]
            if not all(scalar_eq(self.values[i], first, tol) for i in block[1:]):
                return False
        return True


# ---------------------------------------------------------------- 格运算

def join(p: Partition, q: Partition) -> Partition:
    """P ∨ Q：公共加细"""
    _check_space(p.space, q.space)
    labels = {i: (p._labels[i], q._labels[i]) for i in p.space.support_indices}
    return Partition._from_index_labels(p.space, labels)


def meet(p: Partition, q: Partition) -> Partition:
    """
    P ∧ Q：块重叠图的连通分支

    每个块既是 P 块之并又是 Q 块之并，且是满足这一点的最细划分
    """
    _check_space(p.space, q.space)
    support = p.space.support_indices
    position = {i: k for k, i in enumerate(support)}
    edges = []
    for partition in (p, q):
        for block in partition.index_blocks:
            edges.extend((position[a], position[b]) for a, b in zip(block, block[1:]))
    labels = components(len(support), edges)
    return Partition._from_index_labels(p.space, {i: labels[position[i]] for i in support})


def cond_expect(f: FunctionOnSpace, partition: Partition) -> FunctionOnSpace:
    """E(f|P)：块内加权平均，零测原子取 0"""
    _check_space(f.space, partition.space)
    values: List[Scalar] = [Fraction(0)] * len(f.space)
    weights = f.space.weights
    for block in partition.index_blocks:
        total = sum((weights[i] for i in block), Fraction(0))
        mass: Scalar = Fraction(0)
        for i in block:
            mass = mass + weights[i] * f.values[i]
        average = mass / total
        for i in block:
            values[i] = average
    return FunctionOnSpace(f.space, values)


def indicator_basis(partition: Partition) -> List[FunctionOnSpace]:
    return [partition.indicator(k) for k in range(len(partition))]


def cond_independent(p0: Partition, p1: Partition, b: Partition) -> bool:
    """
    P0 与 P1 关于 B 条件独立

    对 P1 的每个块示性函数 f 检查 E(f|P0∨B) = E(f|B)
    """
    _check_space(p0.space, p1.space)
    _check_space(p0.space, b.space)
    refined = join(p0, b)
    for f in indicator_basis(p1):
        if not cond_expect(f, refined).equals(cond_expect(f, b)):
            return False
    return True


def cond_independent_pair(p0: Partition, p1: Partition) -> bool:
    """
    P0 ⫫ P1：E(E(f|P_i)|P_{1−i}) = E(f|P0∧P1)

    在两侧的块示性函数上检查两个方向
    """
    _check_space(p0.space, p1.space)
    common = meet(p0, p1)
    for source, target in ((p0, p1), (p1, p0)):
        for g in indicator_basis(source):
            if not cond_expect(g, target).equals(cond_expect(g, common)):
                return False
    return True


def cond_independent_one_sided(p0: Partition, p1: Partition) -> bool:
    """
    单侧判据：每个 P0 可测且 E(f|P0∧P1) = 0 的 f 都满足 E(f|P1) = 0

    基取自 P0∧P1 每个块内相邻 P0 块的规范化示性函数之差
    """
    _check_space(p0.space, p1.space)
    common = meet(p0, p1)
    weights = p0.space.weights
    grouped: Dict[int, List[Tuple[int, ...]]] = {}
    for block in p0.index_blocks:
        grouped.setdefault(common._labels[block[0]], []).append(block)
    for blocks in grouped.values():
        first = blocks[0]
        first_weight = sum((weights[i] for i in first), Fraction(0))
        for other in blocks[1:]:
            other_weight = sum((weights[i] for i in other), Fraction(0))
            values: List[Scalar] = [Fraction(0)] * len(p0.space)
            for i in other:
                values[i] = 1 / other_weight
            for i in first:
                values[i] = -1 / first_weight
            if not cond_expect(FunctionOnSpace(p0.space, values), p1).is_zero():
                return False
    return True


def independent(p0: Partition, p1: Partition) -> bool:
    """λ(A∩B) = λ(A)λ(B) 对全部块成立"""
    _check_space(p0.space, p1.space)
    weights = p0.space.weights
    joint: Dict[Tuple[int, int], Scalar] = {}
    for i in p0.space.support_indices:
        key = (p0._labels[i], p1._labels[i])
        joint[key] = joint.get(key, Fraction(0)) + weights[i]
    w0 = p0.block_weights()
    w1 = p1.block_weights()
    for a in range(len(w0)):
        for b in range(len(w1)):
            if not scalar_eq(joint.get((a, b), Fraction(0)), w0[a] * w1[b]):
                return False
    return True


def span_rank(functions: Sequence[FunctionOnSpace]) -> int:
    """函数组在支撑上张成的线性空间维数"""
    if not functions:
        return 0
    support = functions[0].space.support_indices
    matrix = np.array([[complex(to_float(f.values[i])) for i in support] for f in functions])
    return int(np.linalg.matrix_rank(matrix, tol=Config.FLOAT_TOLERANCE))


def intersection_dimension(p0: Partition, p1: Partition) -> int:
    """dim(L²(P0) ∩ L²(P1)) = dim L²(P0) + dim L²(P1) − dim(L²(P0) + L²(P1))"""
    _check_space(p0.space, p1.space)
    basis0 = indicator_basis(p0)
    basis1 = indicator_basis(p1)
    return len(basis0) + len(basis1) - span_rank(basis0 + basis1)
