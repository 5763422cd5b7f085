# -*- coding: utf-8 -*-
"""
离散立方体组合学

顶点是小端序比特元组：第 i 个坐标（从 0 开始）对应 v⟨i+1⟩，顶点编号为 Σ v_i·2^i。
态射以坐标范式存储：每个输出坐标取 0、1、v_i 或 1−v_i 之一。
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..config import Config, check_cap
from ..exceptions import DimensionError
from ..utils.logger import get_logger

logger = get_logger(__name__)

Vertex = Tuple[int, ...]
Trit = Tuple[int, ...]


def _check_dim(n: int, limit: int = Config.MAX_VERTEX_DIM) -> None:
    if n < 0:
        raise DimensionError(f"维数不能为负: {n}")
    check_cap(n, limit, "立方体维数")


@lru_cache(maxsize=None)
def _vertices(n: int) -> Tuple[Vertex, ...]:
    return tuple(tuple(reversed(bits)) for bits in itertools.product((0, 1), repeat=n))


def vertices(n: int) -> List[Vertex]:
    """按编号顺序列出 ⟦n⟧ 的全部顶点"""
    _check_dim(n)
    return list(_vertices(n))


def vertex_index(v: Vertex) -> int:
    return sum(bit << i for i, bit in enumerate(v))


def height(v: Vertex) -> int:
    """顶点的高度 |v|"""
    return sum(v)


def check_vertex(v: Sequence[int], n: int) -> Vertex:
    """校验顶点并返回元组形式"""
    if len(v) != n:
        raise DimensionError(f"顶点 {tuple(v)} 的维数不是 {n}")
    if any(bit not in (0, 1) for bit in v):
        raise ValueError(f"顶点坐标必须是 0 或 1: {tuple(v)}")
    return tuple(v)


def corner(n: int) -> List[Vertex]:
    """角 K_n = ⟦n⟧ ∖ {0^n}"""
    return vertices(n)[1:]


def leq(w: Vertex, v: Vertex) -> bool:
    """逐坐标 w ≤ v"""
    return all(a <= b for a, b in zip(w, v))


def parse_bits(text: str) -> Vertex:
    """把 "101" 解析为顶点 (1, 0, 1)"""
    if any(ch not in '01' for ch in text):
        raise ValueError(f"无效的顶点串: {text!r}")
    return tuple(int(ch) for ch in text)


def format_bits(v: Vertex) -> str:
    return ''.join(str(bit) for bit in v)


# ---------------------------------------------------------------- 态射

class CoordKind(str, Enum):
    """输出坐标的形式"""

    CONST0 = "0"
    CONST1 = "1"
    ID = "id"
    NEG = "neg"


@dataclass(frozen=True)
class Coord:
    """态射的一个输出坐标"""

    kind: CoordKind
    index: Optional[int] = None

    def evaluate(self, v: Vertex) -> int:
        if self.kind == CoordKind.CONST0:
            return 0
        if self.kind == CoordKind.CONST1:
            return 1
        assert self.index is not None
        bit = v[self.index]
        return bit if self.kind == CoordKind.ID else 1 - bit

    def negated(self) -> 'Coord':
        flip = {
            CoordKind.CONST0: CoordKind.CONST1,
            CoordKind.CONST1: CoordKind.CONST0,
            CoordKind.ID: CoordKind.NEG,
            CoordKind.NEG: CoordKind.ID,
        }
        return Coord(flip[self.kind], self.index)

    def __str__(self) -> str:
        if self.kind == CoordKind.CONST0:
            return "0"
        if self.kind == CoordKind.CONST1:
            return "1"
        assert self.index is not None
        name = f"v{self.index + 1}"
        return name if self.kind == CoordKind.ID else f"1-{name}"


@dataclass(frozen=True)
class CubeMorphism:
    """离散立方体态射 φ: ⟦m⟧ → ⟦n⟧"""

    domain_dim: int
    codomain_dim: int
    coords: Tuple[Coord, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.codomain_dim:
            raise DimensionError(f"坐标个数 {len(self.coords)} 与值域维数 {self.codomain_dim} 不符")
        for coord in self.coords:
            if coord.kind in (CoordKind.ID, CoordKind.NEG):
                if coord.index is None or not 0 <= coord.index < self.domain_dim:
                    raise DimensionError(f"坐标 {coord} 超出定义域维数 {self.domain_dim}")

    @classmethod
    def identity(cls, n: int) -> 'CubeMorphism':
        return cls(n, n, tuple(Coord(CoordKind.ID, i) for i in range(n)))

    def __call__(self, v: Vertex) -> Vertex:
        if len(v) != self.domain_dim:
            raise DimensionError(f"顶点 {v} 的维数不是 {self.domain_dim}")
        return tuple(coord.evaluate(v) for coord in self.coords)

    def compose(self, inner: 'CubeMorphism') -> 'CubeMorphism':
        """返回 self∘inner"""
        if inner.codomain_dim != self.domain_dim:
            raise DimensionError("复合的维数不匹配")
        coords = []
        for coord in self.coords:
            if coord.kind in (CoordKind.CONST0, CoordKind.CONST1):
                coords.append(coord)
            else:
                assert coord.index is not None
                source = inner.coords[coord.index]
                coords.append(source if coord.kind == CoordKind.ID else source.negated())
        return CubeMorphism(inner.domain_dim, self.codomain_dim, tuple(coords))

    def _usage(self) -> List[int]:
        counts = [0] * self.domain_dim
        for coord in self.coords:
            if coord.index is not None:
                counts[coord.index] += 1
        return counts

    @property
    def is_injective(self) -> bool:
        return all(count >= 1 for count in self._usage())

    @property
    def is_face_map(self) -> bool:
        return all(count == 1 for count in self._usage())

    @property
    def is_automorphism(self) -> bool:
        return self.domain_dim == self.codomain_dim and self.is_injective

    def table(self) -> Dict[Vertex, Vertex]:
        return {v: self(v) for v in vertices(self.domain_dim)}

    def image(self) -> List[Vertex]:
        return [self(v) for v in vertices(self.domain_dim)]

    def __str__(self) -> str:
        return f"({', '.join(str(c) for c in self.coords)})"


class MorphismFilter(str, Enum):
    """态射枚举的过滤条件"""

    ALL = "all"
    INJECTIVE = "injective"
    FACE_MAP = "face_map"
    AUTOMORPHISM = "automorphism"


def _coord_options(m: int) -> List[Coord]:
    options = [Coord(CoordKind.CONST0), Coord(CoordKind.CONST1)]
    for i in range(m):
        options.append(Coord(CoordKind.ID, i))
        options.append(Coord(CoordKind.NEG, i))
    return options


@lru_cache(maxsize=None)
def _enumerate(m: int, n: int, morphism_filter: MorphismFilter) -> Tuple[CubeMorphism, ...]:
    predicate = {
        MorphismFilter.ALL: lambda phi: True,
        MorphismFilter.INJECTIVE: lambda phi: phi.is_injective,
        MorphismFilter.FACE_MAP: lambda phi: phi.is_face_map,
        MorphismFilter.AUTOMORPHISM: lambda phi: phi.is_automorphism,
    }[morphism_filter]
    result = []
    for coords in itertools.product(_coord_options(m), repeat=n):
        phi = CubeMorphism(m, n, coords)
        if predicate(phi):
            result.append(phi)
    logger.debug(f"枚举态射 ⟦{m}⟧→⟦{n}⟧ ({morphism_filter.value}): {len(result)} 个")
    return tuple(result)


def enumerate_morphisms(m: int, n: int, morphism_filter: MorphismFilter = MorphismFilter.ALL) -> List[CubeMorphism]:
    """
    枚举全部态射 ⟦m⟧ → ⟦n⟧

    Args:
        m: 定义域维数
        n: 值域维数
        morphism_filter: 过滤条件

    Returns:
        无重复的态射列表，按坐标范式的字典序排列

    Raises:
        DimensionError: 自同构要求 m = n；单射和面映射要求 m ≤ n
    """
    _check_dim(m, Config.MAX_MORPHISM_DIM)
    _check_dim(n, Config.MAX_MORPHISM_DIM)
    morphism_filter = MorphismFilter(morphism_filter)
    if morphism_filter == MorphismFilter.AUTOMORPHISM and m != n:
        raise DimensionError(f"自同构要求定义域与值域维数相同: {m} ≠ {n}")
    if morphism_filter in (MorphismFilter.INJECTIVE, MorphismFilter.FACE_MAP) and m > n:
        raise DimensionError(f"不存在 ⟦{m}⟧ → ⟦{n}⟧ 的单射")
    return list(_enumerate(m, n, morphism_filter))


def apply_morphism(phi: CubeMorphism, v: Vertex) -> Vertex:
    return phi(v)


def is_affine_table(table: Mapping[Vertex, Vertex], m: int, n: int) -> bool:
    """
    判断顶点映射表能否延拓为仿射映射 Z^m → Z^n

    即 φ(v) = φ(0) + Σ v_i (φ(e_i) − φ(0)) 对全部顶点成立
    """
    zero = tuple([0] * m)
    base = table[zero]
    steps = []
    for i in range(m):
        e_i = tuple(1 if j == i else 0 for j in range(m))
        steps.append(tuple(b - a for a, b in zip(base, table[e_i])))
    for v, image in table.items():
        expected = list(base)
        for i, bit in enumerate(v):
            if bit:
                expected = [x + s for x, s in zip(expected, steps[i])]
        if tuple(expected) != tuple(image):
            return False
    return True


def morphism_from_table(table: Mapping[Vertex, Vertex], m: int, n: int) -> Optional[CubeMorphism]:
    """把仿射映射表还原为坐标范式，不是态射时返回 None"""
    if not is_affine_table(table, m, n):
        return None
    zero = tuple([0] * m)
    coords = []
    for j in range(n):
        base = table[zero][j]
        moving = [i for i in range(m) if table[tuple(1 if k == i else 0 for k in range(m))][j] != base]
        if not moving:
            coords.append(Coord(CoordKind.CONST1 if base else CoordKind.CONST0))
        elif len(moving) == 1:
            coords.append(Coord(CoordKind.NEG if base else CoordKind.ID, moving[0]))
        else:
            return None
    return CubeMorphism(m, n, tuple(coords))


# ---------------------------------------------------------------- 面

@dataclass(frozen=True)
class Face:
    """⟦n⟧ 中的面：固定坐标取定值，其余坐标自由"""

    n: int
    fixed: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        coords = [j for j, _ in self.fixed]
        if len(set(coords)) != len(coords) or any(not 0 <= j < self.n for j in coords):
            raise DimensionError(f"无效的面: {self.fixed}")
        if any(bit not in (0, 1) for _, bit in self.fixed):
            raise ValueError(f"固定坐标必须是 0 或 1: {self.fixed}")
        object.__setattr__(self, 'fixed', tuple(sorted(self.fixed)))

    @classmethod
    def codim1(cls, n: int, coord: int, bit: int) -> 'Face':
        return cls(n, ((coord, bit),))

    @property
    def free_coords(self) -> Tuple[int, ...]:
        fixed = {j for j, _ in self.fixed}
        return tuple(j for j in range(self.n) if j not in fixed)

    @property
    def dimension(self) -> int:
        return self.n - len(self.fixed)

    def contains(self, v: Vertex) -> bool:
        return all(v[j] == bit for j, bit in self.fixed)

    def face_map(self) -> CubeMorphism:
        """规范面映射 ⟦dim⟧ → ⟦n⟧，自由坐标按升序对应"""
        fixed = dict(self.fixed)
        free = {j: i for i, j in enumerate(self.free_coords)}
        coords = []
        for j in range(self.n):
            if j in fixed:
                coords.append(Coord(CoordKind.CONST1 if fixed[j] else CoordKind.CONST0))
            else:
                coords.append(Coord(CoordKind.ID, free[j]))
        return CubeMorphism(self.dimension, self.n, tuple(coords))

    def vertices(self) -> List[Vertex]:
        return self.face_map().image()

    def intersection(self, other: 'Face') -> Optional['Face']:
        fixed = dict(self.fixed)
        for j, bit in other.fixed:
            if fixed.get(j, bit) != bit:
                return None
            fixed[j] = bit
        return Face(self.n, tuple(fixed.items()))

    def __str__(self) -> str:
        symbols = ['*'] * self.n
        for j, bit in self.fixed:
            symbols[j] = str(bit)
        return ''.join(symbols)


def faces(n: int, dim: Optional[int] = None) -> List[Face]:
    """按维数升序列出 ⟦n⟧ 的全部面（或指定维数的面）"""
    _check_dim(n)
    dims = range(n + 1) if dim is None else [dim]
    result = []
    for d in dims:
        for fixed_coords in itertools.combinations(range(n), n - d):
            for bits in itertools.product((0, 1), repeat=n - d):
                result.append(Face(n, tuple(zip(fixed_coords, bits))))
    return result


def adjacent_codim1_pairs(n: int) -> List[Tuple[Face, Face]]:
    """相邻（交非空）且不同的 (n−1) 维面对"""
    pairs = []
    for i, j in itertools.combinations(range(n), 2):
        for a, b in itertools.product((0, 1), repeat=2):
            pairs.append((Face.codim1(n, i, a), Face.codim1(n, j, b)))
    return pairs


def opposite_codim1_pairs(n: int) -> List[Tuple[Face, Face]]:
    """相对的 (n−1) 维面对 ({v_i=0}, {v_i=1})"""
    return [(Face.codim1(n, i, 0), Face.codim1(n, i, 1)) for i in range(n)]


# ---------------------------------------------------------------- 单纯集

def is_simplicial(vs: Iterable[Vertex]) -> bool:
    """向下封闭判定：只需检查去掉一个 1 后仍在集合中"""
    members = set(vs)
    for v in members:
        for i, bit in enumerate(v):
            if bit and v[:i] + (0,) + v[i + 1:] not in members:
                return False
    return True


def maximal_vertices(vs: Iterable[Vertex]) -> List[Vertex]:
    members = set(vs)
    maximal = [v for v in members if not any(w != v and leq(v, w) for w in members)]
    return sorted(maximal, key=vertex_index)


@dataclass(frozen=True)
class SimplicialSet:
    """⟦n⟧ 中向下封闭的顶点集"""

    n: int
    members: FrozenSet[Vertex]

    def __post_init__(self) -> None:
        for v in self.members:
            check_vertex(v, self.n)
        if not is_simplicial(self.members):
            raise ValueError("顶点集不是向下封闭的，请使用 simplicial_closure")

    @property
    def height(self) -> int:
        return max((height(v) for v in self.members), default=0)

    def ordered(self) -> List[Vertex]:
        return sorted(self.members, key=vertex_index)

    def maximal(self) -> List[Vertex]:
        return maximal_vertices(self.members)

    def degree(self, u: Vertex) -> int:
        """d(u) = max{|w| : w ∈ S, w ≥ u}"""
        if u not in self.members:
            raise ValueError(f"顶点 {u} 不在单纯集中")
        return max(height(w) for w in self.members if leq(u, w))

    def faces(self) -> List[Face]:
        """分解为过 0^n 的面之并（每个极大顶点对应一个面）"""
        return [Face(self.n, tuple((j, 0) for j in range(self.n) if not v[j])) for v in self.maximal()]

    def union(self, other: 'SimplicialSet') -> 'SimplicialSet':
        return SimplicialSet(self.n, self.members | other.members)

    def intersection(self, other: 'SimplicialSet') -> 'SimplicialSet':
        return SimplicialSet(self.n, self.members & other.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: object) -> bool:
        return v in self.members


def simplicial_closure(vs: Iterable[Vertex], n: int) -> SimplicialSet:
    """包含 vs 的最小向下封闭集"""
    closure = set()
    for v in vs:
        v = check_vertex(v, n)
        support = [i for i, bit in enumerate(v) if bit]
        for bits in itertools.product((0, 1), repeat=len(support)):
            w = [0] * n
            for i, bit in zip(support, bits):
                w[i] = bit
            closure.add(tuple(w))
    return SimplicialSet(n, frozenset(closure))


def all_simplicial_sets(n: int, include_empty: bool = False) -> List[SimplicialSet]:
    """枚举 ⟦n⟧ 的全部单纯集（格 S_n）"""
    _check_dim(n, Config.MAX_BLOWUP_DIM)
    verts = vertices(n)
    result = []
    for mask in range(1 << len(verts)):
        members = [v for k, v in enumerate(verts) if mask >> k & 1]
        if not members and not include_empty:
            continue
        if is_simplicial(members):
            result.append(SimplicialSet(n, frozenset(members)))
    return result


# ---------------------------------------------------------------- 三元立方体

TRIT_EMBEDDING: Dict[int, Tuple[int, int]] = {-1: (0, 1), 0: (0, 0), 1: (1, 0)}


def tricube_embed(n: int, t: Sequence[int]) -> Vertex:
    """
    q_n: {−1,0,1}^n → ⟦2n⟧

    v_i 与 v_{i+n} 由 q_1(t_i) 给出
    """
    if len(t) != n:
        raise DimensionError(f"三元点 {tuple(t)} 的维数不是 {n}")
    if any(entry not in TRIT_EMBEDDING for entry in t):
        raise ValueError(f"三元点的坐标必须属于 {{-1, 0, 1}}: {tuple(t)}")
    low = tuple(TRIT_EMBEDDING[entry][0] for entry in t)
    high = tuple(TRIT_EMBEDDING[entry][1] for entry in t)
    return low + high


def tricube_decode(v: Vertex) -> Trit:
    """q_n 的逆：t_i = v_i − v_{i+n}"""
    if len(v) % 2:
        raise DimensionError(f"顶点 {v} 的维数不是偶数")
    n = len(v) // 2
    if any(v[i] and v[i + n] for i in range(n)):
        raise ValueError(f"顶点 {v} 不在三元立方体的像中")
    return tuple(v[i] - v[i + n] for i in range(n))


def tricube_points(n: int) -> List[Trit]:
    _check_dim(n, Config.MAX_BLOWUP_DIM)
    return [tuple(reversed(t)) for t in itertools.product((-1, 0, 1), repeat=n)]


def outer_point(v: Vertex) -> Trit:
    """外点映射 ω_n(v) = (2v_i − 1)"""
    return tuple(2 * bit - 1 for bit in v)


def outer_point_morphism(n: int) -> CubeMorphism:
    """q_n∘ω_n 作为态射 ⟦n⟧ → ⟦2n⟧"""
    coords = [Coord(CoordKind.ID, i) for i in range(n)] + [Coord(CoordKind.NEG, i) for i in range(n)]
    return CubeMorphism(n, 2 * n, tuple(coords))


TritAction = Tuple[Dict[int, int], ...]


def s3_actions(n: int) -> List[TritAction]:
    """S_3^n 在 {−1,0,1}^n 上的逐坐标作用"""
    perms = [dict(zip((-1, 0, 1), image)) for image in itertools.permutations((-1, 0, 1))]
    return [tuple(choice) for choice in itertools.product(perms, repeat=n)]


def act_on_trit(action: TritAction, t: Trit) -> Trit:
    return tuple(perm[entry] for perm, entry in zip(action, t))


class Tricube:
    """维数为 n 的三元立方体及其在 ⟦2n⟧ 中的嵌入"""

    def __init__(self, n: int):
        _check_dim(n, Config.MAX_BLOWUP_DIM)
        self.n = n
        self.embedding: Dict[Trit, Vertex] = {t: tricube_embed(n, t) for t in tricube_points(n)}
        self.outer_point_map: Dict[Vertex, Trit] = {v: outer_point(v) for v in vertices(n)}

    def image(self) -> SimplicialSet:
        """T̃_n = {v ∈ ⟦2n⟧ : v_i·v_{i+n} = 0}"""
        return SimplicialSet(2 * self.n, frozenset(self.embedding.values()))

    def points(self) -> List[Trit]:
        return list(self.embedding)
