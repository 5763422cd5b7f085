# -*- coding: utf-8 -*-
"""
Host–Kra 构造

滤过群只通过它在有限原子集上的置换作用出现：G_i 由第 i 层及更高层的生成元生成，G_0 = G_1。
μ^⟦n+1⟧ 是 μ^⟦n⟧ 关于 H_{n,1}-不变 σ-代数 I_n 的相对平方，其中第二个因子对应 v⟨n+1⟩ = 1 的面。
"""

import itertools
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from ..config import Config, check_cap
from ..core.couplings import Coupling, relative_square
from ..core.cube_combinatorics import Face, Vertex, faces, vertices
from ..core.finite_measure import Atom, FiniteProbSpace, FunctionOnSpace, Partition, components
from ..core.scalars import scalar_eq
from ..exceptions import CouplingError, DimensionError, VerificationError
from ..utils.logger import get_logger
from .abelian_cubes import AbelianCubeService, Element, FiniteAbelianGroup
from .cubic_coupling import CubicCoupling, CubicCouplingService, base_coupling
from .reports import CheckResult, VerificationReport
from .uniformity import UniformityService, UNorm

logger = get_logger(__name__)

Perm = Tuple[int, ...]


def identity_perm(size: int) -> Perm:
    return tuple(range(size))


def compose(p: Perm, q: Perm) -> Perm:
    """p∘q"""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    result = [0] * len(p)
    for i, image in enumerate(p):
        result[image] = i
    return tuple(result)


def commutator(g: Perm, h: Perm) -> Perm:
    """[g, h] = g⁻¹h⁻¹gh"""
    return compose(compose(inverse(g), inverse(h)), compose(g, h))


def _check_perm(p: Sequence[int], size: int) -> Perm:
    p = tuple(int(i) for i in p)
    if sorted(p) != list(range(size)):
        raise ValueError(f"不是 {size} 个点上的置换: {list(p)}")
    return p


class PermutationGroup:
    """由生成元生成的置换群（按需做 BFS 闭包）"""

    def __init__(self, size: int, generators: Iterable[Sequence[int]]):
        self.size = size
        self.generators: List[Perm] = [_check_perm(g, size) for g in generators]
        self._elements: Optional[FrozenSet[Perm]] = None

    def ball(self, radius: Optional[int] = None) -> Set[Perm]:
        """字长不超过 radius 的元素（radius 为 None 时是整个群）"""
        identity = identity_perm(self.size)
        seen = {identity}
        frontier = deque([(identity, 0)])
        while frontier:
            element, length = frontier.popleft()
            if radius is not None and length >= radius:
                continue
            for g in self.generators:
                product = compose(g, element)
                if product not in seen:
                    seen.add(product)
                    check_cap(len(seen), Config.MAX_GROUP_ORDER, "置换群")
                    frontier.append((product, length + 1))
        return seen

    @property
    def elements(self) -> FrozenSet[Perm]:
        if self._elements is None:
            self._elements = frozenset(self.ball())
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, p: Perm) -> bool:
        if not self.generators:
            return p == identity_perm(self.size)
        return tuple(p) in self.elements

    def contains_group(self, other: 'PermutationGroup') -> bool:
        return all(self.contains(g) for g in other.generators)

    def orbit_labels(self, points: Optional[Sequence[int]] = None) -> List[int]:
        """每个点所在轨道的编号"""
        edges = [(i, g[i]) for g in self.generators for i in range(self.size)]
        labels = components(self.size, edges)
        return labels if points is None else [labels[i] for i in points]


class FilteredAction:
    """
    滤过群 G_• 在有限概率空间上的保测置换作用

    levels[i−1] 是第 i 层的生成元；G_i 由第 i 层及以上的全部生成元生成
    """

    def __init__(self, space: FiniteProbSpace, levels: Sequence[Iterable[Sequence[int]]], name: str = ""):
        self.space = space
        self.name = name
        self.levels: List[List[Perm]] = [[_check_perm(g, len(space)) for g in level] for level in levels]
        for i, level in enumerate(self.levels, 1):
            for g in level:
                for k, image in enumerate(g):
                    if not scalar_eq(space.weights[k], space.weights[image]):
                        raise CouplingError(f"第 {i} 层生成元改变了原子 {space.atoms[k]!r} 的权重",
                                            witness=space.atoms[k])

    @classmethod
    def translation(cls, group: FiniteAbelianGroup, levels: Sequence[Iterable[Element]],
                    space: Optional[FiniteProbSpace] = None) -> 'FilteredAction':
        """平移作用 x ↦ x + g"""
        space = space or group.as_space()
        perms = []
        for level in levels:
            perms.append([[space.index(group.add(x, group.normalize(g))) for x in space.atoms] for g in level])
        return cls(space, perms, name=f"{group} 平移")

    @property
    def degree(self) -> int:
        """最后一个非空层的编号"""
        nonempty = [i for i, level in enumerate(self.levels, 1) if level]
        return nonempty[-1] if nonempty else 0

    def generators(self, i: int) -> List[Perm]:
        """G_i 的生成元"""
        i = max(i, 1)
        result: List[Perm] = []
        for level in self.levels[i - 1:]:
            result.extend(level)
        return result

    def group(self, i: int) -> PermutationGroup:
        return PermutationGroup(len(self.space), self.generators(i))

    def orbit_partition(self, i: int = 1) -> Partition:
        labels = self.group(i).orbit_labels()
        return Partition.from_labels(self.space, lambda atom: labels[self.space.index(atom)])

    def is_ergodic(self) -> bool:
        """G_1 在支撑原子上可迁"""
        return self.orbit_partition(1).is_trivial()

    def check_filtration(self, word_length: int = Config.FILTRATION_WORD_LENGTH) -> CheckResult:
        """[G_i, G_j] ⊆ G_{i+j}：对字长有限的元素检查"""
        top = max(self.degree, 1)
        checked = 0
        for i in range(1, top + 1):
            ball_i = self.group(i).ball(word_length)
            for j in range(i, top + 1):
                target = self.group(i + j)
                for g in ball_i:
                    for h in self.group(j).ball(word_length):
                        checked += 1
                        if not target.contains(commutator(g, h)):
                            return CheckResult.from_bool("filtration", False, {"word_length": word_length},
                                                         {"checked": checked},
                                                         {"i": i, "j": j, "g": list(g), "h": list(h)})
        return CheckResult.from_bool("filtration", True, {"word_length": word_length}, {"checked": checked})


@dataclass(frozen=True)
class CubeGenerator:
    """g^F：在面 F 的顶点上作用 g，其余顶点不动"""

    face: Face
    perm: Perm

    def act(self, key: Sequence[int], verts: Sequence[Vertex]) -> Tuple[int, ...]:
        return tuple(self.perm[x] if self.face.contains(v) else x for v, x in zip(verts, key))


class CubePermutationGroup:
    """H_{n,k} = C^n(G_•^{+k}) 的生成元"""

    def __init__(self, action: FilteredAction, n: int, k: int, generators: List[CubeGenerator]):
        self.action = action
        self.n = n
        self.k = k
        self.generators = generators
        self._verts = vertices(n)

    def __len__(self) -> int:
        return len(self.generators)

    def apply(self, generator: CubeGenerator, key: Sequence[Atom]) -> Tuple[Atom, ...]:
        space = self.action.space
        moved = generator.act([space.index(x) for x in key], self._verts)
        return tuple(space.atoms[i] for i in moved)

    def points(self) -> List[Tuple[int, ...]]:
        size = len(self.action.space)
        check_cap(size ** len(self._verts), Config.MAX_CUBE_ENUMERATION, f"Ω^⟦{self.n}⟧")
        return list(itertools.product(range(size), repeat=len(self._verts)))

    def point_permutations(self, generators: Optional[List[CubeGenerator]] = None) -> List[Perm]:
        points = self.points()
        index = {p: i for i, p in enumerate(points)}
        result = []
        for generator in self.generators if generators is None else generators:
            result.append(tuple(index[generator.act(p, self._verts)] for p in points))
        return result

    def permutation_group(self) -> PermutationGroup:
        return PermutationGroup(len(self.points()), self.point_permutations())


class HostKraService:
    """Host–Kra 立方耦合及其检查"""

    def __init__(self, cubic: Optional[CubicCouplingService] = None, uniformity: Optional[UniformityService] = None,
                 abelian: Optional[AbelianCubeService] = None):
        self.cubic = cubic or CubicCouplingService()
        self.uniformity = uniformity or UniformityService()
        self.abelian = abelian or AbelianCubeService()
        self.logger = get_logger(__name__)

    def cube_group_generators(self, action: FilteredAction, n: int, k: int) -> CubePermutationGroup:
        """
        H_{n,k} 的生成元 g^F：F 取遍 ⟦n⟧ 的面，g 取遍 G_{n−dim F+k} 的生成元

        Args:
            action: 滤过作用
            n: 立方体维数
            k: 平移量

        Returns:
            按面的规范顺序排列的生成元
        """
        if n < 0 or k < 0:
            raise DimensionError(f"n 与 k 必须非负: n={n}, k={k}")
        generators = []
        for face in faces(n):
            for g in action.generators(n - face.dimension + k):
                generators.append(CubeGenerator(face, g))
        return CubePermutationGroup(action, n, k, generators)

    def invariant_partition(self, group: CubePermutationGroup, mu: Coupling) -> Partition:
        """
        支撑上的轨道划分（I_n）

        Raises:
            CouplingError: 生成元把质量移出支撑或改变了质量
        """
        space = mu.support_space()
        index = {key: i for i, key in enumerate(space.atoms)}
        edges = []
        for generator in group.generators:
            for key, value in mu.items():
                image = group.apply(generator, key)
                if image not in index:
                    raise CouplingError(f"生成元 {generator.face} 把支撑点移出支撑", witness=list(key))
                if not scalar_eq(mu.mass[image], value):
                    raise CouplingError(f"生成元 {generator.face} 不保测", witness=list(key))
                edges.append((index[key], index[image]))
        labels = components(len(space), edges)
        return Partition.from_labels(space, lambda key: labels[index[key]])

    def _next_measure(self, action: FilteredAction, mu: Coupling, n: int) -> Coupling:
        invariant = self.invariant_partition(self.cube_group_generators(action, n, 1), mu)
        square = relative_square(invariant.space, invariant)
        mass = {x + y: value for (x, y), value in square.items()}
        self.logger.debug(f"I_{n}: {len(invariant)} 个轨道，μ^⟦{n + 1}⟧ 有 {len(mass)} 个支撑点")
        return Coupling(action.space, vertices(n + 1), mass)

    def host_kra_coupling(self, action: FilteredAction, n_max: int = Config.DEFAULT_NMAX) -> CubicCoupling:
        """
        Host–Kra 立方耦合

        不遍历的作用也可以构造，但 ergodic 标记为 False，相关结论在报告中记为 n/a
        """
        ergodic = action.is_ergodic()
        if not ergodic:
            self.logger.warning(f"{action.name or '作用'} 不是遍历的，Host–Kra 耦合不保证是立方耦合")

        cc: CubicCoupling

        def provider(n: int) -> Coupling:
            if n == 0:
                return base_coupling(action.space)
            return self._next_measure(action, cc.measure(n - 1), n - 1)

        cc = CubicCoupling(action.space, provider, n_max, name=f"host_kra({action.name})", ergodic=ergodic)
        return cc

    def hk_seminorm(self, action: FilteredAction, d: int, f: FunctionOnSpace,
                    cc: Optional[CubicCoupling] = None) -> UNorm:
        cc = cc or self.host_kra_coupling(action, max(d, Config.DEFAULT_NMAX))
        return self.uniformity.u_seminorm(cc, d, f)

    def hk_factor(self, action: FilteredAction, k: int, cc: Optional[CubicCoupling] = None) -> Partition:
        """
        第 k 个 Host–Kra 因子（F_k）

        Raises:
            VerificationError: 因子的块不被 G_1 的生成元整体置换
        """
        cc = cc or self.host_kra_coupling(action, max(k + 1, Config.DEFAULT_NMAX))
        partition = self.uniformity.fourier_sigma_algebra(cc, k)
        space = action.space
        for g in action.generators(1):
            for block in partition.blocks():
                images = {partition.block_index(space.atoms[g[space.index(x)]]) for x in block}
                if len(images) != 1:
                    raise VerificationError(f"F_{k} 的块 {block} 在生成元 {list(g)} 下不是整块移动")
        return partition

    # ------------------------------------------------------------ 检查

    def verify_invariance(self, action: FilteredAction, cc: CubicCoupling, n: int) -> CheckResult:
        """μ^⟦n⟧ 在 H_{n,0} 的生成元下不变"""
        mu = cc.measure(n)
        group = self.cube_group_generators(action, n, 0)
        for generator in group.generators:
            for key, value in mu.items():
                image = group.apply(generator, key)
                if not scalar_eq(mu.mass.get(image, 0), value):
                    return CheckResult.from_bool("cube_group_invariance", False, {"n": n},
                                                 {"generators": len(group)},
                                                 {"face": str(generator.face), "cylinder": list(key)})
        return CheckResult.from_bool("cube_group_invariance", True, {"n": n}, {"generators": len(group)})

    def verify_cube_filtration(self, action: FilteredAction, n: int,
                               word_length: int = Config.FILTRATION_WORD_LENGTH) -> CheckResult:
        """[H_{n,j}, H_{n,k}] ⊆ H_{n,j+k}，对字长有限的元素检查"""
        top = max(action.degree, 1)
        checked = 0
        for j in range(top + 1):
            ball_j = self.cube_group_generators(action, n, j).permutation_group().ball(word_length)
            for k in range(j, top + 1):
                ball_k = self.cube_group_generators(action, n, k).permutation_group().ball(word_length)
                target = self.cube_group_generators(action, n, j + k).permutation_group()
                for a in ball_j:
                    for b in ball_k:
                        checked += 1
                        if not target.contains(commutator(a, b)):
                            return CheckResult.from_bool("cube_filtration", False, {"n": n},
                                                         {"checked": checked}, {"j": j, "k": k})
        return CheckResult.from_bool("cube_filtration", True, {"n": n, "word_length": word_length},
                                     {"checked": checked})

    def diag_generators(self, action: FilteredAction, n: int, k: int) -> List[CubeGenerator]:
        """
        diag(H_{n,k}, H_{n,k+1}) 在 Ω^⟦n+1⟧ 上的生成元

        (g^F, g^F) = g^{F×⟦1⟧}，以及 (h^F, 1)、(1, h^F)，其中 h 为 H_{n,k+1} 的生成元
        """
        result = []
        for generator in self.cube_group_generators(action, n, k).generators:
            fixed = generator.face.fixed
            result.append(CubeGenerator(Face(n + 1, fixed), generator.perm))
        for generator in self.cube_group_generators(action, n, k + 1).generators:
            fixed = generator.face.fixed
            result.append(CubeGenerator(Face(n + 1, fixed + ((n, 0),)), generator.perm))
            result.append(CubeGenerator(Face(n + 1, fixed + ((n, 1),)), generator.perm))
        return result

    def verify_diag_identity(self, action: FilteredAction, n: int, k: int) -> CheckResult:
        """H_{n+1,k} = diag(H_{n,k}, H_{n,k+1})，比较生成的置换群"""
        upper = self.cube_group_generators(action, n + 1, k)
        upper_group = upper.permutation_group()
        diag_group = PermutationGroup(len(upper.points()), upper.point_permutations(self.diag_generators(action, n, k)))
        ok = upper_group.contains_group(diag_group) and diag_group.contains_group(upper_group)
        return CheckResult.from_bool("diag_identity", ok, {"n": n, "k": k},
                                     {"order": upper_group.order if ok else None}, {"n": n, "k": k})

    def compare_with_standard(self, action: FilteredAction, group: FiniteAbelianGroup, cc: CubicCoupling,
                              n_max: Optional[int] = None) -> CheckResult:
        """
        Host–Kra 耦合与标准立方体耦合逐维相等

        第 i 个原子对应 group.elements() 的第 i 个元素

        Raises:
            DimensionError: 原子个数与群的阶不同
        """
        n_max = cc.n_max if n_max is None else n_max
        if len(action.space) != group.order:
            raise DimensionError(f"原子个数 {len(action.space)} 与群 {group} 的阶不符")
        atom_of = dict(zip(group.elements(), action.space.atoms))
        for n in range(n_max + 1):
            cubes = self.abelian.standard_cube_coupling(group, n)
            mass = {tuple(atom_of[x] for x in key): value for key, value in cubes.items()}
            standard = Coupling(action.space, vertices(n), mass, validate=False)
            cylinder = standard.difference_witness(cc.measure(n))
            if cylinder is not None:
                return CheckResult.from_bool("standard_cubes", False, {"group": str(group), "n_max": n_max},
                                             witness={"n": n, "cylinder": list(cylinder)})
        return CheckResult.from_bool("standard_cubes", True, {"group": str(group), "n_max": n_max})

    def verify_host_kra(self, action: FilteredAction, n_max: int = Config.DEFAULT_NMAX,
                        group: Optional[FiniteAbelianGroup] = None) -> VerificationReport:
        """
        Host–Kra 构造的全部检查

        作用不遍历时，依赖遍历性的结论（公理与自同构不变性）记为 n/a
        """
        cc = self.host_kra_coupling(action, n_max)
        report = VerificationReport(name="host_kra")
        orbits = len(action.orbit_partition())
        if cc.ergodic:
            report.add(CheckResult.from_bool("action_ergodic", True, values={"orbits": orbits}))
        else:
            report.add(CheckResult.not_applicable("action_ergodic", f"作用有 {orbits} 个轨道", {"orbits": orbits}))
        report.add(action.check_filtration())

        if cc.ergodic:
            report.extend(self.cubic.verify_axioms_v1(cc, n_max))
            for n in range(min(n_max, 3) + 1):
                report.add(self.cubic.verify_aut_invariance(cc, n))
        else:
            for check_id in ("consistency", "ergodicity", "conditional_independence", "aut_invariance"):
                report.add(CheckResult.not_applicable(check_id, "作用不是遍历的"))

        for n in range(n_max + 1):
            report.add(self.verify_invariance(action, cc, n))
        for n in range(min(n_max, 2) + 1):
            if len(action.space) ** (2 ** n) <= Config.MAX_CUBE_ENUMERATION or Config.UNSAFE:
                report.add(self.verify_cube_filtration(action, n))
        for n in range(min(n_max - 1, 1) + 1):
            for k in range(2):
                if len(action.space) ** (2 ** (n + 1)) <= Config.MAX_CUBE_ENUMERATION or Config.UNSAFE:
                    report.add(self.verify_diag_identity(action, n, k))
        if group is not None:
            report.add(self.compare_with_standard(action, group, cc))
        return report
