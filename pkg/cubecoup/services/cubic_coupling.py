# -*- coding: utf-8 -*-
"""
立方耦合服务

CubicCoupling 是一列耦合 μ^⟦n⟧ ∈ Coup(Ω, ⟦n⟧)；CubicCouplingService 检查两套公理以及由公理推出的结构性质。
"""

import threading
from typing import Any, Callable, Dict, List, Optional

from ..config import Config
from ..core.couplings import (
    Coupling,
    conditional_coupling,
    factor_coupling,
    idempotence_witness,
    index_cond_independent,
    is_local,
    product_coupling,
    subcoupling,
)
from ..core.cube_combinatorics import (
    CubeMorphism,
    MorphismFilter,
    Tricube,
    act_on_trit,
    adjacent_codim1_pairs,
    all_simplicial_sets,
    corner,
    enumerate_morphisms,
    faces,
    format_bits,
    opposite_codim1_pairs,
    outer_point_morphism,
    s3_actions,
    vertices,
)
from ..core.finite_measure import FiniteProbSpace, Partition, cond_independent_pair
from ..exceptions import CouplingError, DimensionError
from ..utils.logger import get_logger
from .reports import CheckResult, VerificationReport

Provider = Callable[[int], Coupling]


class CubicCoupling:
    """
    立方耦合 (Ω, (μ^⟦n⟧)_{n ≤ n_max})

    μ^⟦n⟧ 由 provider 按需构造并缓存；provider 可以递归地请求更低维的测度
    """

    def __init__(self, base: FiniteProbSpace, provider: Provider, n_max: int = Config.DEFAULT_NMAX,
                 name: str = "", ergodic: Optional[bool] = None):
        """
        初始化立方耦合

        Args:
            base: 底空间 (Ω, λ)
            provider: n ↦ μ^⟦n⟧
            n_max: 验证范围
            name: 报告中使用的名字
            ergodic: 构造方已知的遍历性（Host–Kra 构造会给出）
        """
        if n_max < 0:
            raise DimensionError(f"n_max 不能为负: {n_max}")
        self.base = base
        self.n_max = n_max
        self.name = name
        self.ergodic = ergodic
        self._provider = provider
        self._cache: Dict[int, Coupling] = {}
        # provider 会递归调用 measure，所以用可重入锁
        self._lock = threading.RLock()
        self.logger = get_logger(__name__)

    def __repr__(self) -> str:
        return f"CubicCoupling(name={self.name!r}, n_max={self.n_max})"

    def measure(self, n: int) -> Coupling:
        """μ^⟦n⟧"""
        if not 0 <= n <= self.n_max:
            raise DimensionError(f"维数 {n} 超出验证范围 0..{self.n_max}")
        with self._lock:
            cached = self._cache.get(n)
            if cached is not None:
                return cached
            mu = self._provider(n)
            if list(mu.labels) != vertices(n):
                raise CouplingError(f"μ^⟦{n}⟧ 的标签必须是 ⟦{n}⟧ 的顶点")
            if mu.base != self.base:
                raise CouplingError(f"μ^⟦{n}⟧ 不在底空间上")
            self._cache[n] = mu
            self.logger.debug(f"{self.name or '立方耦合'}: μ^⟦{n}⟧ 有 {len(mu)} 个支撑点")
            return mu

    def with_horizon(self, n_max: int) -> 'CubicCoupling':
        """同一序列，换一个验证范围"""
        return CubicCoupling(self.base, self._provider, n_max, self.name, self.ergodic)

    def factor(self, partition: Partition, name: Optional[str] = None) -> 'CubicCoupling':
        """每个 μ^⟦n⟧ 都按划分取因子"""
        quotient = self.base.quotient(partition)
        return CubicCoupling(
            quotient,
            lambda n: factor_coupling(self.measure(n), partition),
            self.n_max,
            name or f"{self.name}/P",
            self.ergodic,
        )

    def rooted(self, n: int, x: Any) -> Coupling:
        """根坐标取值 x 时 K_n 上的条件耦合"""
        root = vertices(n)[0]
        return conditional_coupling(self.measure(n), [root], [(x,)])

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, "atoms": len(self.base), "n_max": self.n_max}


def base_coupling(base: FiniteProbSpace) -> Coupling:
    """μ^⟦0⟧ = λ"""
    return Coupling(base, vertices(0), {(atom,): base.weight(atom) for atom in base.support()}, validate=False)


def _morphism_labels(phi: CubeMorphism) -> Dict[Any, Any]:
    return {v: phi(v) for v in vertices(phi.domain_dim)}


def _bits(vs: List[Any]) -> List[str]:
    return [format_bits(v) for v in vs]


class CubicCouplingService:
    """立方耦合的公理与结构检查"""

    def __init__(self):
        self.logger = get_logger(__name__)

    # ------------------------------------------------------------ 公理

    def _check_consistency(self, cc: CubicCoupling, n_max: int, morphism_filter: MorphismFilter,
                           check_id: str) -> CheckResult:
        checked = 0
        for n in range(n_max + 1):
            mu = cc.measure(n)
            for m in range(n + 1):
                target = cc.measure(m)
                for phi in enumerate_morphisms(m, n, morphism_filter):
                    checked += 1
                    pulled = subcoupling(mu, _morphism_labels(phi))
                    cylinder = target.difference_witness(pulled)
                    if cylinder is not None:
                        self.logger.warning(f"{check_id} 失败: φ={phi}, ⟦{m}⟧→⟦{n}⟧")
                        return CheckResult.from_bool(
                            check_id, False, {"n_max": n_max},
                            {"checked": checked},
                            {"morphism": str(phi), "m": m, "n": n, "cylinder": list(cylinder)},
                        )
        return CheckResult.from_bool(check_id, True, {"n_max": n_max}, {"checked": checked})

    def _check_ergodicity(self, cc: CubicCoupling) -> CheckResult:
        if cc.n_max < 1:
            return CheckResult.not_applicable("ergodicity", "验证范围不含 ⟦1⟧")
        mu = cc.measure(1)
        cylinder = product_coupling(cc.base, vertices(1)).difference_witness(mu)
        if cylinder is not None:
            self.logger.warning(f"ergodicity 失败: μ^⟦1⟧ ≠ λ×λ，柱集 {cylinder}")
        return CheckResult.from_bool("ergodicity", cylinder is None, {},
                                     {"support": len(mu)},
                                     {"cylinder": list(cylinder) if cylinder else None})

    def _check_conditional_independence(self, cc: CubicCoupling, n_max: int) -> CheckResult:
        checked = 0
        for n in range(2, n_max + 1):
            mu = cc.measure(n)
            for f0, f1 in adjacent_codim1_pairs(n):
                checked += 1
                if not index_cond_independent(mu, f0.vertices(), f1.vertices()):
                    self.logger.warning(f"conditional_independence 失败: {f0} ⊥ {f1} 不成立")
                    return CheckResult.from_bool("conditional_independence", False, {"n_max": n_max},
                                                 {"checked": checked}, {"faces": [str(f0), str(f1)], "n": n})
        return CheckResult.from_bool("conditional_independence", True, {"n_max": n_max}, {"checked": checked})

    def as_two_label(self, cc: CubicCoupling, n: int, coord: int) -> Coupling:
        """
        把 μ^⟦n⟧ 看成以 μ^⟦n−1⟧ 的支撑为底空间、沿第 coord 个坐标相对的两个面为标签的耦合

        Raises:
            CouplingError: 面限制不在 μ^⟦n−1⟧ 的支撑中，或边缘不符
        """
        space = cc.measure(n - 1).support_space()
        face0, face1 = opposite_codim1_pairs(n)[coord]
        index = {v: k for k, v in enumerate(vertices(n))}
        pos0 = [index[v] for v in face0.vertices()]
        pos1 = [index[v] for v in face1.vertices()]
        mass: Dict[Any, Any] = {}
        for key, value in cc.measure(n).items():
            pair = (tuple(key[p] for p in pos0), tuple(key[p] for p in pos1))
            if pair[0] not in space or pair[1] not in space:
                raise CouplingError(f"面限制不在 μ^⟦{n - 1}⟧ 的支撑中", witness=list(key))
            mass[pair] = mass.get(pair, 0) + value
        return Coupling(space, ("0", "1"), mass)

    def _check_idempotence(self, cc: CubicCoupling, n_max: int) -> CheckResult:
        checked = 0
        for n in range(1, n_max + 1):
            for coord in range(n):
                checked += 1
                try:
                    witness = idempotence_witness(self.as_two_label(cc, n, coord))
                except CouplingError as e:
                    witness = e.witness if e.witness is not None else str(e)
                if witness is not None:
                    self.logger.warning(f"idempotence 失败: n={n}, 坐标 {coord + 1}")
                    return CheckResult.from_bool("idempotence", False, {"n_max": n_max}, {"checked": checked},
                                                 {"n": n, "coordinate": coord + 1, "cylinder": witness})
        return CheckResult.from_bool("idempotence", True, {"n_max": n_max}, {"checked": checked})

    def _horizon(self, cc: CubicCoupling, n_max: Optional[int]) -> int:
        n_max = cc.n_max if n_max is None else n_max
        if n_max > cc.n_max:
            raise DimensionError(f"n_max={n_max} 超出立方耦合的范围 {cc.n_max}")
        return n_max

    def verify_axioms_v1(self, cc: CubicCoupling, n_max: Optional[int] = None) -> VerificationReport:
        """
        第一套公理：单射态射下的相容性、遍历性、条件独立性

        Args:
            cc: 立方耦合
            n_max: 检查到的最高维数，默认取 cc.n_max

        Returns:
            三项检查的报告，失败项带第一个违例
        """
        n_max = self._horizon(cc, n_max)
        report = VerificationReport(name="axioms_v1")
        report.add(self._check_consistency(cc, n_max, MorphismFilter.INJECTIVE, "consistency"))
        report.add(self._check_ergodicity(cc))
        report.add(self._check_conditional_independence(cc, n_max))
        return report

    def verify_axioms_v2(self, cc: CubicCoupling, n_max: Optional[int] = None) -> VerificationReport:
        """第二套公理：面映射下的相容性、遍历性、幂等性"""
        n_max = self._horizon(cc, n_max)
        report = VerificationReport(name="axioms_v2")
        report.add(self._check_consistency(cc, n_max, MorphismFilter.FACE_MAP, "face_consistency"))
        report.add(self._check_ergodicity(cc))
        report.add(self._check_idempotence(cc, n_max))
        return report

    def verify_all(self, cc: CubicCoupling, n_max: Optional[int] = None) -> VerificationReport:
        """两套公理以及二者结论是否一致"""
        v1 = self.verify_axioms_v1(cc, n_max)
        v2 = self.verify_axioms_v2(cc, n_max)
        report = VerificationReport(name="axioms")
        report.extend(v1)
        for check in v2.checks:
            if check.check_id != "ergodicity":
                report.add(check)
        report.add(CheckResult.from_bool(
            "axiom_systems_agree", v1.passed == v2.passed,
            values={"v1": v1.passed, "v2": v2.passed},
            witness={"v1": v1.passed, "v2": v2.passed},
        ))
        return report

    # ------------------------------------------------------------ 推论

    def verify_simplicial_cis(self, cc: CubicCoupling, n: int) -> CheckResult:
        """⟦n⟧ 中任意两个单纯集 H1 ⊥ H2"""
        if n > 3:
            raise DimensionError(f"单纯集格只枚举到 n=3，实际为 {n}")
        mu = cc.measure(n)
        lattice = all_simplicial_sets(n)
        checked = 0
        for i, h1 in enumerate(lattice):
            for h2 in lattice[i:]:
                checked += 1
                if not index_cond_independent(mu, h1.ordered(), h2.ordered()):
                    return CheckResult.from_bool("simplicial_cis", False, {"n": n}, {"checked": checked},
                                                 {"h1": _bits(h1.ordered()), "h2": _bits(h2.ordered())})
        return CheckResult.from_bool("simplicial_cis", True, {"n": n}, {"checked": checked, "sets": len(lattice)})

    def tricube_coupling(self, cc: CubicCoupling, n: int) -> Coupling:
        """μ^⟦2n⟧ 在 T̃_n 上的子耦合，以三元点为标签"""
        tricube = Tricube(n)
        return subcoupling(cc.measure(2 * n), tricube.embedding)

    def verify_tricube_symmetry(self, cc: CubicCoupling, n: int) -> CheckResult:
        """三元立方体耦合在 S_3^n 的逐坐标作用下不变"""
        tri = self.tricube_coupling(cc, n)
        actions = s3_actions(n)
        for action in actions:
            moved = subcoupling(tri, {t: act_on_trit(action, t) for t in tri.labels})
            cylinder = tri.difference_witness(moved)
            if cylinder is not None:
                action_repr = [[perm[-1], perm[0], perm[1]] for perm in action]
                return CheckResult.from_bool("tricube_symmetry", False, {"n": n}, {"actions": len(actions)},
                                             {"action": action_repr, "cylinder": list(cylinder)})
        return CheckResult.from_bool("tricube_symmetry", True, {"n": n}, {"actions": len(actions)})

    def verify_outer_point(self, cc: CubicCoupling, n: int) -> CheckResult:
        """沿 q_n∘ω_n 的子耦合等于 μ^⟦n⟧"""
        phi = outer_point_morphism(n)
        pulled = subcoupling(cc.measure(2 * n), _morphism_labels(phi))
        cylinder = cc.measure(n).difference_witness(pulled)
        return CheckResult.from_bool("outer_point", cylinder is None, {"n": n}, {"morphism": str(phi)},
                                     {"cylinder": list(cylinder) if cylinder else None})

    def verify_face_locality(self, cc: CubicCoupling, n: int) -> CheckResult:
        """⟦n⟧ 的每个面都是局部的"""
        mu = cc.measure(n)
        all_faces = faces(n)
        for face in all_faces:
            if not is_local(mu, face.vertices()):
                return CheckResult.from_bool("face_locality", False, {"n": n}, {"faces": len(all_faces)},
                                             {"face": str(face)})
        return CheckResult.from_bool("face_locality", True, {"n": n}, {"faces": len(all_faces)})

    def verify_keybot(self, cc: CubicCoupling, d: int) -> CheckResult:
        """μ^⟦d⟧ 中 A_{0^d} ⫫ A_{K_d}（条件期望算子可交换）"""
        if d > 3:
            raise DimensionError(f"keybot 检查只做到 d=3，实际为 {d}")
        mu = cc.measure(d)
        space = mu.support_space()
        root = mu.coordinate_partition(vertices(d)[:1], space)
        corner_partition = mu.coordinate_partition(corner(d), space)
        ok = cond_independent_pair(root, corner_partition)
        return CheckResult.from_bool("keybot", ok, {"d": d},
                                     {"root_blocks": len(root), "corner_blocks": len(corner_partition)},
                                     {"d": d})

    def verify_aut_invariance(self, cc: CubicCoupling, n: int) -> CheckResult:
        """μ^⟦n⟧ 在全部 2^n·n! 个自同构下不变"""
        mu = cc.measure(n)
        automorphisms = enumerate_morphisms(n, n, MorphismFilter.AUTOMORPHISM)
        for phi in automorphisms:
            cylinder = mu.difference_witness(subcoupling(mu, _morphism_labels(phi)))
            if cylinder is not None:
                return CheckResult.from_bool("aut_invariance", False, {"n": n}, {"automorphisms": len(automorphisms)},
                                             {"morphism": str(phi), "cylinder": list(cylinder)})
        return CheckResult.from_bool("aut_invariance", True, {"n": n}, {"automorphisms": len(automorphisms)})

    def verify_derived(self, cc: CubicCoupling, n: Optional[int] = None) -> VerificationReport:
        """
        全部推论检查

        维数不够的项标为 n/a（例如三元立方体需要 ⟦2n⟧）
        """
        n = min(cc.n_max, 3) if n is None else n
        report = VerificationReport(name="derived")
        checks: List[Any] = [
            ("simplicial_cis", lambda: self.verify_simplicial_cis(cc, n), n),
            ("face_locality", lambda: self.verify_face_locality(cc, n), n),
            ("aut_invariance", lambda: self.verify_aut_invariance(cc, n), n),
            ("keybot", lambda: self.verify_keybot(cc, n), n),
            ("tricube_symmetry", lambda: self.verify_tricube_symmetry(cc, 1), 2),
            ("outer_point", lambda: self.verify_outer_point(cc, 1), 2),
        ]
        if cc.n_max >= 4 and len(cc.base.support()) <= 3:
            checks.append(("tricube_symmetry_2", lambda: self.verify_tricube_symmetry(cc, 2), 4))
            checks.append(("outer_point_2", lambda: self.verify_outer_point(cc, 2), 4))
        for check_id, run, needed in checks:
            if needed > cc.n_max:
                report.add(CheckResult.not_applicable(check_id, f"需要 ⟦{needed}⟧，验证范围只到 {cc.n_max}"))
                continue
            report.add(run())
        return report
