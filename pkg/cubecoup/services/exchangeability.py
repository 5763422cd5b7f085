# -*- coding: utf-8 -*-
"""
立方可交换性：模式密度、ζ_{Z,m} 采样器与可交换性检验

有限窗口 ⟦n⟧ 上的 ζ 律既可以采样，也可以在小规模下精确枚举（得到字母表上的耦合）。
"""

import csv
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import stats
from tqdm import tqdm

from ..config import Config, check_cap, get_thread_count
from ..core.couplings import Coupling, subcoupling
from ..core.cube_combinatorics import (
    CubeMorphism, Face, MorphismFilter, Vertex, check_vertex, enumerate_morphisms, faces, format_bits, height,
    vertex_index, vertices,
)
from ..core.finite_measure import FiniteProbSpace, FunctionOnSpace, independent
from ..core.scalars import Scalar, parse_rational, product, to_float
from ..exceptions import DimensionError, SampleSizeError, SpaceMismatchError
from ..utils.logger import get_logger
from .abelian_cubes import AbelianCubeService, Element, FiniteAbelianGroup
from .reports import CheckResult, VerificationReport

Symbol = Hashable


@dataclass(frozen=True)
class Pattern:
    """
    立方模式 (S1, S2)

    plain 中的顶点取 f，conjugated 中的顶点取 conj f；两者都是多重集，可以相交（相交处得到 |f|² 因子）
    """

    k: int
    plain: Tuple[Vertex, ...]
    conjugated: Tuple[Vertex, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, 'plain', tuple(sorted(check_vertex(v, self.k) for v in self.plain)))
        object.__setattr__(self, 'conjugated', tuple(sorted(check_vertex(v, self.k) for v in self.conjugated)))

    @classmethod
    def gowers(cls, k: int) -> 'Pattern':
        """偶高度顶点取 f，奇高度顶点取 conj f"""
        verts = vertices(k)
        return cls(k, tuple(v for v in verts if height(v) % 2 == 0), tuple(v for v in verts if height(v) % 2 == 1))

    def __str__(self) -> str:
        plain = ','.join(format_bits(v) for v in self.plain)
        conj = ','.join(format_bits(v) for v in self.conjugated)
        return f"k={self.k} S1={{{plain}}} S2={{{conj}}}"


class KernelMap:
    """核 m: Z → P(B)，每个分布按字母表顺序存储"""

    def __init__(self, group: FiniteAbelianGroup, alphabet: Sequence[Symbol],
                 table: Mapping[Element, Mapping[Symbol, Any]]):
        self.group = group
        self.alphabet: Tuple[Symbol, ...] = tuple(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError(f"字母表有重复符号: {list(self.alphabet)}")
        self._index = {symbol: i for i, symbol in enumerate(self.alphabet)}

        self.table: Dict[Element, Tuple[Fraction, ...]] = {}
        normalized = {group.normalize(x): dist for x, dist in table.items()}
        for x in group.elements():
            if x not in normalized:
                raise DimensionError(f"核缺少元素 {x} 的分布")
            dist = normalized[x]
            unknown = set(dist) - set(self.alphabet)
            if unknown:
                raise ValueError(f"元素 {x} 的分布含有字母表外的符号: {sorted(map(str, unknown))}")
            row = tuple(parse_rational(dist.get(symbol, 0)) for symbol in self.alphabet)
            if any(p < 0 for p in row) or sum(row) != 1:
                raise ValueError(f"元素 {x} 的分布不是概率分布: {[str(p) for p in row]}")
            self.table[x] = row

    @classmethod
    def point_mass(cls, group: FiniteAbelianGroup) -> 'KernelMap':
        """m(x) = δ_x，字母表即群本身"""
        elements = group.elements()
        return cls(group, elements, {x: {x: 1} for x in elements})

    @classmethod
    def constant(cls, group: FiniteAbelianGroup, symbol: Symbol, alphabet: Optional[Sequence[Symbol]] = None) -> 'KernelMap':
        alphabet = alphabet or (symbol,)
        return cls(group, alphabet, {x: {symbol: 1} for x in group.elements()})

    @classmethod
    def uniform(cls, group: FiniteAbelianGroup, alphabet: Sequence[Symbol]) -> 'KernelMap':
        p = Fraction(1, len(alphabet))
        return cls(group, alphabet, {x: {symbol: p for symbol in alphabet} for x in group.elements()})

    def symbol_index(self, symbol: Symbol) -> int:
        return self._index[symbol]

    def distribution(self, x: Element) -> Tuple[Fraction, ...]:
        return self.table[self.group.normalize(x)]

    def marginal(self) -> List[Fraction]:
        """ζ 在单个顶点上的边缘分布：m(x) 对 x 取平均"""
        order = self.group.order
        return [sum(self.table[x][i] for x in self.group.elements()) / order for i in range(len(self.alphabet))]

    def probability_matrix(self) -> np.ndarray:
        """按 group.elements() 顺序排列的 |Z|×|B| 浮点矩阵"""
        return np.array([[float(p) for p in self.table[x]] for x in self.group.elements()], dtype=float)


@dataclass
class SampleBatch:
    """ζ 在窗口 ⟦n⟧ 上的样本：samples[i, j] 是第 i 个样本在 vertices(n)[j] 处的符号编号"""

    seed: int
    n: int
    alphabet: Tuple[Symbol, ...]
    samples: np.ndarray
    sampler: str = "zeta"
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def n_samples(self) -> int:
        return int(self.samples.shape[0])

    @property
    def verts(self) -> List[Vertex]:
        return vertices(self.n)


def _check_window(n: int) -> None:
    if n < 0 or n > Config.MAX_BLOWUP_DIM:
        raise DimensionError(f"窗口维数必须在 0 到 {Config.MAX_BLOWUP_DIM} 之间: {n}")


def _pull(law: Coupling, phi: CubeMorphism) -> Coupling:
    return subcoupling(law, {v: phi(v) for v in vertices(phi.domain_dim)})


def _window_dim(law: Coupling) -> int:
    n = len(law.labels).bit_length() - 1
    if list(law.labels) != vertices(n):
        raise DimensionError("窗口律的标签必须是 vertices(n)")
    return n


def independent_face_pairs(n: int) -> List[Tuple[Face, Face]]:
    """自由坐标不相交且交集为空的面对（无序，按面的规范顺序）"""
    all_faces = faces(n)
    pairs = []
    for i, f1 in enumerate(all_faces):
        for f2 in all_faces[i + 1:]:
            if set(f1.free_coords) & set(f2.free_coords):
                continue
            if f1.intersection(f2) is None:
                pairs.append((f1, f2))
    return pairs


def _face_labels(face: Face) -> List[Vertex]:
    return [v for v in vertices(face.n) if face.contains(v)]


class ExchangeabilityService:
    """模式密度、ζ 采样与可交换性检验"""

    def __init__(self, abelian: Optional[AbelianCubeService] = None):
        self.abelian = abelian or AbelianCubeService()
        self.logger = get_logger(__name__)

    # ------------------------------------------------------------ 模式密度

    def pattern_density(self, group: FiniteAbelianGroup, f: FunctionOnSpace, pattern: Pattern) -> Scalar:
        """
        t(S1, S2, f)：立方体群上 ∏_{S1} f(q(v)) · ∏_{S2} conj f(q(v)) 的平均

        Raises:
            CapExceededError: |Z| 或 |Z|^{k+1} 超出上限
        """
        check_cap(group.order, Config.MAX_DENSITY_GROUP, "模式密度的群")
        conj = f.conj()
        plain = [vertex_index(v) for v in pattern.plain]
        conjugated = [vertex_index(v) for v in pattern.conjugated]
        counts = self.abelian.cube_points(group, pattern.k)
        total = sum(counts.values())
        result: Scalar = 0
        for point, count in counts.items():
            term = product([f(point[j]) for j in plain] + [conj(point[j]) for j in conjugated])
            result = result + term * count
        return result * Fraction(1, total)

    def is_cubic_convergent(self, sequence: Sequence[Tuple[FiniteAbelianGroup, FunctionOnSpace]],
                            patterns: Sequence[Pattern], eps: float = 1e-3) -> VerificationReport:
        """
        有限尾部上的 Cauchy 判断

        对每个模式给出密度序列、相邻差值与最后一个差值；最后一个差值不超过 eps 即视为收敛
        """
        report = VerificationReport(name="cubic_convergence")
        for pattern in patterns:
            densities = [self.pattern_density(group, f, pattern) for group, f in sequence]
            gaps = [abs(to_float(b - a)) for a, b in zip(densities, densities[1:])]
            last_gap = gaps[-1] if gaps else 0.0
            decreasing = all(b <= a for a, b in zip(gaps, gaps[1:]))
            report.add(CheckResult.from_bool(
                "cubic_convergence", last_gap <= eps,
                {"pattern": str(pattern), "eps": eps},
                {"densities": densities, "gaps": gaps, "last_gap": last_gap, "decreasing": decreasing},
                {"last_gap": last_gap},
            ))
        return report

    # ------------------------------------------------------------ 精确窗口律

    def exact_window_law(self, kernel: KernelMap, n: int, corrupted: bool = False) -> Coupling:
        """
        ζ 在 ⟦n⟧ 上的精确律（字母表上的耦合）

        Args:
            kernel: 核 m
            n: 窗口维数
            corrupted: 所有方向共用同一个 h（反例）

        Raises:
            CapExceededError: 枚举规模超出上限
        """
        _check_window(n)
        group = kernel.group
        verts = vertices(n)
        n_params = 2 if corrupted else n + 1
        check_cap(group.order ** n_params * len(kernel.alphabet) ** len(verts), Config.MAX_CUBE_ENUMERATION,
                  f"ζ 窗口 ⟦{n}⟧")

        weight = Fraction(1, group.order ** n_params)
        mass: Dict[Tuple[Symbol, ...], Fraction] = {}
        for params in itertools.product(group.elements(), repeat=n_params):
            x = params[0]
            steps = params[1:] * n if corrupted else params[1:]
            points = []
            for v in verts:
                y = x
                for bit, h in zip(v, steps):
                    if bit:
                        y = group.add(y, h)
                points.append(y)
            supports = [[(i, p) for i, p in enumerate(kernel.distribution(y)) if p] for y in points]
            for choice in itertools.product(*supports):
                key = tuple(kernel.alphabet[i] for i, _ in choice)
                mass[key] = mass.get(key, 0) + weight * product(p for _, p in choice)

        base = FiniteProbSpace(kernel.alphabet, kernel.marginal())
        self.logger.debug(f"ζ 窗口 ⟦{n}⟧: {len(mass)} 个支撑点")
        return Coupling(base, verts, mass)

    def mixture_law(self, law_a: Coupling, law_b: Coupling, weight: Any = Fraction(1, 2)) -> Coupling:
        """凸组合 w·law_a + (1−w)·law_b"""
        if law_a.base.atoms != law_b.base.atoms or list(law_a.labels) != list(law_b.labels):
            raise SpaceMismatchError("混合的两个律必须有相同的字母表与窗口")
        w = parse_rational(weight)
        if not 0 <= w <= 1:
            raise ValueError(f"混合权重必须在 [0, 1] 内: {w}")
        mass: Dict[Tuple[Symbol, ...], Scalar] = {}
        for key, value in law_a.items():
            mass[key] = mass.get(key, 0) + w * value
        for key, value in law_b.items():
            mass[key] = mass.get(key, 0) + (1 - w) * value
        weights = [w * a + (1 - w) * b for a, b in zip(law_a.base.weights, law_b.base.weights)]
        return Coupling(FiniteProbSpace(law_a.base.atoms, weights), law_a.labels, mass)

    def exact_consistency(self, law: Coupling) -> CheckResult:
        """任意两个单射态射 ⟦k⟧ → ⟦n⟧ 给出相同的边缘"""
        n = _window_dim(law)
        checked = 0
        for k in range(n + 1):
            morphisms = enumerate_morphisms(k, n, MorphismFilter.INJECTIVE)
            reference = _pull(law, morphisms[0])
            for phi in morphisms[1:]:
                checked += 1
                cylinder = reference.difference_witness(_pull(law, phi))
                if cylinder is not None:
                    return CheckResult.from_bool("exact_consistency", False, {"n": n}, {"checked": checked},
                                                 {"morphism": str(phi), "k": k, "cylinder": [str(s) for s in cylinder]})
        return CheckResult.from_bool("exact_consistency", True, {"n": n}, {"checked": checked})

    def exact_face_independence(self, law: Coupling) -> CheckResult:
        """独立面上的坐标在律下独立"""
        n = _window_dim(law)
        space = law.support_space()
        pairs = independent_face_pairs(n)
        for f1, f2 in pairs:
            p1 = law.coordinate_partition(_face_labels(f1), space)
            p2 = law.coordinate_partition(_face_labels(f2), space)
            if not independent(p1, p2):
                return CheckResult.from_bool("exact_face_independence", False, {"n": n}, {"pairs": len(pairs)},
                                             {"faces": [str(f1), str(f2)]})
        return CheckResult.from_bool("exact_face_independence", True, {"n": n}, {"pairs": len(pairs)})

    # ------------------------------------------------------------ 采样

    def _sample_chunk(self, kernel: KernelMap, n: int, size: int, seed_seq: np.random.SeedSequence,
                      corrupted: bool) -> np.ndarray:
        rng = np.random.default_rng(seed_seq)
        group = kernel.group
        elements = group.elements()
        index = {x: i for i, x in enumerate(elements)}
        add_table = np.array([[index[group.add(x, y)] for y in elements] for x in elements], dtype=np.int64)
        cdf = np.cumsum(kernel.probability_matrix(), axis=1)

        x = rng.integers(group.order, size=size)
        if corrupted:
            h = np.repeat(rng.integers(group.order, size=(size, 1)), max(n, 1), axis=1)
        else:
            h = rng.integers(group.order, size=(size, n))

        out = np.empty((size, 2 ** n), dtype=np.int64)
        for j, v in enumerate(vertices(n)):
            point = x.copy()
            for i, bit in enumerate(v):
                if bit:
                    point = add_table[point, h[:, i]]
            u = rng.random(size)
            symbols = (u[:, None] >= cdf[point]).sum(axis=1)
            out[:, j] = np.minimum(symbols, len(kernel.alphabet) - 1)
        return out

    def sample_zeta(self, kernel: KernelMap, n: int, n_samples: int, seed: int = 0, corrupted: bool = False,
                    workers: Optional[int] = None, progress: bool = False) -> SampleBatch:
        """
        ζ_{Z,m} 在 ⟦n⟧ 上的样本

        每个样本独立抽取 x, h_1, …, h_n，再对每个顶点 v 从 m(x + Σ v_i h_i) 独立抽取 Y_v。
        样本按 Config.SAMPLE_CHUNK 分块，第 i 块使用 SeedSequence(seed) 的第 i 个子序列，结果与线程数无关。

        Args:
            kernel: 核 m
            n: 窗口维数
            n_samples: 样本数
            seed: 主种子
            corrupted: 所有方向共用同一个 h（反例采样器）
            workers: 线程数，默认取 CUBECOUP_THREADS
            progress: 是否显示进度条

        Returns:
            样本批次
        """
        _check_window(n)
        if n_samples < 0:
            raise ValueError(f"样本数不能为负: {n_samples}")
        chunk = Config.SAMPLE_CHUNK
        sizes = [min(chunk, n_samples - start) for start in range(0, n_samples, chunk)]
        children = np.random.SeedSequence(seed).spawn(len(sizes))
        workers = workers or get_thread_count()
        self.logger.debug(f"采样 {n_samples} 个样本，{len(sizes)} 块，{workers} 个线程")

        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = executor.map(lambda args: self._sample_chunk(kernel, n, args[0], args[1], corrupted),
                                   zip(sizes, children))
            parts = list(tqdm(futures, total=len(sizes), desc="采样", ncols=80, disable=not progress))

        samples = np.concatenate(parts, axis=0) if parts else np.empty((0, 2 ** n), dtype=np.int64)
        return SampleBatch(seed=seed, n=n, alphabet=kernel.alphabet, samples=samples,
                           sampler="corrupted" if corrupted else "zeta",
                           params={"group": str(kernel.group), "n_samples": n_samples})

    def corrupted_sampler(self, kernel: KernelMap, n: int, n_samples: int, seed: int = 0, **kwargs: Any) -> SampleBatch:
        """所有方向共用同一个 h 的采样器（独立面检验应当失败）"""
        return self.sample_zeta(kernel, n, n_samples, seed, corrupted=True, **kwargs)

    # ------------------------------------------------------------ 统计检验

    def _codes(self, batch: SampleBatch, labels: Sequence[Vertex]) -> np.ndarray:
        base = len(batch.alphabet)
        codes = np.zeros(batch.n_samples, dtype=np.int64)
        for j, v in enumerate(labels):
            codes += batch.samples[:, vertex_index(v)] * base ** j
        return codes

    def _require_samples(self, batch: SampleBatch, states: int) -> None:
        required = Config.MIN_SAMPLES_PER_STATE * states
        if batch.n_samples < required:
            raise SampleSizeError(f"样本数 {batch.n_samples} 不足，{states} 个联合状态至少需要 {required} 个样本",
                                  n_samples=batch.n_samples, required=required)

    def test_consistency(self, batch: SampleBatch, k: Optional[int] = None) -> CheckResult:
        """
        单射态射 ⟦k⟧ → ⟦n⟧ 下经验边缘的一致性

        每个态射的经验律与第一个态射的经验律比较总变差距离，阈值 3·sqrt(S/N)（S 为联合状态数）
        """
        n = batch.n
        ks = range(1, n + 1) if k is None else [k]
        worst = 0.0
        checked = 0
        witness = None
        thresholds: Dict[int, float] = {}
        for dim in ks:
            states = len(batch.alphabet) ** (2 ** dim)
            self._require_samples(batch, states)
            threshold = Config.TV_THRESHOLD_FACTOR * math.sqrt(states / batch.n_samples)
            thresholds[dim] = threshold
            morphisms = enumerate_morphisms(dim, n, MorphismFilter.INJECTIVE)

            def empirical(phi: CubeMorphism) -> np.ndarray:
                codes = self._codes(batch, [phi(v) for v in vertices(dim)])
                return np.bincount(codes, minlength=states) / batch.n_samples

            reference = empirical(morphisms[0])
            for phi in morphisms[1:]:
                checked += 1
                tv = 0.5 * float(np.abs(empirical(phi) - reference).sum())
                if tv > worst:
                    worst = tv
                if tv > threshold and witness is None:
                    witness = {"morphism": str(phi), "k": dim, "tv": tv, "threshold": threshold}

        if witness is not None:
            self.logger.warning(f"一致性检验失败: {witness}")
        return CheckResult.from_bool("consistency_tv", witness is None,
                                     {"n": n, "seed": batch.seed, "n_samples": batch.n_samples, "sampler": batch.sampler},
                                     {"max_tv": worst, "thresholds": thresholds, "checked": checked}, witness)

    def test_face_independence(self, batch: SampleBatch) -> CheckResult:
        """
        独立面对上的卡方独立性检验

        每一对面做一次列联表检验；总显著性水平为 1 − CHI2_QUANTILE，按面对个数平分
        """
        pairs = independent_face_pairs(batch.n)
        if not pairs:
            return CheckResult.not_applicable("face_independence_chi2", "窗口内没有独立面对", {"n": batch.n})
        quantile = 1 - (1 - Config.CHI2_QUANTILE) / len(pairs)
        worst: Dict[str, Any] = {}
        witness = None
        for f1, f2 in pairs:
            labels1, labels2 = _face_labels(f1), _face_labels(f2)
            states1 = len(batch.alphabet) ** len(labels1)
            states2 = len(batch.alphabet) ** len(labels2)
            self._require_samples(batch, states1 * states2)

            table = np.zeros((states1, states2), dtype=np.int64)
            np.add.at(table, (self._codes(batch, labels1), self._codes(batch, labels2)), 1)
            table = table[table.sum(axis=1) > 0][:, table.sum(axis=0) > 0]
            if min(table.shape) < 2:
                statistic, critical, dof = 0.0, 0.0, 0
            else:
                statistic, _, dof, _ = stats.chi2_contingency(table, correction=False)
                critical = float(stats.chi2.ppf(quantile, dof))
            ratio = statistic / critical if critical else 0.0
            if not worst or ratio > worst["ratio"]:
                worst = {"faces": [str(f1), str(f2)], "statistic": float(statistic), "critical": critical,
                         "dof": int(dof), "ratio": ratio}
            if statistic > critical and witness is None:
                witness = {"faces": [str(f1), str(f2)], "statistic": float(statistic), "critical": critical}

        if witness is not None:
            self.logger.warning(f"独立面检验失败: {witness}")
        return CheckResult.from_bool("face_independence_chi2", witness is None,
                                     {"n": batch.n, "seed": batch.seed, "n_samples": batch.n_samples,
                                      "sampler": batch.sampler, "quantile": quantile},
                                     {"pairs": len(pairs), "worst": worst}, witness)

    def test_exchangeable(self, batch: SampleBatch) -> VerificationReport:
        report = VerificationReport(name="exchangeability")
        report.add(self.test_consistency(batch))
        report.add(self.test_face_independence(batch))
        return report

    def verify_exact(self, law: Coupling) -> VerificationReport:
        report = VerificationReport(name="exact_exchangeability")
        report.add(self.exact_consistency(law))
        report.add(self.exact_face_independence(law))
        return report

    # ------------------------------------------------------------ 输出

    def write_batch_csv(self, batch: SampleBatch, path: Path) -> int:
        """
        写出样本，每行 (sample_id, vertex_bits, symbol)

        Returns:
            写出的行数
        """
        path.parent.mkdir(parents=True, exist_ok=True)
        bits = [format_bits(v) for v in batch.verts]
        rows = 0
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f)
            writer.writerow(["sample_id", "vertex_bits", "symbol"])
            for i, sample in enumerate(batch.samples):
                for j, code in enumerate(sample):
                    writer.writerow([i, bits[j], _format_symbol(batch.alphabet[int(code)])])
                    rows += 1
        self.logger.info(f"已写出 {rows} 行样本到 {path}")
        return rows


def _format_symbol(symbol: Symbol) -> str:
    if isinstance(symbol, tuple):
        return ','.join(str(s) for s in symbol)
    return str(symbol)
