"""
一致性范数、卷积、模式密度与特征因子命令
"""

from pathlib import Path
from typing import Optional

from ...core.cube_combinatorics import format_bits
from ...core.scalars import ScalarMode
from ...services.reports import CheckResult, Report
from ..specs import FunctionSpec, FunctionSystemSpec, PatternSpec, load_spec
from ..utils import Timer, command_errors, emit_report, get_toolkit, print_info
from .sources import resolve_cubic_coupling, resolve_group


def gowers_command(group: str, function: Path, degree: int, output: Optional[Path] = None,
                   mode: ScalarMode = ScalarMode.EXACT, timing: bool = False):
    """计算 ‖f‖_{U^d}"""
    with command_errors("计算 U^d 范数"):
        timer = Timer(timing)
        toolkit = get_toolkit()
        with timer.phase("parse"):
            z = resolve_group(group)
            f = load_spec(function, FunctionSpec).to_function(z.as_space(), mode)
        print_info(f"计算 {z} 上的 U^{degree} 范数")
        with timer.phase("compute"):
            values = toolkit.gowers_norm(z, f, degree)
        params = {"group": str(z), "function": str(function), "degree": degree, "mode": mode.value}
        report = Report(command="gowers", params=params,
                        results=[CheckResult.from_bool("gowers", True, values=values)], timing=timer.finish())
    emit_report(report, output)


def convolve_command(group: str, system: Path, degree: int, output: Optional[Path] = None,
                     mode: ScalarMode = ScalarMode.EXACT, timing: bool = False):
    """计算 U^d 卷积 [F]_{U^d}，并检查 ⟨F⟩ = ∫ f_0·conj([F])"""
    with command_errors("计算 U^d 卷积"):
        timer = Timer(timing)
        toolkit = get_toolkit()
        with timer.phase("parse"):
            z = resolve_group(group)
            cc = toolkit.standard_cubic_coupling(z, max(degree, 1))
            partial = load_spec(system, FunctionSystemSpec).to_system(cc.base, mode)
            full = toolkit.uniformity.full_system(cc, degree, partial)
        with timer.phase("compute"):
            convolution = toolkit.uniformity.u_convolution(cc, degree, full)
            identity = toolkit.uniformity.convolution_identity(cc, degree, full)
        values = {"convolution": {str(atom): convolution(atom) for atom in cc.base.atoms},
                  "vertices": sorted(format_bits(v) for v in partial)}
        report = Report(command="convolve",
                        params={"group": str(z), "system": str(system), "degree": degree, "mode": mode.value},
                        results=[CheckResult.from_bool("convolution", True, values=values),
                                 CheckResult.from_bool("convolution_identity", identity)],
                        timing=timer.finish())
    emit_report(report, output)


def density_command(group: str, function: Path, pattern: Optional[Path] = None, gowers: Optional[int] = None,
                    output: Optional[Path] = None, mode: ScalarMode = ScalarMode.EXACT, timing: bool = False):
    """计算立方模式密度 t(S1, S2, f)"""
    with command_errors("计算模式密度"):
        timer = Timer(timing)
        toolkit = get_toolkit()
        with timer.phase("parse"):
            z = resolve_group(group)
            f = load_spec(function, FunctionSpec).to_function(z.as_space(), mode)
            if pattern is not None:
                spec = load_spec(pattern, PatternSpec)
            else:
                spec = PatternSpec(k=gowers if gowers is not None else 2, gowers=True)
            p = spec.to_pattern()
        with timer.phase("compute"):
            density = toolkit.pattern_density(z, f, p)
        report = Report(command="density",
                        params={"group": str(z), "function": str(function), "pattern": str(p), "mode": mode.value},
                        results=[CheckResult.from_bool("pattern_density", True, values={"density": density})],
                        timing=timer.finish())
    emit_report(report, output)


def factor_command(group: Optional[str], system: Optional[Path], k: int, output: Optional[Path] = None,
                   timing: bool = False):
    """计算第 k 个 Fourier σ-代数 F_k（Host–Kra 输入时还检查块的群不变性）"""
    with command_errors("计算特征因子"):
        timer = Timer(timing)
        toolkit = get_toolkit()
        with timer.phase("build"):
            cc, action, params = resolve_cubic_coupling(group, system, max(k + 1, 1))
        with timer.phase("compute"):
            if action is not None:
                partition = toolkit.host_kra.hk_factor(action, k, cc)
            else:
                partition = toolkit.uniformity.fourier_sigma_algebra(cc, k)
        blocks = [[str(atom) for atom in block] for block in partition.blocks()]
        values = {"blocks": blocks, "n_blocks": len(blocks), "trivial": partition.is_trivial(),
                  "discrete": partition.is_discrete()}
        report = Report(command="factor", params={**params, "k": k},
                        results=[CheckResult.from_bool("fourier_factor", True, values=values)],
                        timing=timer.finish())
    emit_report(report, output)
