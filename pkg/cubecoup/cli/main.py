#!/usr/bin/env python3
"""
cubecoup CLI 主入口
"""

import logging
from pathlib import Path
from typing import Optional

import typer
from typer import Context

from .. import __version__
from ..config import Config
from ..core.scalars import ScalarMode
from ..utils.logger import set_level
from .commands.exchange import sample_zeta_command, test_exchangeable_command
from .commands.host_kra import host_kra_command
from .commands.norms import convolve_command, density_command, factor_command, gowers_command
from .commands.verify import idempotence_command, verify_axioms_command, verify_derived_command
from .utils import print_usage_table, print_warning

# CLI 模式下默认只输出 WARNING 及以上的日志
set_level(logging.WARNING)

# 创建主应用
app = typer.Typer(
    name="cubecoup",
    help="🧊 立方耦合工具包",
    rich_markup_mode="rich",
    no_args_is_help=True
)

OUTPUT_OPTION = typer.Option(None, "--output", "-o", help="报告输出文件（默认写到标准输出）")
TIMING_OPTION = typer.Option(False, "--timing", help="在报告中记录耗时")
MODE_OPTION = typer.Option(ScalarMode.EXACT, "--mode", help="标量模式：exact 或 float")
GROUP_OPTION = typer.Option(None, "--group", "-g", help="循环因子的阶，如 5 或 2,2，或群规格文件")
SYSTEM_OPTION = typer.Option(None, "--system", "-s", help="滤过作用的系统规格文件")
NMAX_OPTION = typer.Option(Config.DEFAULT_NMAX, "--nmax", "-n", help="检查的最大维数")


@app.callback()
def main(
    ctx: Context,
    verbose: bool = typer.Option(False, "--verbose", "-v", help="输出调试日志"),
    unsafe: bool = typer.Option(False, "--unsafe", help="解除枚举规模上限"),
):
    """
    🧊 立方耦合工具包

    计算一致性范数、检查立方耦合公理、构造 Host–Kra 耦合、采样并检验立方可交换测度。
    """
    _ = ctx
    if verbose:
        set_level(logging.DEBUG)
    if unsafe:
        Config.UNSAFE = True
        print_warning("已解除枚举规模上限")


@app.command()
def gowers(
    group: str = typer.Option(..., "--group", "-g", help="循环因子的阶，如 5 或 2,2，或群规格文件"),
    function: Path = typer.Option(..., "--function", "-f", help="函数规格文件"),
    degree: int = typer.Option(2, "--degree", "-d", help="次数 d"),
    mode: ScalarMode = MODE_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    timing: bool = TIMING_OPTION,
):
    """计算 Gowers U^d 范数"""
    gowers_command(group, function, degree, output, mode, timing)


@app.command()
def convolve(
    group: str = typer.Option(..., "--group", "-g", help="循环因子的阶，如 5 或 2,2，或群规格文件"),
    system: Path = typer.Option(..., "--system", "-s", help="函数组规格文件（角顶点上的函数）"),
    degree: int = typer.Option(2, "--degree", "-d", help="次数 d"),
    mode: ScalarMode = MODE_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    timing: bool = TIMING_OPTION,
):
    """计算 U^d 卷积（对偶函数）"""
    convolve_command(group, system, degree, output, mode, timing)


@app.command()
def density(
    group: str = typer.Option(..., "--group", "-g", help="循环因子的阶，如 5 或 2,2，或群规格文件"),
    function: Path = typer.Option(..., "--function", "-f", help="函数规格文件"),
    pattern: Optional[Path] = typer.Option(None, "--pattern", "-p", help="模式规格文件"),
    gowers_k: Optional[int] = typer.Option(None, "--gowers", help="使用 ⟦k⟧ 上的 Gowers 模式"),
    mode: ScalarMode = MODE_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    timing: bool = TIMING_OPTION,
):
    """计算立方模式密度"""
    density_command(group, function, pattern, gowers_k, output, mode, timing)


@app.command("verify-axioms")
def verify_axioms(
    group: Optional[str] = GROUP_OPTION,
    system: Optional[Path] = SYSTEM_OPTION,
    n_max: int = NMAX_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    timing: bool = TIMING_OPTION,
):
    """检查立方耦合公理（两套公理及其一致性）"""
    verify_axioms_command(group, system, n_max, output, timing)


@app.command("verify-derived")
def verify_derived(
    group: Optional[str] = GROUP_OPTION,
    system: Optional[Path] = SYSTEM_OPTION,
    n: Optional[int] = typer.Option(None, "--n", help="只检查这一维"),
    n_max: int = NMAX_OPTION,
    output: Optional[Path] = OUTPUT_OPTION,
    timing: bool = TIMING_OPTION,
):
    """检查导出结构"""
    verify_derived_command(group, system, n, n_max, output, timing)


@app.command("host-kra")
def host_kra(
    system: Path = typer.Option(..., "--system", "-s", help="滤过作用的系统规格文件"),
    n_max: int = NMAX_OPTION,
    compare_group: Optional[str] = typer.Option(None, "--compare-group", help="与该群的标准立方耦合比较"),
    output: Optional[Path] = OUTPUT_OPTION,
    timing: bool = TIMING_OPTION,
):
    """构造 Host–Kra 立方耦合并检查"""
    host_kra_command(system, n_max, compare_group, output, timing)


@app.command()
def factor(
    group: Optional[str] = GROUP_OPTION,
    system: Optional[Path] = SYSTEM_OPTION,
    k: int = typer.Option(1, "--k", "-k", help="因子的阶 k（计算 F_k）"),
    output: Optional[Path] = OUTPUT_OPTION,
    timing: bool = TIMING_OPTION,
):
    """计算 Fourier σ-代数 F_k"""
    factor_command(group, system, k, output, timing)


@app.command()
def idempotence(
    coupling: Path = typer.Option(..., "--coupling", "-c", help="双标签耦合规格文件"),
    output: Optional[Path] = OUTPUT_OPTION,
    timing: bool = TIMING_OPTION,
):
    """检查耦合的幂等性"""
    idempotence_command(coupling, output, timing)


@app.command("sample-zeta")
def sample_zeta(
    kernel: Path = typer.Option(..., "--kernel", "-k", help="核规格文件"),
    window: int = typer.Option(2, "--window", "-w", help="窗口维数 n"),
    samples: int = typer.Option(10000, "--samples", help="样本数"),
    seed: int = typer.Option(0, "--seed", help="随机种子"),
    csv_path: Optional[Path] = typer.Option(None, "--csv", help="样本 CSV 输出文件"),
    corrupted: bool = typer.Option(False, "--corrupted", help="使用共用 h 的反例采样器"),
    output: Optional[Path] = OUTPUT_OPTION,
    timing: bool = TIMING_OPTION,
):
    """从 ζ_{Z,m} 采样"""
    sample_zeta_command(kernel, window, samples, seed, csv_path, corrupted, output, timing)


@app.command("test-exchangeable")
def test_exchangeable(
    kernel: Path = typer.Option(..., "--kernel", "-k", help="核规格文件"),
    window: int = typer.Option(2, "--window", "-w", help="窗口维数 n"),
    samples: int = typer.Option(100000, "--samples", help="样本数"),
    seed: int = typer.Option(0, "--seed", help="随机种子"),
    corrupted: bool = typer.Option(False, "--corrupted", help="使用共用 h 的反例采样器"),
    exact: bool = typer.Option(False, "--exact", help="同时做精确枚举检验"),
    output: Optional[Path] = OUTPUT_OPTION,
    timing: bool = TIMING_OPTION,
):
    """检验立方可交换性（一致性与独立面性质）"""
    test_exchangeable_command(kernel, window, samples, seed, corrupted, exact, output, timing)


@app.command()
def info():
    """显示命令与输入格式说明"""
    print_usage_table({
        "gowers": "U^d 范数：--group 5 --function f.json --degree 2",
        "convolve": "U^d 卷积：--group 3 --system fs.json --degree 2",
        "density": "模式密度：--group 3 --function f.json --pattern p.json",
        "verify-axioms": "公理检查：--group 2 或 --system zn_shift.json，--nmax 3",
        "verify-derived": "导出结构检查：--group 2 --nmax 4",
        "host-kra": "Host–Kra 构造：--system zn_shift.json --compare-group 3",
        "factor": "Fourier σ-代数：--group 4 --k 1",
        "idempotence": "幂等性：--coupling c.json",
        "sample-zeta": "ζ 采样：--kernel k.json --window 2 --samples 10000 --csv out.csv",
        "test-exchangeable": "可交换性检验：--kernel k.json --window 2 --samples 100000 --exact",
    })
    typer.echo(f"cubecoup {__version__}；退出码 0 通过，1 存在失败的检查，2 输入错误")


if __name__ == "__main__":
    app()
