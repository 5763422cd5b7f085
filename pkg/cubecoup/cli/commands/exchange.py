"""
ζ 采样与立方可交换性检验命令
"""

from pathlib import Path
from typing import Optional

from ...services.reports import CheckResult, Report
from ..specs import KernelSpec, load_spec
from ..utils import Timer, command_errors, emit_report, get_toolkit, print_info, print_success


def sample_zeta_command(kernel: Path, window: int, samples: int, seed: int = 0, csv_path: Optional[Path] = None,
                        corrupted: bool = False, output: Optional[Path] = None, timing: bool = False):
    """从 ζ_{Z,m} 采样，可选写出 CSV"""
    with command_errors("ζ 采样"):
        timer = Timer(timing)
        toolkit = get_toolkit()
        with timer.phase("parse"):
            m = load_spec(kernel, KernelSpec).to_kernel()
        print_info(f"采样 {samples} 个样本，窗口 ⟦{window}⟧，种子 {seed}")
        with timer.phase("sample"):
            batch = toolkit.sample_zeta(m, window, samples, seed, corrupted=corrupted, progress=True)
        if csv_path is not None:
            with timer.phase("write"):
                rows = toolkit.exchange.write_batch_csv(batch, csv_path)
            print_success(f"已写出 {rows} 行到 {csv_path}")

        counts = [int((batch.samples == i).sum()) for i in range(len(batch.alphabet))]
        values = {"n_samples": batch.n_samples, "symbol_counts": dict(zip(map(str, batch.alphabet), counts))}
        params = {"kernel": str(kernel), "window": window, "samples": samples, "seed": seed,
                  "sampler": batch.sampler, "csv": str(csv_path) if csv_path else None}
        report = Report(command="sample-zeta", params=params,
                        results=[CheckResult.from_bool("sample", True, values=values)], timing=timer.finish())
    emit_report(report, output)


def test_exchangeable_command(kernel: Path, window: int, samples: int, seed: int = 0, corrupted: bool = False,
                              exact: bool = False, output: Optional[Path] = None, timing: bool = False):
    """统计检验（以及 --exact 时的精确检验）一致性与独立面性质"""
    with command_errors("可交换性检验"):
        timer = Timer(timing)
        toolkit = get_toolkit()
        with timer.phase("parse"):
            m = load_spec(kernel, KernelSpec).to_kernel()
        results = []
        if exact:
            with timer.phase("exact"):
                law = toolkit.exchange.exact_window_law(m, window, corrupted=corrupted)
                results.extend(toolkit.exchange.verify_exact(law).checks)
        with timer.phase("sample"):
            batch = toolkit.sample_zeta(m, window, samples, seed, corrupted=corrupted, progress=True)
        with timer.phase("test"):
            results.extend(toolkit.test_exchangeable(batch).checks)
        params = {"kernel": str(kernel), "window": window, "samples": samples, "seed": seed,
                  "sampler": batch.sampler, "exact": exact}
        report = Report(command="test-exchangeable", params=params, results=results, timing=timer.finish())
    emit_report(report, output)
