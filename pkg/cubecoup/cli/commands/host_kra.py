"""
Host–Kra 构造命令
"""

from pathlib import Path
from typing import Optional

from ...config import Config
from ...services.reports import Report
from ..specs import SystemSpec, load_spec, parse_group
from ..utils import Timer, command_errors, emit_report, get_toolkit, print_info, print_warning


def host_kra_command(system: Path, n_max: int = Config.DEFAULT_NMAX, compare_group: Optional[str] = None,
                     output: Optional[Path] = None, timing: bool = False):
    """
    构造 Host–Kra 立方耦合并检查

    作用不遍历时，依赖遍历性的结论记为 n/a；给出 --compare-group（或规格中的 group）时与标准立方耦合逐维比较
    """
    with command_errors("Host–Kra 构造"):
        timer = Timer(timing)
        toolkit = get_toolkit()
        with timer.phase("parse"):
            spec = load_spec(system, SystemSpec)
            action = spec.to_action()
            group = parse_group(compare_group) if compare_group else (spec.group.to_group() if spec.group else None)
        if not action.is_ergodic():
            print_warning("作用不是遍历的，相关结论记为 n/a")
        print_info(f"Host–Kra 耦合: {len(action.space)} 个原子, n ≤ {n_max}")
        with timer.phase("verify"):
            checks = toolkit.host_kra.verify_host_kra(action, n_max, group)
        params = {"system": str(system), "n_max": n_max, "compare_group": str(group) if group else None}
        report = Report(command="host-kra", params=params, results=checks.checks, timing=timer.finish())
    emit_report(report, output)
