"""
公理、导出结构与幂等性检查命令
"""

from pathlib import Path
from typing import Optional

from ...config import Config
from ...core.couplings import idempotence_witness, recover_factor
from ...services.reports import CheckResult, Report
from ..specs import CouplingSpec, load_spec
from ..utils import Timer, command_errors, emit_report, get_toolkit, print_info
from .sources import resolve_cubic_coupling


def verify_axioms_command(group: Optional[str], system: Optional[Path], n_max: int = Config.DEFAULT_NMAX,
                          output: Optional[Path] = None, timing: bool = False):
    """检查两套立方耦合公理及其一致性"""
    with command_errors("检查公理"):
        timer = Timer(timing)
        toolkit = get_toolkit()
        with timer.phase("build"):
            cc, _, params = resolve_cubic_coupling(group, system, n_max)
        print_info(f"检查 {cc.name}，n ≤ {n_max}")
        with timer.phase("verify"):
            checks = toolkit.verify_axioms(cc, n_max)
        report = Report(command="verify-axioms", params=params, results=checks.checks, timing=timer.finish())
    emit_report(report, output)


def verify_derived_command(group: Optional[str], system: Optional[Path], n: Optional[int] = None,
                           n_max: int = Config.DEFAULT_NMAX, output: Optional[Path] = None, timing: bool = False):
    """检查导出结构：单纯条件独立、三方体对称、外点耦合、面局部性等"""
    with command_errors("检查导出结构"):
        timer = Timer(timing)
        toolkit = get_toolkit()
        with timer.phase("build"):
            cc, _, params = resolve_cubic_coupling(group, system, n_max)
        with timer.phase("verify"):
            checks = toolkit.cubic.verify_derived(cc, n)
        report = Report(command="verify-derived", params={**params, "n": n}, results=checks.checks,
                        timing=timer.finish())
    emit_report(report, output)


def idempotence_command(coupling: Path, output: Optional[Path] = None, timing: bool = False):
    """检查双标签耦合是否幂等，幂等时给出对应的划分"""
    with command_errors("检查幂等性"):
        timer = Timer(timing)
        with timer.phase("parse"):
            mu = load_spec(coupling, CouplingSpec).to_coupling()
        with timer.phase("verify"):
            cylinder = idempotence_witness(mu)
            ok = cylinder is None
            values = {}
            if ok:
                partition = recover_factor(mu)
                values = {"blocks": [[str(atom) for atom in block] for block in partition.blocks()]}
        report = Report(command="idempotence", params={"coupling": str(coupling)},
                        results=[CheckResult.from_bool("idempotence", ok, values=values,
                                                       witness={"cylinder": [str(atom) for atom in cylinder or ()]})],
                        timing=timer.finish())
    emit_report(report, output)
