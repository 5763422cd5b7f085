"""
命令的输入来源：群或系统规格
"""

from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from ...config import Config
from ...exceptions import SpecFormatError
from ...services.abelian_cubes import FiniteAbelianGroup
from ...services.cubic_coupling import CubicCoupling
from ...services.host_kra import FilteredAction
from ..specs import SystemSpec, load_spec, parse_group
from ..utils import get_toolkit, print_info


def resolve_cubic_coupling(group: Optional[str], system: Optional[Path],
                           n_max: int = Config.DEFAULT_NMAX) -> Tuple[CubicCoupling, Optional[FilteredAction], Dict[str, Any]]:
    """
    --group 给出标准立方耦合，--system 给出 Host–Kra 耦合（二者必须恰好给出一个）

    Returns:
        (立方耦合, 滤过作用或 None, 报告参数)
    """
    if (group is None) == (system is None):
        raise SpecFormatError("必须且只能给出 --group 或 --system 之一", field="--group/--system")
    toolkit = get_toolkit()
    if group is not None:
        z = parse_group(group)
        print_info(f"标准立方耦合: {z}")
        return toolkit.standard_cubic_coupling(z, n_max), None, {"group": str(z), "n_max": n_max}

    spec = load_spec(system, SystemSpec)
    if len(spec.atoms) > Config.MAX_SPACE_ATOMS and not Config.UNSAFE:
        raise SpecFormatError(f"原子个数 {len(spec.atoms)} 超过上限 {Config.MAX_SPACE_ATOMS}（可使用 --unsafe 解除）",
                              field="atoms")
    action = spec.to_action()
    print_info(f"Host–Kra 耦合: {len(spec.atoms)} 个原子, {action.degree} 层")
    return toolkit.host_kra_coupling(action, n_max), action, {"system": str(system), "n_max": n_max}


def resolve_group(group: str) -> FiniteAbelianGroup:
    z = parse_group(group)
    if z.order > Config.MAX_DENSITY_GROUP and not Config.UNSAFE:
        raise SpecFormatError(f"群的阶 {z.order} 超过上限 {Config.MAX_DENSITY_GROUP}（可使用 --unsafe 解除）",
                              field="--group")
    return z
