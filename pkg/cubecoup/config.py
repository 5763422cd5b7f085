"""
配置管理模块
"""

import os
from pathlib import Path
from typing import Optional

from .exceptions import CapExceededError, ConfigError


def get_thread_count() -> int:
    """获取采样线程数"""
    # 优先使用环境变量
    value = os.getenv('CUBECOUP_THREADS')
    if value:
        try:
            threads = int(value)
        except ValueError:
            raise ConfigError(f"CUBECOUP_THREADS 必须是正整数: {value}")
        if threads < 1:
            raise ConfigError(f"CUBECOUP_THREADS 必须是正整数: {value}")
        return threads

    return min(os.cpu_count() or 1, 8)


def get_log_file() -> Optional[Path]:
    """获取日志文件路径"""
    log_file = os.getenv('CUBECOUP_LOG_FILE')
    return Path(log_file) if log_file else None


class Config:
    """配置类"""

    REPORT_VERSION = '1.0.0'

    # 枚举上限
    MAX_VERTEX_DIM = 12
    MAX_BLOWUP_DIM = 4
    MAX_MORPHISM_DIM = 4
    DENSE_COUPLING_CAP = 10 ** 7
    MAX_SUPPORT = 10 ** 6
    MAX_CUBE_ENUMERATION = 65536
    MAX_GROUP_ORDER = 50000

    # 验证范围
    DEFAULT_NMAX = 3
    MAX_SPACE_ATOMS = 16
    MAX_DENSITY_GROUP = 64
    FILTRATION_WORD_LENGTH = 4

    # 浮点模式容差
    FLOAT_TOLERANCE = 1e-9

    # 统计检验
    TV_THRESHOLD_FACTOR = 3.0
    CHI2_QUANTILE = 0.99
    MIN_SAMPLES_PER_STATE = 20
    SAMPLE_CHUNK = 10_000

    # 由 --unsafe 或 CUBECOUP_UNSAFE=1 打开
    UNSAFE = os.getenv('CUBECOUP_UNSAFE', '') == '1'


def check_cap(size: int, limit: int, what: str) -> None:
    """
    检查枚举规模

    Args:
        size: 实际规模
        limit: 上限
        what: 被枚举对象的描述

    Raises:
        CapExceededError: 规模超限且未开启 unsafe 模式
    """
    if size > limit and not Config.UNSAFE:
        raise CapExceededError(f"{what} 的规模 {size} 超过上限 {limit}（可使用 --unsafe 解除）", size=size, limit=limit)
