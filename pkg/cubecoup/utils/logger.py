# -*- coding: utf-8 -*-
"""
日志工具模块

包内所有模块的日志记录器都是 "cubecoup" 的子记录器，只在根上挂处理器。
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from ..config import get_log_file

ROOT_LOGGER = "cubecoup"

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logger(
    name: str = ROOT_LOGGER,
    level: int = logging.INFO,
    log_file: Optional[Path] = None,
    console: bool = True
) -> logging.Logger:
    """
    配置日志记录器

    Args:
        name: 日志记录器名称
        level: 日志级别
        log_file: 日志文件路径，缺省时读取 CUBECOUP_LOG_FILE
        console: 是否输出到标准错误

    Returns:
        配置好的日志记录器
    """
    logger = logging.getLogger(name)

    # 清除现有处理器以允许重新配置
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    logger.setLevel(level)
    logger.propagate = False
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    # stdout 留给报告
    if console:
        stream = logging.StreamHandler(sys.stderr)
        stream.setFormatter(formatter)
        logger.addHandler(stream)

    log_file = log_file or get_log_file()
    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def set_level(level: int, name: str = ROOT_LOGGER) -> None:
    """调整日志级别（处理器不设级别，只改记录器即可）"""
    logging.getLogger(name).setLevel(level)


def get_logger(name: str = ROOT_LOGGER) -> logging.Logger:
    """
    获取日志记录器

    包外的名字挂到 cubecoup 之下，保证共用同一组处理器
    """
    if name != ROOT_LOGGER and not name.startswith(ROOT_LOGGER + '.'):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)
