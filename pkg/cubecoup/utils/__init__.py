# -*- coding: utf-8 -*-
"""
工具模块
"""

from .logger import get_logger, set_level, setup_logger

__all__ = [
    'setup_logger',
    'set_level',
    'get_logger'
]
