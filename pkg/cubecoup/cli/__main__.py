#!/usr/bin/env python3
"""
cubecoup CLI 模块主入口点
支持 python -m cubecoup.cli 调用
"""

from .main import app

if __name__ == "__main__":
    app()
