#!/usr/bin/env python3
"""
cubecoup 安装脚本 - 向后兼容
现代化配置请查看 pyproject.toml
"""

from setuptools import setup

# 现代化配置已迁移到 pyproject.toml
# 这个文件主要用于向后兼容
if __name__ == "__main__":
    setup()
