"""
异常定义模块
"""

from typing import Any, Optional


class CubeCoupError(Exception):
    """立方耦合工具包基础异常"""
    pass


class ConfigError(CubeCoupError):
    """配置相关异常"""
    pass


class SpecFormatError(CubeCoupError):
    """输入规格格式异常"""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.field = field
        self.line = line

    def __str__(self) -> str:
        location = []
        if self.line is not None:
            location.append(f"第 {self.line} 行")
        if self.field:
            location.append(f"字段 {self.field}")
        message = super().__str__()
        return f"{message} ({', '.join(location)})" if location else message


class DimensionError(CubeCoupError):
    """维数不匹配异常"""
    pass


class SpaceMismatchError(CubeCoupError):
    """概率空间不一致异常"""
    pass


class CapExceededError(CubeCoupError):
    """枚举规模超出上限"""

    def __init__(self, message: str, size: Optional[int] = None, limit: Optional[int] = None):
        super().__init__(message)
        self.size = size
        self.limit = limit


class CouplingError(CubeCoupError):
    """耦合构造或校验异常"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class VerificationError(CubeCoupError):
    """定理级恒等式在合法输入上失败"""
    pass


class SampleSizeError(CubeCoupError):
    """样本量不足以做统计检验"""

    def __init__(self, message: str, n_samples: Optional[int] = None, required: Optional[int] = None):
        super().__init__(message)
        self.n_samples = n_samples
        self.required = required
