# -*- coding: utf-8 -*-
"""
报告模型与规范化 JSON 输出

同一输入、同一种子、同一版本得到逐字节相同的报告：键排序，有理数写成 "p/q"，浮点数保留 17 位有效数字。
"""

import json
import math
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from ..config import Config
from ..core.scalars import ComplexRational, PhaseScalar, format_scalar


class Verdict(str, Enum):
    """检查结论"""

    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "n/a"


class CheckResult(BaseModel):
    """单项检查"""

    check_id: str
    verdict: Verdict
    params: Dict[str, Any] = Field(default_factory=dict)
    values: Dict[str, Any] = Field(default_factory=dict)
    witness: Optional[Any] = None

    model_config = {"arbitrary_types_allowed": True}

    @classmethod
    def from_bool(cls, check_id: str, ok: bool, params: Optional[Dict[str, Any]] = None,
                  values: Optional[Dict[str, Any]] = None, witness: Any = None) -> 'CheckResult':
        return cls(
            check_id=check_id,
            verdict=Verdict.PASS if ok else Verdict.FAIL,
            params=params or {},
            values=values or {},
            witness=None if ok else witness,
        )

    @classmethod
    def not_applicable(cls, check_id: str, reason: str, params: Optional[Dict[str, Any]] = None) -> 'CheckResult':
        return cls(check_id=check_id, verdict=Verdict.NOT_APPLICABLE, params=params or {}, values={"reason": reason})

    @property
    def passed(self) -> bool:
        return self.verdict != Verdict.FAIL


class VerificationReport(BaseModel):
    """一组检查"""

    name: str
    checks: List[CheckResult] = Field(default_factory=list)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, other: 'VerificationReport') -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def verdict_of(self, check_id: str) -> Optional[Verdict]:
        for check in self.checks:
            if check.check_id == check_id:
                return check.verdict
        return None

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if check.verdict == Verdict.FAIL]


class Report(BaseModel):
    """命令行输出的报告"""

    version: str = Config.REPORT_VERSION
    command: str
    params: Dict[str, Any] = Field(default_factory=dict)
    results: List[CheckResult] = Field(default_factory=list)
    timing: Dict[str, float] = Field(default_factory=dict)

    model_config = {"arbitrary_types_allowed": True}

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)


def _format_float(value: float) -> Any:
    if math.isnan(value) or math.isinf(value):
        return str(value)
    return _RawNumber(format(value, '.17g'))


class _RawNumber(str):
    """已格式化的数字，写出时不加引号"""


def to_jsonable(value: Any) -> Any:
    """把报告中的值转换为可写出的结构"""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump(mode='python'))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, (Fraction, ComplexRational)):
        return to_jsonable(format_scalar(value))
    if isinstance(value, PhaseScalar):
        return to_jsonable(complex(value))
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, complex):
        return [_format_float(value.real), _format_float(value.imag)]
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return sorted((to_jsonable(item) for item in value), key=str)
    if isinstance(value, Path):
        return str(value)
    return str(value)


def _dump(value: Any, out: List[str]) -> None:
    if isinstance(value, _RawNumber):
        out.append(str(value))
    elif isinstance(value, dict):
        out.append('{')
        for k, key in enumerate(sorted(value)):
            if k:
                out.append(', ')
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(': ')
            _dump(value[key], out)
        out.append('}')
    elif isinstance(value, list):
        out.append('[')
        for k, item in enumerate(value):
            if k:
                out.append(', ')
            _dump(item, out)
        out.append(']')
    else:
        out.append(json.dumps(value, ensure_ascii=False))


def canonical_json(value: Any) -> str:
    """规范化 JSON 文本（末尾带换行）"""
    out: List[str] = []
    _dump(to_jsonable(value), out)
    out.append('\n')
    return ''.join(out)


def write_report(report: Report, path: Optional[Path] = None) -> str:
    """
    写出报告

    Args:
        report: 报告
        path: 输出文件，为 None 时只返回文本

    Returns:
        报告文本
    """
    text = canonical_json(report)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
    return text
