# -*- coding: utf-8 -*-
"""
标量模块

精确模式下实数用 Fraction，复数用 ComplexRational（一对 Fraction），特征标的值用 PhaseScalar（有理复数乘单位根）；
浮点模式下用 float/complex，相等性按容差比较。两种模式混合运算时退化为浮点。
"""

import cmath
import math
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Optional, Union

from ..config import Config


class ScalarMode(str, Enum):
    """标量后端"""

    EXACT = "exact"
    FLOAT = "float"


class ComplexRational:
    """有理复数 re + i·im"""

    __slots__ = ('re', 'im')

    def __init__(self, re: Any = 0, im: Any = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def conjugate(self) -> 'Scalar':
        return make_complex(self.re, -self.im)

    def abs2(self) -> Fraction:
        """模长的平方（精确）"""
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return math.sqrt(self.abs2())

    def __neg__(self) -> 'Scalar':
        return make_complex(-self.re, -self.im)

    def __pos__(self) -> 'ComplexRational':
        return self

    def __add__(self, other: Any) -> 'Scalar':
        if isinstance(other, ComplexRational):
            return make_complex(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return make_complex(self.re + other, self.im)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: Any) -> 'Scalar':
        if isinstance(other, (ComplexRational, int, Fraction, float, complex)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: Any) -> 'Scalar':
        return (-self) + other

    def __mul__(self, other: Any) -> 'Scalar':
        if isinstance(other, ComplexRational):
            return make_complex(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Fraction)):
            return make_complex(self.re * other, self.im * other)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> 'Scalar':
        if isinstance(other, ComplexRational):
            return (self * other.conjugate()) / other.abs2()
        if isinstance(other, (int, Fraction)):
            return make_complex(self.re / other, self.im / other)
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other: Any) -> 'Scalar':
        if isinstance(other, (int, Fraction)):
            return (other * self.conjugate()) / self.abs2()
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"ComplexRational({self.re}, {self.im})"


class PhaseScalar:
    """
    c·exp(2πi·θ)：有理复数 c 乘以单位根

    规范形式下 c ≠ 0 且 0 < θ < 1/4，四分之一圈并入 c；由 root_of_unity_multiple 构造
    """

    __slots__ = ('coeff', 'phase')

    def __init__(self, coeff: Any, phase: Fraction):
        self.coeff = coeff
        self.phase = phase

    def conjugate(self) -> 'Scalar':
        return root_of_unity_multiple(self.coeff.conjugate(), -self.phase)

    def abs2(self) -> Fraction:
        return abs_squared(self.coeff)

    def __complex__(self) -> complex:
        return complex(self.coeff) * cmath.exp(2j * math.pi * float(self.phase))

    def __abs__(self) -> float:
        return math.sqrt(self.abs2())

    def __neg__(self) -> 'PhaseScalar':
        return PhaseScalar(-self.coeff, self.phase)

    def __pos__(self) -> 'PhaseScalar':
        return self

    def __add__(self, other: Any) -> 'Scalar':
        if isinstance(other, PhaseScalar):
            if other.phase == self.phase:
                return root_of_unity_multiple(self.coeff + other.coeff, self.phase)
            return complex(self) + complex(other)
        if is_exact(other):
            return self if other == 0 else complex(self) + complex(other)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: Any) -> 'Scalar':
        if isinstance(other, PhaseScalar) or is_exact(other) or isinstance(other, (float, complex)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: Any) -> 'Scalar':
        return (-self) + other

    def __mul__(self, other: Any) -> 'Scalar':
        if isinstance(other, PhaseScalar):
            return root_of_unity_multiple(self.coeff * other.coeff, self.phase + other.phase)
        if is_exact(other):
            return root_of_unity_multiple(self.coeff * other, self.phase)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> 'Scalar':
        if isinstance(other, PhaseScalar):
            return root_of_unity_multiple(self.coeff / other.coeff, self.phase - other.phase)
        if is_exact(other):
            return root_of_unity_multiple(self.coeff / other, self.phase)
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other: Any) -> 'Scalar':
        if is_exact(other):
            return root_of_unity_multiple(other / self.coeff, -self.phase)
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        # 规范形式唯一；θ ∉ Z/4 时不可能等于有理复数
        if isinstance(other, PhaseScalar):
            return self.coeff == other.coeff and self.phase == other.phase
        if is_exact(other):
            return False
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.coeff, self.phase))

    def __repr__(self) -> str:
        return f"PhaseScalar({self.coeff!r}, {self.phase})"


Scalar = Union[int, Fraction, float, complex, ComplexRational, PhaseScalar]
Real = Union[int, Fraction, float]


def make_complex(re: Any, im: Any) -> Scalar:
    """构造精确复数，虚部为零时返回 Fraction"""
    re = Fraction(re)
    im = Fraction(im)
    if im == 0:
        return re
    return ComplexRational(re, im)


def is_exact(value: Any) -> bool:
    """是否为精确标量"""
    return isinstance(value, (int, Fraction, ComplexRational, PhaseScalar)) and not isinstance(value, bool)


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    解析 "p/q" 形式的有理数

    Args:
        text: 字符串、整数或 Fraction

    Returns:
        Fraction 值
    """
    if isinstance(text, bool):
        raise ValueError(f"无效的有理数: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"无效的有理数: {text!r}")


def to_float(value: Scalar) -> Union[float, complex]:
    """转换为浮点（虚部为零时返回 float）"""
    if isinstance(value, (ComplexRational, PhaseScalar)):
        return complex(value)
    if isinstance(value, complex):
        return value
    return float(value)


def coerce(value: Scalar, mode: ScalarMode) -> Scalar:
    """按模式转换标量"""
    if mode == ScalarMode.FLOAT:
        return to_float(value)
    return value


def real_part(value: Scalar) -> Real:
    if isinstance(value, PhaseScalar):
        return complex(value).real
    if isinstance(value, ComplexRational):
        return value.re
    if isinstance(value, complex):
        return value.real
    return value


def imag_part(value: Scalar) -> Real:
    if isinstance(value, PhaseScalar):
        return complex(value).imag
    if isinstance(value, ComplexRational):
        return value.im
    if isinstance(value, complex):
        return value.imag
    return 0


def is_zero(value: Scalar, tol: Optional[float] = None) -> bool:
    """精确标量严格判零，浮点标量按容差判零"""
    if is_exact(value):
        return value == 0
    tol = Config.FLOAT_TOLERANCE if tol is None else tol
    return abs(value) <= tol


def scalar_eq(a: Scalar, b: Scalar, tol: Optional[float] = None) -> bool:
    """比较两个标量"""
    if is_exact(a) and is_exact(b):
        return a == b
    return is_zero(to_float(a) - to_float(b), tol)


def as_real(value: Scalar, tol: Optional[float] = None) -> Optional[Real]:
    """虚部为零（浮点下在容差内）时返回实部，否则返回 None"""
    if not is_zero(imag_part(value), tol):
        return None
    return real_part(value)


def abs_squared(value: Scalar) -> Real:
    """|z|²，精确标量保持精确"""
    if isinstance(value, (ComplexRational, PhaseScalar)):
        return value.abs2()
    if isinstance(value, complex):
        return abs(value) ** 2
    return value * value


def product(values: Iterable[Scalar]) -> Scalar:
    result: Scalar = 1
    for value in values:
        result = result * value
    return result


_QUARTER_TURNS = (Fraction(1), ComplexRational(0, 1), Fraction(-1), ComplexRational(0, -1))


def root_of_unity_multiple(coeff: Any, phase: Fraction) -> Scalar:
    """
    精确计算 coeff·exp(2πi·phase)

    Args:
        coeff: 有理复数（int、Fraction 或 ComplexRational）
        phase: 转数

    Returns:
        phase 的分母整除 4 或 coeff = 0 时为有理复数，否则为规范形式的 PhaseScalar
    """
    phase = Fraction(phase) % 1
    quarters = math.floor(phase * 4)
    rest = phase - Fraction(quarters, 4)
    coeff = coeff * _QUARTER_TURNS[quarters]
    if coeff == 0:
        return Fraction(0)
    if rest == 0:
        return coeff
    return PhaseScalar(coeff, rest)


def phase_value(phase: Fraction) -> Scalar:
    """exp(2πi·phase)，结果总是精确的"""
    return root_of_unity_multiple(Fraction(1), phase)


def format_scalar(value: Scalar) -> Any:
    """
    报告用的标量表示

    Fraction 写成 "p/q"，复数写成 [re, im]
    """
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return f"{value}/1"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, ComplexRational):
        return [format_scalar(value.re), format_scalar(value.im)]
    if isinstance(value, PhaseScalar):
        value = complex(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value
