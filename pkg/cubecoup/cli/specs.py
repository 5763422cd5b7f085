# -*- coding: utf-8 -*-
"""
输入规格

JSON 文件解析为 pydantic 模型；有理数写成 "p/q" 或整数，复数写成 [re, im]，顶点写成小端位串。
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from ..core.couplings import Coupling
from ..core.cube_combinatorics import Vertex, parse_bits
from ..core.finite_measure import FiniteProbSpace, FunctionOnSpace
from ..core.scalars import Scalar, ScalarMode, coerce, make_complex, parse_rational
from ..exceptions import CouplingError, SpecFormatError
from ..services.abelian_cubes import FiniteAbelianGroup
from ..services.exchangeability import KernelMap, Pattern
from ..services.host_kra import FilteredAction

RationalLike = Union[int, str]
ScalarLike = Union[int, str, List[RationalLike]]

SpecT = TypeVar('SpecT', bound=BaseModel)


def parse_scalar(value: Any, mode: ScalarMode = ScalarMode.EXACT) -> Scalar:
    """"p/q"、整数或 [re, im]"""
    if isinstance(value, list):
        if len(value) != 2:
            raise ValueError(f"复数必须写成 [re, im]: {value}")
        scalar = make_complex(parse_rational(value[0]), parse_rational(value[1]))
    else:
        scalar = parse_rational(value)
    return coerce(scalar, mode)


def _check_rational(value: Any) -> Any:
    try:
        parse_rational(value)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ValueError(f"不是有理数: {value!r}")
    return value


class GroupSpec(BaseModel):
    """{"cyclic_orders": [N_1, ..., N_r]}"""

    cyclic_orders: List[int] = Field(min_length=1)

    @field_validator('cyclic_orders')
    @classmethod
    def _positive(cls, orders: List[int]) -> List[int]:
        if any(order < 1 for order in orders):
            raise ValueError("循环群的阶必须是正整数")
        return orders

    def to_group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(tuple(self.cyclic_orders))


class FunctionSpec(BaseModel):
    """{"values": [...]}，按群元素的字典序给出"""

    values: List[ScalarLike]

    @field_validator('values')
    @classmethod
    def _scalars(cls, values: List[ScalarLike]) -> List[ScalarLike]:
        for value in values:
            for part in (value if isinstance(value, list) else [value]):
                _check_rational(part)
        return values

    def to_function(self, space: FiniteProbSpace, mode: ScalarMode = ScalarMode.EXACT) -> FunctionOnSpace:
        if len(self.values) != len(space):
            raise SpecFormatError(f"函数取值个数 {len(self.values)} 与空间大小 {len(space)} 不符", field="values")
        return FunctionOnSpace(space, [parse_scalar(value, mode) for value in self.values])


class FunctionSystemSpec(BaseModel):
    """{"functions": {"10": [...], "01": [...]}}，未给出的顶点取常数 1"""

    functions: Dict[str, List[ScalarLike]]

    def to_system(self, space: FiniteProbSpace, mode: ScalarMode = ScalarMode.EXACT) -> Dict[Vertex, FunctionOnSpace]:
        system = {}
        for bits, values in self.functions.items():
            try:
                vertex = parse_bits(bits)
            except ValueError as e:
                raise SpecFormatError(str(e), field=f"functions.{bits}")
            system[vertex] = FunctionSpec(values=values).to_function(space, mode)
        return system


class LevelSpec(BaseModel):
    generators: List[List[int]] = Field(default_factory=list)


class SystemSpec(BaseModel):
    """{"atoms": [...], "weights": [...], "levels": [{"generators": [[...], ...]}, ...]}"""

    atoms: List[Union[int, str]] = Field(min_length=1)
    weights: Optional[List[RationalLike]] = None
    levels: List[LevelSpec] = Field(default_factory=list)
    group: Optional[GroupSpec] = None

    @field_validator('weights')
    @classmethod
    def _rationals(cls, weights: Optional[List[RationalLike]]) -> Optional[List[RationalLike]]:
        for weight in weights or []:
            _check_rational(weight)
        return weights

    def to_space(self) -> FiniteProbSpace:
        if self.weights is None:
            return FiniteProbSpace.uniform(self.atoms)
        if len(self.weights) != len(self.atoms):
            raise SpecFormatError("weights 与 atoms 的个数不一致", field="weights")
        try:
            return FiniteProbSpace(self.atoms, [parse_rational(w) for w in self.weights])
        except ValueError as e:
            raise SpecFormatError(str(e), field="weights")

    def to_action(self) -> FilteredAction:
        space = self.to_space()
        for i, level in enumerate(self.levels):
            for j, perm in enumerate(level.generators):
                if sorted(perm) != list(range(len(space))):
                    raise SpecFormatError(f"不是 {len(space)} 个原子上的置换: {perm}",
                                          field=f"levels.{i}.generators.{j}")
        try:
            return FilteredAction(space, [level.generators for level in self.levels], name="system")
        except CouplingError as e:
            raise SpecFormatError(str(e), field="levels")


class KernelSpec(BaseModel):
    """
    {"group": {...}, "alphabet": [...], "table": [{"a": "1/2", ...}, ...]}

    point_mass 为 true 时使用 m(x) = δ_x，此时 alphabet 与 table 可省略
    """

    group: GroupSpec
    alphabet: List[Union[int, str]] = Field(default_factory=list)
    table: List[Dict[str, RationalLike]] = Field(default_factory=list)
    point_mass: bool = False

    def to_kernel(self) -> KernelMap:
        group = self.group.to_group()
        if self.point_mass:
            return KernelMap.point_mass(group)
        elements = group.elements()
        if len(self.table) != len(elements):
            raise SpecFormatError(f"table 的行数 {len(self.table)} 与群的阶 {len(elements)} 不符", field="table")
        names = {str(symbol): symbol for symbol in self.alphabet}
        table = {}
        for i, (x, row) in enumerate(zip(elements, self.table)):
            unknown = [name for name in row if name not in names]
            if unknown:
                raise SpecFormatError(f"未知符号 {unknown[0]}", field=f"table.{i}")
            table[x] = {names[name]: value for name, value in row.items()}
        try:
            return KernelMap(group, self.alphabet, table)
        except ValueError as e:
            raise SpecFormatError(str(e), field="table")


class PatternSpec(BaseModel):
    """{"k": 2, "plain": ["00", "11"], "conjugated": ["10", "01"]}，或 {"k": 2, "gowers": true}"""

    k: int = Field(ge=0)
    plain: List[str] = Field(default_factory=list)
    conjugated: List[str] = Field(default_factory=list)
    gowers: bool = False

    def to_pattern(self) -> Pattern:
        if self.gowers:
            return Pattern.gowers(self.k)
        try:
            return Pattern(self.k, tuple(parse_bits(b) for b in self.plain), tuple(parse_bits(b) for b in self.conjugated))
        except ValueError as e:
            raise SpecFormatError(str(e), field="plain")


class MassEntry(BaseModel):
    key: List[Union[int, str]]
    mass: RationalLike


class CouplingSpec(BaseModel):
    """{"atoms": [...], "weights": [...], "labels": ["a", "b"], "mass": [{"key": [...], "mass": "p/q"}, ...]}"""

    atoms: List[Union[int, str]] = Field(min_length=1)
    weights: Optional[List[RationalLike]] = None
    labels: List[str] = Field(default_factory=lambda: ["a", "b"])
    mass: List[MassEntry]

    def to_coupling(self) -> Coupling:
        space = SystemSpec(atoms=self.atoms, weights=self.weights).to_space()
        mass: Dict[tuple, Fraction] = {}
        for i, entry in enumerate(self.mass):
            key = tuple(entry.key)
            if len(key) != len(self.labels):
                raise SpecFormatError(f"支撑元组长度应为 {len(self.labels)}", field=f"mass.{i}.key")
            mass[key] = mass.get(key, Fraction(0)) + parse_rational(entry.mass)
        try:
            return Coupling(space, self.labels, mass)
        except CouplingError as e:
            raise SpecFormatError(str(e), field="mass")


def _line_of(text: str, field_path: List[Any]) -> Optional[int]:
    """字段名第一次出现的行号（找不到时为 None）"""
    for part in reversed(field_path):
        if isinstance(part, str):
            needle = json.dumps(part)
            for number, line in enumerate(text.splitlines(), 1):
                if needle in line:
                    return number
    return None


def load_spec(path: Path, model: Type[SpecT]) -> SpecT:
    """
    读取并校验规格文件

    Raises:
        SpecFormatError: 文件不存在、JSON 语法错误或字段不合法（带行号与字段）
    """
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise SpecFormatError(f"无法读取规格文件 {path}: {e}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"{path} 不是合法的 JSON: {e.msg}", line=e.lineno)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        location = list(error.get('loc', ()))
        field = '.'.join(str(part) for part in location) or None
        raise SpecFormatError(f"{path}: {error.get('msg')}", field=field, line=_line_of(text, location))


def parse_group(value: str) -> FiniteAbelianGroup:
    """--group 的取值："5"、"2,2" 或群规格文件路径"""
    if value.endswith('.json') or Path(value).is_file():
        return load_spec(Path(value), GroupSpec).to_group()
    try:
        orders = [int(part) for part in value.split(',') if part.strip()]
    except ValueError:
        raise SpecFormatError(f"无法解析群: {value}", field="--group")
    try:
        return GroupSpec(cyclic_orders=orders).to_group()
    except ValidationError:
        raise SpecFormatError(f"无法解析群: {value}", field="--group")
