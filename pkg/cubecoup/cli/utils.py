"""
CLI 工具函数
"""

import json
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from ..client import CubicToolkit
from ..core.scalars import format_scalar
from ..exceptions import CapExceededError, CubeCoupError, DimensionError, SampleSizeError, SpecFormatError
from ..services.reports import Report, Verdict, to_jsonable, write_report
from ..utils.logger import get_logger

console = Console()
err_console = Console(stderr=True)

# 退出码
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

_INPUT_ERRORS = (SpecFormatError, ValidationError, json.JSONDecodeError, DimensionError, CapExceededError,
                 SampleSizeError)


def get_toolkit() -> CubicToolkit:
    """获取工具包实例"""
    return CubicToolkit()


def print_error(message: str):
    """打印错误信息"""
    err_console.print(f"[red]❌ {message}[/red]")


def print_success(message: str):
    """打印成功信息"""
    err_console.print(f"[green]✅ {message}[/green]")


def print_warning(message: str):
    """打印警告信息"""
    err_console.print(f"[yellow]⚠️ {message}[/yellow]")


def print_info(message: str):
    """打印信息"""
    err_console.print(f"[blue]ℹ️ {message}[/blue]")


def handle_error(e: Exception, operation: str = "操作") -> int:
    """
    处理命令中的异常

    Returns:
        退出码：输入错误为 2，其余为 1
    """
    if isinstance(e, SpecFormatError):
        print_error(f"{operation}失败: 输入格式错误: {e}")
        return EXIT_INPUT
    if isinstance(e, CapExceededError):
        print_error(f"{operation}失败: {e}")
        return EXIT_INPUT
    if isinstance(e, _INPUT_ERRORS):
        print_error(f"{operation}失败: 输入错误: {e}")
        return EXIT_INPUT
    if isinstance(e, CubeCoupError):
        print_error(f"{operation}失败: {e}")
        return EXIT_FAILED
    print_error(f"{operation}失败: {type(e).__name__}: {e}")
    get_logger().debug("未处理的异常", exc_info=True)
    return EXIT_FAILED


@contextmanager
def command_errors(operation: str) -> Iterator[None]:
    """把异常转换为退出码"""
    try:
        yield
    except typer.Exit:
        raise
    except Exception as e:
        raise typer.Exit(handle_error(e, operation))


class Timer:
    """--timing 时记录各阶段耗时"""

    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.timing: Dict[str, float] = {}
        self._start = time.perf_counter()

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        yield
        if self.enabled:
            self.timing[name] = time.perf_counter() - start

    def finish(self) -> Dict[str, float]:
        if self.enabled:
            self.timing["total"] = time.perf_counter() - self._start
        return self.timing


def _short(value: Any, limit: int = 60) -> str:
    text = json.dumps(to_jsonable(value), ensure_ascii=False) if not isinstance(value, str) else value
    return text if len(text) <= limit else text[:limit - 1] + '…'


def render_report(report: Report) -> None:
    """在终端上渲染结果表格"""
    table = Table(title=f"📋 {report.command}")
    table.add_column("检查", style="cyan")
    table.add_column("结论", justify="center")
    table.add_column("数值", style="dim")
    table.add_column("反例", style="red")

    styles = {Verdict.PASS: "[green]pass[/green]", Verdict.FAIL: "[red]fail[/red]", Verdict.NOT_APPLICABLE: "[yellow]n/a[/yellow]"}
    for result in report.results:
        values = ', '.join(f"{key}={_short(format_scalar(value), 30)}" for key, value in sorted(result.values.items()))
        witness = _short(result.witness) if result.witness is not None else ""
        table.add_row(result.check_id, styles[result.verdict], _short(values, 80), witness)
    err_console.print(table)


def emit_report(report: Report, output: Optional[Path]) -> None:
    """
    输出报告并按结论退出

    没有 --output 时 JSON 写到标准输出；表格总是写到标准错误

    Raises:
        typer.Exit: 存在失败的检查时退出码为 1
    """
    text = write_report(report, output)
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        print_info(f"报告已写入 {output}")
    render_report(report)

    if not report.passed:
        failed = [result.check_id for result in report.results if result.verdict == Verdict.FAIL]
        print_error(f"{len(failed)} 项检查失败: {', '.join(failed)}")
        raise typer.Exit(EXIT_FAILED)
    print_success("全部检查通过")


def print_usage_table(rows: Dict[str, str]) -> None:
    """打印命令用法"""
    table = Table(title="🧊 cubecoup 命令")
    table.add_column("命令", style="cyan")
    table.add_column("说明")
    for command, description in rows.items():
        table.add_row(command, description)
    console.print(table)
