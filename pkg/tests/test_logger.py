import logging

import pytest

from cubecoup.utils.logger import get_logger, set_level, setup_logger


@pytest.fixture(autouse=True)
def _restore_logger():
    yield
    setup_logger()


def test_module_loggers_share_the_package_handlers():
    assert get_logger("cubecoup.core.couplings").name == "cubecoup.core.couplings"
    assert get_logger("scripts.run").name == "cubecoup.scripts.run"
    assert get_logger().name == "cubecoup"


def test_log_file(tmp_path):
    path = tmp_path / "logs" / "cubecoup.log"
    setup_logger(log_file=path, console=False)
    get_logger("cubecoup.tests").info("写入日志文件")
    for handler in logging.getLogger("cubecoup").handlers:
        handler.flush()
    assert "cubecoup.tests - INFO - 写入日志文件" in path.read_text(encoding='utf-8')


def test_log_file_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "env.log"
    monkeypatch.setenv("CUBECOUP_LOG_FILE", str(path))
    logger = setup_logger(console=False)
    assert [type(h) for h in logger.handlers] == [logging.FileHandler]
    monkeypatch.delenv("CUBECOUP_LOG_FILE")


def test_set_level_reaches_handlers(tmp_path):
    path = tmp_path / "debug.log"
    setup_logger(log_file=path, console=False)
    get_logger("cubecoup.tests").debug("隐藏")
    set_level(logging.DEBUG)
    get_logger("cubecoup.tests").debug("可见")
    for handler in logging.getLogger("cubecoup").handlers:
        handler.flush()
    text = path.read_text(encoding='utf-8')
    assert "可见" in text
    assert "隐藏" not in text
