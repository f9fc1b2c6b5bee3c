# -*- coding: utf-8 -*-
"""
日志管理模块测试
"""

import logging
import os
import tempfile

import pytest

from py_operad import LoggerManager, get_logger, init_logging


@pytest.fixture(autouse=True)
def _reset_logging():
    LoggerManager.reset()
    yield
    LoggerManager.reset()
    logging.getLogger().handlers.clear()


class TestLoggerManager:
    """日志管理器测试"""

    def test_init_logging(self):
        """测试初始化日志系统"""
        LoggerManager.init_logging(log_level="DEBUG")
        assert LoggerManager._initialized is True
        assert logging.getLogger().level == logging.DEBUG

    def test_get_logger(self):
        """测试获取logger（会自动初始化）"""
        logger = LoggerManager.get_logger("test_module")
        assert logger is not None
        assert LoggerManager._initialized is True

    def test_reset(self):
        """测试重置日志系统"""
        LoggerManager.init_logging()
        assert LoggerManager._initialized is True
        LoggerManager.reset()
        assert LoggerManager._initialized is False
        assert LoggerManager._logger is None

    def test_second_init_is_noop(self):
        """测试重复初始化不改变级别"""
        init_logging(log_level="ERROR")
        init_logging(log_level="DEBUG")
        assert logging.getLogger().level == logging.ERROR


class TestLoggingStreams:
    """输出流测试"""

    def test_console_is_stderr(self, capsys):
        """测试日志只写标准错误，标准输出保持干净"""
        init_logging(log_level="INFO")
        get_logger("test_module").info("bar complex built", arity=4, cells=75)
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "bar complex built arity=4 cells=75" in captured.err

    def test_logging_to_file(self):
        """测试日志输出到文件，上下文按键名排序"""
        with tempfile.TemporaryDirectory() as temp_dir:
            log_file = os.path.join(temp_dir, "logs", "test.log")
            init_logging(log_level="INFO", log_file=log_file)
            get_logger("test_module").info("homology", degree=3, arity=4)
            for handler in logging.getLogger().handlers:
                handler.flush()
            assert os.path.exists(log_file)
            with open(log_file, "r", encoding="utf-8") as f:
                content = f.read()
            assert "INFO test_module homology arity=4 degree=3" in content


class TestLoggingLevels:
    """日志级别测试"""

    def test_different_log_levels(self):
        """测试不同日志级别"""
        for level in ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]:
            LoggerManager.reset()
            init_logging(log_level=level)
            assert LoggerManager._initialized is True
            assert logging.getLogger().level == getattr(logging, level)

    def test_invalid_log_level(self):
        """测试无效的日志级别（退回 WARNING）"""
        init_logging(log_level="INVALID")
        assert LoggerManager._initialized is True
        assert logging.getLogger().level == logging.WARNING


class TestLoggerUsage:
    """Logger使用测试"""

    def test_logger_with_context(self):
        """测试带上下文的logger"""
        logger = get_logger("test_module")
        logger.info("cells enumerated", arity=5, cells=541)
        logger.error("rank mismatch", degree=2, expected=3, got=2)
        assert LoggerManager._initialized is True

    def test_logger_exception(self):
        """测试异常日志"""
        logger = get_logger("test_module")
        try:
            raise ValueError("test error")
        except ValueError as e:
            logger.exception("exception occurred", error=str(e))
        assert LoggerManager._initialized is True


if __name__ == "__main__":
    pytest.main([__file__])
