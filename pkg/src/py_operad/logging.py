# -*- coding: utf-8 -*-
"""
日志管理模块

基于 structlog 的结构化日志。
标准输出只用于计算结果（保证逐字节可复现），日志一律写到标准错误，
可选同时写入文件。
"""

import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import structlog
from structlog.typing import FilteringBoundLogger

from .config import get_settings


def _render_line(_, __, event_dict) -> str:
    """
    文本渲染器：time level logger event key=value ...

    计算过程的上下文（arity、degree、cells 等）按键名排序输出，便于比对日志。
    """
    timestamp_str = event_dict.pop('timestamp', '')
    try:
        dt = datetime.fromisoformat(timestamp_str.replace('Z', '+00:00'))
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        timestamp = dt.astimezone().strftime('%Y/%m/%d %H:%M:%S.%f')[:-3]
    except (AttributeError, ValueError):
        timestamp = datetime.now().strftime('%Y/%m/%d %H:%M:%S.%f')[:-3]

    level = event_dict.pop('level', 'info').upper()
    logger_name = event_dict.pop('logger', 'py_operad')
    event = event_dict.pop('event', '')

    extras = [
        f"{key}={event_dict[key]}"
        for key in sorted(event_dict)
        if key not in ('filename', 'lineno', 'func_name')
    ]
    line = f"{timestamp} {level} {logger_name} {event}"
    if extras:
        line += ' ' + ' '.join(extras)
    return line


class LoggerManager:
    """日志管理器"""

    _initialized = False
    _logger: Optional[FilteringBoundLogger] = None

    @classmethod
    def init_logging(cls, log_level: Optional[str] = None, log_file: Optional[str] = None) -> None:
        """
        初始化日志系统

        Args:
            log_level: 日志级别（DEBUG/INFO/WARNING/ERROR/CRITICAL），缺省取配置
            log_file: 日志文件路径，缺省取配置；为空时只写标准错误
        """
        if cls._initialized:
            return

        config = get_settings()
        log_level = log_level or config.logging.level
        log_file = log_file or config.logging.file
        level = getattr(logging, log_level.upper(), logging.WARNING)

        root_logger = logging.getLogger()
        root_logger.setLevel(level)
        root_logger.handlers.clear()

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(logging.Formatter('%(message)s'))
        root_logger.addHandler(console_handler)

        if log_file:
            log_path = Path(log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(str(log_path), encoding='utf-8', mode='a')
            file_handler.setLevel(level)
            file_handler.setFormatter(logging.Formatter('%(message)s'))
            root_logger.addHandler(file_handler)

        structlog.configure(
            processors=[
                structlog.stdlib.add_log_level,
                structlog.stdlib.add_logger_name,
                structlog.processors.TimeStamper(fmt="iso"),
                structlog.processors.format_exc_info,
                _render_line,
            ],
            wrapper_class=structlog.make_filtering_bound_logger(level),
            context_class=dict,
            logger_factory=structlog.stdlib.LoggerFactory(),
            cache_logger_on_first_use=False,
        )

        cls._initialized = True

    @classmethod
    def get_logger(cls, name: Optional[str] = None) -> FilteringBoundLogger:
        """
        获取logger实例

        Args:
            name: logger名称，通常使用模块名 __name__

        Returns:
            structlog logger实例
        """
        if not cls._initialized:
            cls.init_logging()
        return structlog.get_logger(name)

    @classmethod
    def reset(cls) -> None:
        """重置日志系统（主要用于测试）"""
        cls._initialized = False
        cls._logger = None


def init_logging(log_level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """初始化日志系统"""
    LoggerManager.init_logging(log_level, log_file)


def get_logger(name: Optional[str] = None) -> FilteringBoundLogger:
    """
    获取logger实例

    Example:
        logger = get_logger(__name__)
        logger.info("bar complex built", arity=4, cells=75)
    """
    return LoggerManager.get_logger(name)
