# -*- coding: utf-8 -*-
"""
配置管理模块测试
"""

import os
import pytest
from unittest.mock import patch
from pydantic import ValidationError
from py_operad import (
    CostGuards,
    LoggingConfig,
    Settings,
    Window,
    get_settings,
    init_settings,
    reload_settings,
)


class TestWindow:
    """计算窗口测试"""

    def test_default_values(self):
        """测试默认值"""
        window = Window()
        assert window.max_arity == 5
        assert window.min_deg == -16
        assert window.max_deg == 16
        assert window.degree_span == 32

    def test_aliases(self):
        """测试 JSON 别名"""
        window = Window.model_validate({"maxArity": 4, "minDeg": -2, "maxDeg": 3})
        assert window.max_arity == 4
        assert window.model_dump(by_alias=True) == {"maxArity": 4, "minDeg": -2, "maxDeg": 3}

    def test_invalid_max_arity(self):
        """测试非法的最大元数"""
        with pytest.raises(ValidationError):
            Window(max_arity=0)

    def test_invalid_degree_range(self):
        """测试度数范围颠倒"""
        with pytest.raises(ValidationError):
            Window(min_deg=3, max_deg=1)

    def test_contains_degree(self):
        """测试度数判断与改写最大元数"""
        window = Window(max_arity=3, min_deg=0, max_deg=4)
        assert window.contains_degree(0)
        assert window.contains_degree(4)
        assert not window.contains_degree(5)
        wider = window.with_max_arity(6)
        assert wider.max_arity == 6
        assert (wider.min_deg, wider.max_deg) == (0, 4)

    def test_frozen(self):
        """测试窗口不可变"""
        window = Window()
        with pytest.raises(ValidationError):
            window.max_arity = 7


class TestCostGuards:
    """成本上限测试"""

    def test_default_values(self):
        """测试默认值"""
        guards = CostGuards()
        assert guards.max_arity == 7
        assert guards.lie_max_arity == 7
        assert guards.presented_max_arity == 6
        assert guards.max_degree_span == 32
        assert guards.max_cells == 400000


class TestLoggingConfig:
    """日志配置测试"""

    def test_default_values(self):
        """测试默认值"""
        config = LoggingConfig()
        assert config.level == "WARNING"
        assert config.file is None

    def test_valid_log_levels(self):
        """测试有效的日志级别"""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        for level in valid_levels:
            config = LoggingConfig(level=level.lower())
            assert config.level == level

    def test_invalid_log_level(self):
        """测试无效的日志级别"""
        with pytest.raises(ValueError):
            LoggingConfig(level="INVALID")


class TestSettings:
    """主配置类测试"""

    def test_default_values(self):
        """测试默认值"""
        with patch.dict(os.environ, {}, clear=True):
            settings = Settings()
            assert settings.env == "dev"
            assert settings.log_level == "WARNING"
            assert settings.log_file is None
            assert settings.threads == 1

    def test_environment_detection(self):
        """测试环境检测"""
        with patch.dict(os.environ, {"ENV": "dev"}):
            settings = Settings()
            assert settings.is_development() is True
            assert settings.is_production() is False
            assert settings.is_testing() is False

        with patch.dict(os.environ, {"ENV": "prod"}):
            settings = Settings()
            assert settings.is_development() is False
            assert settings.is_production() is True

        with patch.dict(os.environ, {"ENV": "test"}):
            settings = Settings()
            assert settings.is_testing() is True

    def test_threads(self):
        """测试线程数来自环境变量"""
        with patch.dict(os.environ, {"OPERAD_THREADS": "4"}):
            assert Settings().threads == 4

    def test_invalid_threads(self):
        """测试非法线程数"""
        with patch.dict(os.environ, {"OPERAD_THREADS": "0"}):
            with pytest.raises(ValidationError):
                Settings()

    def test_logging_property(self):
        """测试日志配置属性"""
        with patch.dict(os.environ, {
            "LOG_LEVEL": "DEBUG",
            "LOG_FILE": "test.log"
        }):
            settings = Settings()
            log_config = settings.logging
            assert isinstance(log_config, LoggingConfig)
            assert log_config.level == "DEBUG"
            assert log_config.file == "test.log"

    def test_guards_ignore_environment(self):
        """测试成本上限不受环境变量影响"""
        with patch.dict(os.environ, {"MAX_ARITY": "99"}):
            assert Settings().guards == CostGuards()

    def test_env_file_loaded(self, tmp_path, monkeypatch):
        """测试读取 .env.{ENV} 文件"""
        (tmp_path / ".env.test").write_text("OPERAD_THREADS=3\n", encoding="utf-8")
        monkeypatch.chdir(tmp_path)
        monkeypatch.delenv("OPERAD_THREADS", raising=False)
        monkeypatch.setenv("ENV", "test")
        try:
            assert Settings().threads == 3
        finally:
            os.environ.pop("OPERAD_THREADS", None)


class TestGlobalFunctions:
    """全局函数测试"""

    def test_get_settings(self):
        """测试获取配置实例"""
        settings = get_settings()
        assert isinstance(settings, Settings)
        assert get_settings() is settings

    def test_init_settings(self):
        """测试初始化配置"""
        with patch.dict(os.environ, {"ENV": "test"}):
            settings = init_settings()
            assert settings.env == "test"

    def test_reload_settings(self):
        """测试重新加载配置"""
        with patch.dict(os.environ, {"ENV": "prod"}):
            settings = reload_settings()
            assert settings.env == "prod"
        reload_settings("dev")


if __name__ == "__main__":
    pytest.main([__file__])
