# -*- coding: utf-8 -*-
"""
配置管理模块

使用 Pydantic Settings 管理运行环境（日志、线程数），
计算窗口与成本上限使用 Pydantic 模型做类型校验。
环境变量只影响日志与线程数，不影响任何计算结果。
"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings


class LoggingConfig(BaseModel):
    """日志配置"""
    level: str = Field(default="WARNING")
    file: Optional[str] = Field(default=None)

    @field_validator('level')
    @classmethod
    def validate_log_level(cls, v):
        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if v.upper() not in valid_levels:
            raise ValueError(f'LOG_LEVEL must be one of {valid_levels}')
        return v.upper()


class CostGuards(BaseModel):
    """成本上限

    超出上限的任务在开始计算前即失败，并给出预估胞腔数。
    """
    max_arity: int = Field(default=7, ge=1)
    lie_max_arity: int = Field(default=7, ge=1)
    presented_max_arity: int = Field(default=6, ge=1)
    max_degree_span: int = Field(default=32, ge=1)
    max_cells: int = Field(default=400000, ge=1)


class Window(BaseModel):
    """计算窗口：最大元数与度数范围

    所有余极限与复形都在窗口内截断，保证计算有限。
    """
    max_arity: int = Field(default=5, alias="maxArity")
    min_deg: int = Field(default=-16, alias="minDeg")
    max_deg: int = Field(default=16, alias="maxDeg")

    model_config = {"frozen": True, "populate_by_name": True}

    @field_validator('max_arity')
    @classmethod
    def validate_max_arity(cls, v):
        if v < 1:
            raise ValueError('maxArity must be >= 1')
        return v

    @model_validator(mode='after')
    def validate_degrees(self):
        if self.min_deg > self.max_deg:
            raise ValueError('minDeg must be <= maxDeg')
        return self

    @property
    def degree_span(self) -> int:
        return self.max_deg - self.min_deg

    def contains_degree(self, degree: int) -> bool:
        return self.min_deg <= degree <= self.max_deg

    def with_max_arity(self, max_arity: int) -> "Window":
        return Window(max_arity=max_arity, min_deg=self.min_deg, max_deg=self.max_deg)


class Settings(BaseSettings):
    """主配置类"""

    # 环境标识
    env: str = Field(default="dev", alias="ENV")

    # 日志配置
    log_level: str = Field(default="WARNING", alias="LOG_LEVEL")
    log_file: Optional[str] = Field(default=None, alias="LOG_FILE")

    # 按元数并行的工作线程数（唯一影响执行方式的环境变量）
    threads: int = Field(default=1, alias="OPERAD_THREADS", ge=1)

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": False,
        "extra": "ignore",
    }

    def __init__(self, **kwargs):
        self._load_env_files()
        super().__init__(**kwargs)

    def _load_env_files(self):
        """加载环境特定的配置文件（可选，不存在时静默跳过）

        标准输出保留给计算结果，这里不打印任何提示。
        """
        config_dir = Path.cwd()
        env = os.getenv('ENV', 'dev')
        for candidate in (config_dir / f'.env.{env}', config_dir / '.env'):
            if candidate.exists():
                load_dotenv(candidate, override=False)

    @property
    def logging(self) -> LoggingConfig:
        """获取日志配置"""
        return LoggingConfig(level=self.log_level, file=self.log_file)

    @property
    def guards(self) -> CostGuards:
        """获取成本上限（固定值，不受环境变量影响）"""
        return CostGuards()

    def is_production(self) -> bool:
        """判断是否为生产环境"""
        return self.env.lower() == 'prod'

    def is_development(self) -> bool:
        """判断是否为开发环境"""
        return self.env.lower() == 'dev'

    def is_testing(self) -> bool:
        """判断是否为测试环境"""
        return self.env.lower() == 'test'


# 全局配置实例
_settings_instance: Optional[Settings] = None


def init_settings(env: Optional[str] = None) -> Settings:
    """
    初始化配置实例

    Args:
        env: 环境标识 (dev/test/prod)

    Returns:
        Settings实例
    """
    global _settings_instance
    if env:
        os.environ['ENV'] = env
    _settings_instance = Settings()
    return _settings_instance


def get_settings() -> Settings:
    """
    获取全局配置实例

    Returns:
        Settings实例
    """
    global _settings_instance
    if _settings_instance is None:
        _settings_instance = Settings()
    return _settings_instance


def reload_settings(env: Optional[str] = None) -> Settings:
    """重新加载配置"""
    return init_settings(env)
