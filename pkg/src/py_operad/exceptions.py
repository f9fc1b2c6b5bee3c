# -*- coding: utf-8 -*-
"""
异常定义

输入校验类错误继承自 ValueError（命令行退出码 2），
公理校验失败（d² ≠ 0、非同态作用、关系不一致等）为 AxiomViolationError（退出码 3）。
"""

from typing import Optional


class EngineError(Exception):
    """引擎异常基类"""


class InputValidationError(EngineError, ValueError):
    """输入校验失败

    Args:
        message: 诊断信息
        field: 出错的字段名（命令行会在一行诊断中给出）
    """

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field

    def __str__(self) -> str:
        base = super().__str__()
        if self.field:
            return f"{self.field}: {base}"
        return base


class FieldMismatchError(InputValidationError):
    """参与运算的对象不在同一个域上"""


class DimensionMismatchError(InputValidationError):
    """矩阵维数与请求的运算不匹配"""


class WindowOverflowError(InputValidationError):
    """计算超出窗口或成本上限

    predicted 为预估的胞腔数（或基元数），便于用户提前看到组合爆炸。
    """

    def __init__(self, message: str, field: Optional[str] = None, predicted: Optional[int] = None):
        super().__init__(message, field)
        self.predicted = predicted


class UnsupportedOperadError(InputValidationError):
    """未知的内置 operad 名称"""


class InconsistentSystemError(EngineError, ArithmeticError):
    """线性方程组无解"""


class AxiomViolationError(EngineError):
    """结构公理不成立（d² ≠ 0、群作用非同态、非等变、关系不一致等）"""
