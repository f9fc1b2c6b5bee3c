# -*- coding: utf-8 -*-
"""
py-operad 算子计算代数引擎

在 ℚ 与 𝔽_p 上精确计算对称序列、复合积、算子与模、bar 复形与 Koszul 对偶、
截断塔，以及分次 Hopf 代数层（本原元、泛包络代数、Milnor–Moore、限制李结构）。

主要模块：
- field: 基域与稀疏矩阵的精确线性代数
- graded: 分次空间、链复形与同调
- symseq: 对称序列、复合积、范数映射
- operad / presentation: 内置算子、模、由生成元与关系表现的算子
- koszul: bar 复形、Koszul 对偶、双重对偶、截断塔
- hopf: 张量 Hopf 代数、李代数与包络代数
- serialization / cli: JSON / CSV 读写与命令行
- config / logging: 配置管理与结构化日志
"""

# 版本信息
__version__ = "1.0.0"
__author__ = "Yang XP"
__email__ = "yangxp@example.com"

# 配置与日志
from .config import CostGuards, LoggingConfig, Settings, Window, get_settings, init_settings, reload_settings
from .logging import LoggerManager, get_logger, init_logging

# 异常
from .exceptions import (
    AxiomViolationError,
    DimensionMismatchError,
    EngineError,
    FieldMismatchError,
    InconsistentSystemError,
    InputValidationError,
    UnsupportedOperadError,
    WindowOverflowError,
)

# 精确线性代数与分次对象
from .field import FieldSpec, Matrix, image, inverse, kernel, quotient, rank, solve, solve_linear
from .graded import ChainComplex, GradedSpace, HomologyResult, dualize, homology, shift, tensor

# 对称序列与算子
from .symseq import (
    Component,
    NormMapResult,
    SymSeqObject,
    compose,
    compose_many,
    free_algebra,
    norm_map,
    truncate,
)
from .operad import (
    BUILTIN_NAMES,
    Cooperad,
    LeftModule,
    Operad,
    RightModule,
    builtin,
    check_operad,
    dual_operad,
)
from .presentation import OperadPresentation, presented_operad

# Koszul 对偶
from .koszul import (
    BarComplex,
    bar_complex,
    double_dual_check,
    koszul_dual,
    relative_compose_homology,
    truncation_tower,
)

# Hopf 层
from .hopf import (
    HopfPresentation,
    LiePresentation,
    enveloping,
    free_lie_presentation,
    hopf_axioms,
    milnor_moore_check,
    primitives,
    restricted_monad,
    sym_exponential_check,
    tensor_hopf,
)

# 导出所有公共API
__all__ = [
    "__version__",
    "__author__",
    "__email__",

    # 配置与日志
    "CostGuards",
    "LoggingConfig",
    "Settings",
    "Window",
    "get_settings",
    "init_settings",
    "reload_settings",
    "LoggerManager",
    "get_logger",
    "init_logging",

    # 异常
    "AxiomViolationError",
    "DimensionMismatchError",
    "EngineError",
    "FieldMismatchError",
    "InconsistentSystemError",
    "InputValidationError",
    "UnsupportedOperadError",
    "WindowOverflowError",

    # 线性代数与分次对象
    "FieldSpec",
    "Matrix",
    "image",
    "inverse",
    "kernel",
    "quotient",
    "rank",
    "solve",
    "solve_linear",
    "ChainComplex",
    "GradedSpace",
    "HomologyResult",
    "dualize",
    "homology",
    "shift",
    "tensor",

    # 对称序列与算子
    "Component",
    "NormMapResult",
    "SymSeqObject",
    "compose",
    "compose_many",
    "free_algebra",
    "norm_map",
    "truncate",
    "BUILTIN_NAMES",
    "Cooperad",
    "LeftModule",
    "Operad",
    "RightModule",
    "builtin",
    "check_operad",
    "dual_operad",
    "OperadPresentation",
    "presented_operad",

    # Koszul 对偶
    "BarComplex",
    "bar_complex",
    "double_dual_check",
    "koszul_dual",
    "relative_compose_homology",
    "truncation_tower",

    # Hopf 层
    "HopfPresentation",
    "LiePresentation",
    "enveloping",
    "free_lie_presentation",
    "hopf_axioms",
    "milnor_moore_check",
    "primitives",
    "restricted_monad",
    "sym_exponential_check",
    "tensor_hopf",
]
