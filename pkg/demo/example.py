#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
py-operad 使用示例
"""

from py_operad import (
    FieldSpec,
    GradedSpace,
    LiePresentation,
    Window,
    builtin,
    compose,
    enveloping,
    get_logger,
    init_logging,
    init_settings,
    koszul_dual,
    milnor_moore_check,
    tensor_hopf,
)
from py_operad.hopf import primitive_dims


def main():
    """主函数"""
    print("py-operad 使用示例")
    print("=" * 50)

    # 1. 配置与日志
    print("\n1. 配置与日志")
    print("-" * 30)
    settings = init_settings('dev')
    init_logging(log_level="INFO")
    logger = get_logger(__name__)
    logger.info("示例启动", threads=settings.threads)
    print(f"工作线程数: {settings.threads}，上限: 最大元数 {settings.guards.max_arity}")

    Q = FieldSpec.rationals()
    F2 = FieldSpec.prime(2)
    window = Window(max_arity=4)

    # 2. 复合积
    print("\n2. Comm ∘ Comm 的维数（Bell 数）")
    print("-" * 30)
    comm = builtin("comm_nu", Q, window)
    print(compose(comm.underlying, comm.underlying).total_dims())

    # 3. Koszul 对偶
    print("\n3. Comm 的 Koszul 对偶")
    print("-" * 30)
    K = koszul_dual(comm)
    for n, dims in sorted(K.dims.items()):
        print(f"元数 {n}: {dims}")

    # 4. Hopf 层
    print("\n4. 𝔽₂ 上 T(x) 的本原元")
    print("-" * 30)
    T = tensor_hopf(GradedSpace(F2, {1: ["x"]}), 8)
    print(primitive_dims(T))

    print("\n5. Heisenberg 李代数")
    print("-" * 30)
    L = LiePresentation.heisenberg(Q)
    print("U(L) 维数:", enveloping(L, 4).dims())
    print("Milnor–Moore:", milnor_moore_check(L, 4).iso)

    print("\n示例完成！")


if __name__ == "__main__":
    main()
