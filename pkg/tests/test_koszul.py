# -*- coding: utf-8 -*-
"""
bar 复形、Koszul 对偶、双重对偶与截断塔测试
"""

from math import factorial

import pytest

from py_operad import (
    FieldSpec,
    LeftModule,
    Window,
    WindowOverflowError,
    bar_complex,
    builtin,
    double_dual_check,
    koszul_dual,
    relative_compose_homology,
    truncation_tower,
)
from py_operad.koszul import bar_homology, count_partition_chains, euler_check
from py_operad.operad import regular_right_module, trivial_right_module

Q = FieldSpec.rationals()
F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)
W4 = Window(max_arity=4)


def koszul_bar(O, window=None):
    return bar_complex(trivial_right_module(O), O, LeftModule(O, 1), window)


class TestBarComplex:
    """bar 复形测试"""

    def test_cells_are_partition_chains(self):
        """测试 Bar(triv, Comm, triv) 的胞腔数等于分拆格中的严格链数"""
        bar = koszul_bar(builtin("comm_nu", Q, W4))
        for n in range(1, 5):
            assert bar.cell_counts(n) == count_partition_chains(n)

    def test_partition_chain_counts(self):
        """测试链数的独立计数"""
        assert count_partition_chains(1) == {0: 1}
        assert count_partition_chains(3) == {1: 1, 2: 3}
        assert count_partition_chains(4) == {1: 1, 2: 13, 3: 18}

    @pytest.mark.parametrize("name", ["comm_nu", "ass_nu", "lie"])
    @pytest.mark.parametrize("field", [Q, F2])
    def test_d_squared_and_action(self, name, field):
        """测试 d² = 0 与 Σ_n 作用的公理（构造时已校验，这里再显式检查一次）"""
        bar = koszul_bar(builtin(name, field, W4))
        bar.check()

    @pytest.mark.parametrize("name", ["comm_nu", "ass_nu", "lie"])
    @pytest.mark.parametrize("field", [Q, F2])
    def test_euler_characteristic(self, name, field):
        """测试链与同调的 Euler 示性数一致"""
        bar = koszul_bar(builtin(name, field, W4))
        checks = euler_check(bar, bar_homology(bar, with_action=False))
        assert len(checks) == 4
        assert all(c.consistent for c in checks)

    def test_arity_guard(self):
        """测试元数上限"""
        O = builtin("comm_nu", Q, Window(max_arity=8))
        with pytest.raises(WindowOverflowError):
            koszul_bar(O)

    def test_degree_span_guard(self):
        """测试度数跨度上限"""
        O = builtin("comm_nu", Q, Window(max_arity=3, min_deg=-20, max_deg=20))
        with pytest.raises(WindowOverflowError):
            koszul_bar(O)

    def test_two_sided_bar_resolves_operad(self):
        """测试 Bar(O, O, O) 的同调就是 O"""
        O = builtin("comm_nu", Q, W4)
        H = relative_compose_homology(regular_right_module(O), O, LeftModule(O, 4))
        assert H.dims() == {n: {0: 1} for n in range(1, 5)}


class TestKoszulDual:
    """Koszul 对偶测试"""

    @pytest.mark.parametrize("field", [Q, F2, F3])
    def test_comm_dual(self, field):
        """测试 K(Comm) 在元数 n 集中于 n−1 度，维数 (n−1)!"""
        K = koszul_dual(builtin("comm_nu", field, W4))
        assert K.dims == {n: {n - 1: factorial(n - 1)} for n in range(1, 5)}
        assert K.concentrated == {n: n - 1 for n in range(1, 5)}

    def test_ass_dual(self):
        """测试 K(Ass) 在元数 n 维数 n!"""
        K = koszul_dual(builtin("ass_nu", Q, W4), with_structure=False)
        assert K.dims == {n: {n - 1: factorial(n)} for n in range(1, 5)}
        assert K.cooperad is None

    def test_lie_dual(self):
        """测试 K(Lie) 每个元数一维"""
        K = koszul_dual(builtin("lie", Q, W4))
        assert K.dims == {n: {n - 1: 1} for n in range(1, 5)}

    def test_comm_dual_characters(self):
        """测试 K(Comm)_n 的特征标为 Lie_n 乘以 sign^{n−1}"""
        K = koszul_dual(builtin("comm_nu", Q, W4))
        seq = K.sequence
        assert seq is not None
        assert seq.component(2).character_table() == {(2,): 1, (1, 1): 1}
        assert seq.component(3).character_table() == {(3,): -1, (2, 1): 0, (1, 1, 1): 2}

    def test_cooperad_structure(self):
        """测试集中时给出余复合，形状为 K_m ⊗ K_n ← K_{m+n−1}"""
        K = koszul_dual(builtin("comm_nu", Q, W4))
        assert K.cooperad is not None
        assert K.cooperad.partial(2, 1, 2).shape == (1, 2)

    @pytest.mark.slow
    def test_comm_dual_arity_five_mod_two(self):
        """测试 𝔽₂ 上元数 5：度数 4，维数 24"""
        K = koszul_dual(builtin("comm_nu", F2, Window(max_arity=5)), with_structure=False)
        assert K.dims == {n: {n - 1: factorial(n - 1)} for n in range(1, 6)}

    @pytest.mark.slow
    def test_comm_dual_arity_six(self):
        """测试元数 6：度数 5，维数 120"""
        K = koszul_dual(builtin("comm_nu", Q, Window(max_arity=6)), with_structure=False)
        assert K.dims[6] == {5: 120}


class TestDoubleDual:
    """双重对偶测试"""

    @pytest.mark.parametrize("name", ["comm_nu", "lie"])
    def test_double_dual(self, name):
        """测试 (K(O)^∨ 的 Koszul 对偶)^∨ 与 O 维数、特征标一致"""
        report = double_dual_check(builtin(name, Q, W4))
        assert [a.arity for a in report.arities] == [1, 2, 3, 4]
        assert report.valid, report.arities

    def test_double_dual_ass(self):
        """测试 Ass 的双重对偶：元数 1..3 维数 1, 2, 6，集中在 0 度"""
        report = double_dual_check(builtin("ass_nu", Q, Window(max_arity=3)))
        assert [a.actual for a in report.arities] == [{0: 1}, {0: 2}, {0: 6}]
        assert report.valid, report.arities


class TestTruncationTower:
    """截断塔测试"""

    def test_comm_tower(self):
        """测试交换算子前两层与长正合列"""
        report = truncation_tower(builtin("comm_nu", Q, W4), max_stage=2)
        assert [s.stage for s in report.stages] == [1, 2]
        assert report.stages[0].dims[2] == {1: 1}
        assert report.stages[0].fiber_dims
        assert report.les
        assert report.les_consistent
        assert set(report.concentration_report()) == {1, 2}

    def test_lie_shifted_concentration(self):
        """测试平移 Lie 的第 m 层在元数 2..4 集中于 1−m 度，第 1 层每个元数一维"""
        report = truncation_tower(builtin("lie_shifted", Q, W4), max_stage=2)
        assert report.stages[0].dims == {n: {0: 1} for n in range(1, 5)}
        concentration = report.concentration_report()
        assert concentration[1] == {2: True, 3: True, 4: True}
        assert concentration[2] == {2: True, 3: True, 4: True}

    def test_norms_rational(self):
        """测试 ℚ 上纤维处的范数映射全部可逆"""
        report = truncation_tower(builtin("comm_nu", Q, W4), max_stage=2)
        assert report.norms
        assert all(r.is_iso for r in report.norms)
        assert {(r.fiber_arity, r.block_arity) for r in report.norms} == {(2, 1), (2, 2)}

    def test_norms_mod_two(self):
        """测试 𝔽₂ 上 Comm_2 ⊗ K_1^{⊗2} 的范数映射不可逆"""
        report = truncation_tower(builtin("comm_nu", F2, W4), max_stage=2)
        first = next(r for r in report.norms if r.block_arity == 1)
        assert first.coinvariant_dim == first.invariant_dim == 1
        assert not first.is_iso

    def test_invalid_stage(self):
        """测试层数必须 ≥ 1"""
        from py_operad import InputValidationError

        with pytest.raises(InputValidationError):
            truncation_tower(builtin("comm_nu", Q, W4), max_stage=0)


if __name__ == "__main__":
    pytest.main([__file__])
