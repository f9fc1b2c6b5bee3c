# -*- coding: utf-8 -*-
"""
算子、对偶与模测试
"""

from math import factorial

import pytest

from py_operad import (
    AxiomViolationError,
    FieldSpec,
    InputValidationError,
    Operad,
    UnsupportedOperadError,
    Window,
    WindowOverflowError,
    builtin,
    check_operad,
    dual_operad,
)
from py_operad.operad import (
    LeftModule,
    assert_valid,
    dual_cooperad,
    fiber_module,
    flip_partial,
    module_structure_space,
    regular_right_module,
    shift_operad,
    truncated_right_module,
)
from py_operad.symseq import commutative_sequence, regular_representation

Q = FieldSpec.rationals()
F2 = FieldSpec.prime(2)
W4 = Window(max_arity=4)


class TestBuiltins:
    """内置算子测试"""

    def test_dimensions(self):
        """测试各内置算子的维数"""
        assert builtin("triv", Q, W4).underlying.total_dims() == {1: 1}
        assert builtin("comm_nu", Q, W4).underlying.total_dims() == {1: 1, 2: 1, 3: 1, 4: 1}
        assert builtin("ass_nu", Q, W4).underlying.total_dims() == {n: factorial(n) for n in range(1, 5)}
        assert builtin("lie", Q, W4).underlying.total_dims() == {n: factorial(n - 1) for n in range(1, 5)}

    def test_aliases(self):
        """测试名称的别名与连字符写法"""
        assert builtin("comm", Q, W4).name == "comm_nu"
        assert builtin("ass-nu", Q, W4).name == "ass_nu"
        assert builtin("lie-shifted", Q, W4).name == "lie_shifted"

    def test_unknown(self):
        """测试未知算子名"""
        with pytest.raises(UnsupportedOperadError):
            builtin("poisson", Q, W4)

    def test_lie_guard(self):
        """测试 Lie 的元数上限"""
        with pytest.raises(WindowOverflowError):
            builtin("lie", Q, Window(max_arity=9))

    def test_lie_shifted_degrees(self):
        """测试平移 Lie 的度数为 1−n"""
        O = builtin("lie_shifted", Q, W4)
        assert O.underlying.dims() == {1: {0: 1}, 2: {-1: 1}, 3: {-2: 2}, 4: {-3: 6}}

    def test_gamma(self):
        """测试完全复合：mu_2(mu_2, mu_3) = mu_4"""
        O = builtin("comm_nu", Q, Window(max_arity=5))
        arity, vec = O.gamma(2, {0: Q.one}, [(2, {0: Q.one}), (3, {0: Q.one})])
        assert arity == 5
        assert vec == {0: Q.one}

    def test_ass_partial(self):
        """测试结合算子的部分复合：(0,1) ∘_2 (1,0) = (0,2,1)"""
        O = builtin("ass_nu", Q, W4)
        A, B, T = O.component(2), O.component(2), O.component(3)
        col = A.index((0, 1)) * B.dim + B.index((1, 0))
        assert O.partial(2, 2, 2).column(col) == {T.index((0, 2, 1)): Q.one}

    def test_partial_arguments(self):
        """测试部分复合下标与窗口"""
        O = builtin("comm_nu", Q, W4)
        with pytest.raises(InputValidationError):
            O.partial(2, 3, 2)
        with pytest.raises(WindowOverflowError):
            O.partial(3, 1, 3)

    def test_not_reduced(self):
        """测试单位标签不符时拒绝"""
        seq = commutative_sequence(Q, W4)
        with pytest.raises(InputValidationError):
            Operad("bad", seq, "nope", lambda m, i, n: None)


class TestCheckOperad:
    """公理检查测试"""

    @pytest.mark.parametrize("name", ["triv", "comm_nu", "ass_nu", "lie", "lie_shifted"])
    def test_builtins_valid(self, name):
        """测试内置算子满足全部公理"""
        report = check_operad(builtin(name, Q, W4))
        assert report.valid, report.failures
        assert report.summary() == "valid"

    def test_builtins_valid_mod_2(self):
        """测试 𝔽₂ 上的结合算子"""
        assert check_operad(builtin("ass_nu", F2, W4)).valid

    def test_flipped_partial_detected(self):
        """测试取负一个 ∘_i 后结合律失败"""
        broken = flip_partial(builtin("ass_nu", Q, W4), 2, 1, 2)
        report = check_operad(broken)
        assert not report.valid
        assert any(f.axiom in ("sequential", "parallel") for f in report.failures)
        assert report.summary().endswith("failed axiom instances")
        with pytest.raises(AxiomViolationError):
            assert_valid(broken)

    def test_shift_twice_valid(self):
        """测试平移两次仍是算子"""
        O = shift_operad(builtin("ass_nu", Q, W4), 2)
        assert check_operad(O).valid


class TestDuals:
    """对偶测试"""

    def test_dual_cooperad(self):
        """测试对偶余算子：度数取负，Δ_i 为转置"""
        O = builtin("lie_shifted", Q, W4)
        C = dual_cooperad(O)
        assert C.underlying.dims() == {1: {0: 1}, 2: {1: 1}, 3: {2: 2}, 4: {3: 6}}
        assert C.partial(2, 1, 2) == O.partial(2, 1, 2).transpose()

    def test_double_dual_operad(self):
        """测试对偶两次回到原算子"""
        O = builtin("ass_nu", Q, W4)
        D = dual_operad(dual_cooperad(O))
        assert D.unit == O.unit
        assert D.underlying == O.underlying
        assert check_operad(D).valid


class TestModules:
    """模测试"""

    def test_regular_right_module(self):
        """测试正则右模的作用即复合"""
        O = builtin("comm_nu", Q, W4)
        M = regular_right_module(O)
        assert M.act(2, {0: Q.one}, [(1, {0: Q.one}), (2, {0: Q.one})]) == (3, {0: Q.one})

    def test_truncated_right_module(self):
        """测试截断右模在元数 > m 时为零"""
        O = builtin("comm_nu", Q, W4)
        M = truncated_right_module(O, 2)
        assert M.underlying.total_dims() == {1: 1, 2: 1}
        assert M.partial(2, 1, 2).shape == (0, 1)

    def test_fiber_module(self):
        """测试纤维模只有单位作用"""
        O = builtin("ass_nu", Q, W4)
        M = fiber_module(O, 3)
        assert M.underlying.total_dims() == {3: 6}
        assert M.partial(3, 2, 1).shape == (6, 6)

    def test_left_module(self):
        """测试截断左模"""
        O = builtin("comm_nu", Q, W4)
        assert LeftModule(O, 1).is_trivial
        L = LeftModule(O, 3)
        assert L.dim(4) == 0
        assert L.act(2, {0: Q.one}, [(2, {0: Q.one}), (2, {0: Q.one})]) == (4, {})
        assert L.act(2, {0: Q.one}, [(1, {0: Q.one}), (2, {0: Q.one})]) == (3, {0: Q.one})
        with pytest.raises(InputValidationError):
            LeftModule(O, 0)

    def test_single_arity_structure_unique(self):
        """测试集中在单个元数的序列上右模结构唯一"""
        O = builtin("comm_nu", Q, W4)
        for comp in (O.component(2), regular_representation(Q, 3)):
            report = module_structure_space(comp, O)
            assert report.consistent
            assert report.contractible

    def test_structure_unknowns_fixed_by_unit(self):
        """测试约化算子下未知量个数等于方程组的秩，解空间为零维"""
        O = builtin("ass_nu", Q, W4)
        report = module_structure_space(regular_representation(Q, 3), O)
        assert report.unknowns == 3 * 6 * 6
        assert report.solution_dim == 0
        assert report.consistent

    def test_structure_needs_arity_two(self):
        """测试元数 1 的序列被拒绝"""
        O = builtin("comm_nu", Q, W4)
        with pytest.raises(InputValidationError):
            module_structure_space(O.component(1), O)


if __name__ == "__main__":
    pytest.main([__file__])
