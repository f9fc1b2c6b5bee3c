# -*- coding: utf-8 -*-
"""
对称序列、复合积与范数映射测试
"""

from math import comb, factorial

import pytest

from py_operad import (
    AxiomViolationError,
    Component,
    FieldMismatchError,
    FieldSpec,
    GradedSpace,
    InputValidationError,
    Matrix,
    SymSeqObject,
    Window,
    WindowOverflowError,
    compose,
    compose_many,
    free_algebra,
    norm_map,
    truncate,
)
from py_operad import permutations as perms
from py_operad.symseq import (
    associative_sequence,
    block_permutation_representation,
    commutative_sequence,
    composite_norm_maps,
    operadic_shift,
    regular_representation,
    sign_representation,
    trivial_representation,
    trivial_sequence,
    unit_isomorphism,
)

Q = FieldSpec.rationals()
F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)


def bell_numbers(limit):
    """独立的 Bell 数：按集合分拆的递推 B(n+1) = Σ C(n,k) B(k)"""
    bell = [1]
    for n in range(limit):
        bell.append(sum(comb(n, k) * bell[k] for k in range(n + 1)))
    return bell


class TestPermutations:
    """置换工具测试"""

    def test_adjacent_word(self):
        """测试相邻对换分解还原置换"""
        for sigma in perms.all_permutations(4):
            result = perms.identity(4)
            for i in perms.adjacent_word(sigma):
                result = perms.compose(perms.adjacent(4, i), result)
            assert result == sigma

    def test_sign(self):
        """测试置换的符号"""
        assert perms.sign((1, 0, 2)) == -1
        assert perms.sign((1, 2, 0)) == 1

    def test_sort_sign(self):
        """测试 Koszul 符号：只有奇数度元素交换时出现 −1"""
        assert perms.sort_sign([1, 1], [1, 0]) == -1
        assert perms.sort_sign([1, 2], [1, 0]) == 1
        assert perms.sort_sign([1, 1, 1], [2, 1, 0]) == -1

    def test_set_partitions_count(self):
        """测试集合分拆数为 Bell 数"""
        bell = bell_numbers(6)
        for n in range(1, 6):
            assert len(perms.set_partitions(n)) == bell[n]

    def test_cycle_types(self):
        """测试轮换型"""
        assert perms.cycle_types(3) == [(3,), (2, 1), (1, 1, 1)]
        assert perms.cycle_type_representative((2, 1)) == (1, 0, 2)

    def test_induced_order(self):
        """测试块的像与诱导置换"""
        image, tau = perms.induced_order((0, 2), (2, 1, 0))
        assert image == (0, 2)
        assert tau == (1, 0)


class TestComponent:
    """单个元数分量测试"""

    def test_regular_character(self):
        """测试正则表示的特征标"""
        comp = regular_representation(Q, 3)
        assert comp.dim == 6
        assert comp.character_table() == {(3,): 0, (2, 1): 0, (1, 1, 1): 6}
        comp.check()

    def test_sign_character(self):
        """测试符号表示的特征标"""
        comp = sign_representation(Q, 3)
        assert comp.character((2, 1)) == -1
        assert comp.character((3,)) == 1

    def test_group_elements(self):
        """测试群元素的个数与作用一致"""
        comp = regular_representation(Q, 3)
        elements = comp.group_elements()
        assert len(elements) == 6
        for sigma, matrix in elements.items():
            assert comp.action(sigma) == matrix

    def test_not_an_action(self):
        """测试不满足 s² = 1 的生成元被拒绝"""
        bad = Component(Q, 2, ["a"], [0], generators=[Matrix.from_rows(Q, [[2]])])
        with pytest.raises(AxiomViolationError):
            bad.check()

    def test_wrong_generator_count(self):
        """测试生成元个数不对"""
        with pytest.raises(InputValidationError):
            Component(Q, 3, ["a"], [0], generators=[Matrix.identity(Q, 1)])

    def test_duplicate_labels(self):
        """测试重复标签"""
        with pytest.raises(InputValidationError):
            Component(Q, 1, ["a", "a"], [0, 0])


class TestSymSeqObject:
    """对称序列测试"""

    def test_arity_outside_window(self):
        """测试元数超出窗口"""
        with pytest.raises(WindowOverflowError):
            SymSeqObject(Q, Window(max_arity=2), {3: trivial_representation(Q, 3)})

    def test_field_mismatch(self):
        """测试分量域不一致"""
        with pytest.raises(FieldMismatchError):
            SymSeqObject(Q, Window(), {1: trivial_representation(F2, 1)})

    def test_truncate(self):
        """测试按元数截断"""
        X = commutative_sequence(Q, Window(max_arity=4))
        assert truncate(X, 2).arities == (1, 2)
        assert truncate(X, 3, side="below").arities == (3, 4)
        with pytest.raises(InputValidationError):
            truncate(X, 0)

    def test_operadic_shift(self):
        """测试算子平移的度数与作用符号"""
        X = operadic_shift(commutative_sequence(Q, Window(max_arity=3)), 1)
        assert X.dims() == {1: {0: 1}, 2: {-1: 1}, 3: {-2: 1}}
        assert X.component(2).character((2,)) == -1


class TestCompose:
    """复合积测试"""

    def test_bell_numbers(self):
        """测试 dim(Comm∘Comm)_n 为 Bell 数"""
        window = Window(max_arity=5)
        C = commutative_sequence(Q, window)
        dims = compose(C, C).total_dims()
        bell = bell_numbers(5)
        assert [dims[n] for n in range(1, 6)] == [bell[n] for n in range(1, 6)] == [1, 2, 5, 15, 52]

    def test_associative(self):
        """测试 dim(Ass∘Ass)_n = n!·2^{n−1}"""
        window = Window(max_arity=4)
        A = associative_sequence(Q, window)
        composite = compose(A, A)
        assert composite.total_dims() == {n: factorial(n) * 2 ** (n - 1) for n in range(1, 5)}
        composite.check()

    def test_unit_isomorphisms(self):
        """测试 triv∘X ≅ X ≅ X∘triv，且同构与 Σ_n 作用交换"""
        window = Window(max_arity=4)
        X = associative_sequence(Q, window)
        triv = trivial_sequence(Q, window)
        for side, composite in (("left", compose(triv, X)), ("right", compose(X, triv))):
            isos = unit_isomorphism(composite, X, side)
            for n, iso in isos.items():
                comp = composite.component(n)
                target = X.component(n)
                assert iso.shape == (target.dim, comp.dim)
                for g, h in zip(comp.generators, target.generators):
                    assert iso @ g == h @ iso

    def test_associativity_characters(self):
        """测试 (X∘Y)∘Z 与 X∘(Y∘Z) 的维数与特征标一致"""
        window = Window(max_arity=4)
        C = commutative_sequence(Q, window)
        A = associative_sequence(Q, window)
        left = compose(compose(C, A), C)
        right = compose_many([C, A, C])
        for n in range(1, 5):
            assert left.component(n).character_table() == right.component(n).character_table()

    def test_right_factor_arity_zero(self):
        """测试右因子在元数 0 非零"""
        window = Window(max_arity=2)
        Y = SymSeqObject(Q, window, {0: trivial_representation(Q, 0), 1: trivial_representation(Q, 1)})
        with pytest.raises(InputValidationError):
            compose(commutative_sequence(Q, window), Y)

    def test_field_mismatch(self):
        """测试不同域"""
        window = Window(max_arity=2)
        with pytest.raises(FieldMismatchError):
            compose(commutative_sequence(Q, window), commutative_sequence(F2, window))

    def test_degree_window(self):
        """测试复合积的度数越出窗口"""
        window = Window(max_arity=3, min_deg=-1, max_deg=1)
        shifted = operadic_shift(commutative_sequence(Q, window), 1)
        with pytest.raises(WindowOverflowError):
            compose(shifted, shifted)

    def test_compose_many_needs_factor(self):
        """测试空的多重复合"""
        with pytest.raises(InputValidationError):
            compose_many([])


class TestNormMaps:
    """范数映射测试"""

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_rational_iso(self, n):
        """测试 ℚ 上范数映射可逆"""
        for builder in (regular_representation, trivial_representation, sign_representation):
            assert norm_map(builder(Q, n)).is_iso

    def test_trivial_f2(self):
        """测试 𝔽₂ 上平凡 Σ₂ 表示：N = 2 = 0"""
        result = norm_map(trivial_representation(F2, 2))
        assert result.coinvariant_dim == result.invariant_dim == 1
        assert not result.is_iso

    def test_trivial_f3(self):
        """测试 𝔽₃ 上平凡 Σ₃ 表示：N = 6 = 0"""
        assert not norm_map(trivial_representation(F3, 3)).is_iso

    def test_regular_is_free(self):
        """测试正则表示在任意特征下范数映射都可逆（自由模）"""
        result = norm_map(regular_representation(F3, 3))
        assert result.coinvariant_dim == result.invariant_dim == 1
        assert result.is_iso

    def test_composite_norms_rational(self):
        """测试复合积中出现的 Σ_k 表示在 ℚ 上全部可逆"""
        window = Window(max_arity=5)
        C = commutative_sequence(Q, window)
        A = associative_sequence(Q, window)
        composite = compose(C, A)
        records = composite_norm_maps(composite, C, A)
        assert records
        assert all(flag for _, _, flag in records)

    def test_block_permutation_f2(self):
        """测试 𝔽₂ 上 Comm_2 ⊗ triv^{⊗2} 的范数映射不可逆"""
        rep = block_permutation_representation(
            F2, trivial_representation(F2, 2), trivial_representation(F2, 1), 2
        )
        assert rep.dim == 1
        assert not norm_map(rep).is_iso


class TestFreeAlgebra:
    """自由代数测试"""

    def test_free_commutative(self):
        """测试两个零度生成元的自由交换代数：词长 n 的维数为 n+1"""
        C = commutative_sequence(Q, Window(max_arity=4))
        V = GradedSpace(Q, {0: ["x", "y"]})
        assert free_algebra(C, V, 4).dims() == {1: 2, 2: 3, 3: 4, 4: 5}

    def test_free_commutative_odd(self):
        """测试一度生成元：外代数，词长 ≥ 2 为零"""
        C = commutative_sequence(Q, Window(max_arity=3))
        V = GradedSpace(Q, {1: ["e"]})
        assert free_algebra(C, V, 3).dims() == {1: 1}

    def test_word_length_guard(self):
        """测试词长超出窗口"""
        C = commutative_sequence(Q, Window(max_arity=2))
        with pytest.raises(WindowOverflowError):
            free_algebra(C, GradedSpace(Q, {0: ["x"]}), 3)


if __name__ == "__main__":
    pytest.main([__file__])
