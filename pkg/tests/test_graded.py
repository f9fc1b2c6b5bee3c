# -*- coding: utf-8 -*-
"""
分次空间、链复形与同调测试
"""

import pytest

from py_operad import (
    AxiomViolationError,
    ChainComplex,
    DimensionMismatchError,
    FieldMismatchError,
    FieldSpec,
    GradedSpace,
    InputValidationError,
    Matrix,
    Window,
    WindowOverflowError,
    dualize,
    homology,
    shift,
    tensor,
)
from py_operad.graded import direct_sum, homology_dims, induced_map, is_chain_map

Q = FieldSpec.rationals()
F2 = FieldSpec.prime(2)


def two_term(field, coeff=2):
    """C_1 = ⟨a⟩ → C_0 = ⟨p⟩，d(a) = coeff·p"""
    space = GradedSpace(field, {0: ["p"], 1: ["a"]})
    return ChainComplex(space, {1: Matrix.from_rows(field, [[coeff]])})


def simplex_boundary(field):
    """三角形的边界：三个顶点、三条边"""
    space = GradedSpace(field, {0: ["u", "v", "w"], 1: ["uv", "vw", "uw"]})
    d1 = Matrix.from_rows(field, [[-1, 0, -1], [1, -1, 0], [0, 1, 1]])
    return ChainComplex(space, {1: d1})


class TestGradedSpace:
    """分次空间测试"""

    def test_dims_and_index(self):
        """测试维数、下标与欧拉示性数"""
        V = GradedSpace(Q, {0: ["x"], 1: ["y", "z"], 3: []})
        assert V.dims() == {0: 1, 1: 2}
        assert V.degrees == (0, 1)
        assert V.index(1, "z") == 1
        assert V.dim(5) == 0
        assert V.euler_characteristic() == -1

    def test_duplicate_labels(self):
        """测试同一度数内标签重复"""
        with pytest.raises(InputValidationError):
            GradedSpace(Q, {0: ["x", "x"]})

    def test_from_dims(self):
        """测试按维数构造"""
        V = GradedSpace.from_dims(Q, {2: 3}, prefix="g")
        assert V.basis(2) == ("g2_0", "g2_1", "g2_2")


class TestChainComplex:
    """链复形测试"""

    def test_shape_checked(self):
        """测试微分形状校验"""
        space = GradedSpace(Q, {0: ["p"], 1: ["a"]})
        with pytest.raises(DimensionMismatchError):
            ChainComplex(space, {1: Matrix.from_rows(Q, [[1, 1]])})

    def test_field_checked(self):
        """测试微分与空间的域一致"""
        space = GradedSpace(Q, {0: ["p"], 1: ["a"]})
        with pytest.raises(FieldMismatchError):
            ChainComplex(space, {1: Matrix.from_rows(F2, [[1]])})

    def test_d_squared(self):
        """测试 d² ≠ 0 被拒绝"""
        space = GradedSpace(Q, {0: ["p"], 1: ["a"], 2: ["s"]})
        d1 = Matrix.from_rows(Q, [[1]])
        d2 = Matrix.from_rows(Q, [[1]])
        with pytest.raises(AxiomViolationError):
            ChainComplex(space, {1: d1, 2: d2})

    def test_zero_d(self):
        """测试缺省微分为零"""
        C = ChainComplex.concentrated(Q, {0: 2, 1: 1})
        assert C.d(1).is_zero()
        assert C.d(1).shape == (2, 1)


class TestHomology:
    """同调测试"""

    def test_depends_on_field(self):
        """测试乘 2 的映射在 ℚ 上无同调，在 𝔽₂ 上两处都有"""
        assert homology_dims(two_term(Q)) == {}
        assert homology_dims(two_term(F2)) == {0: 1, 1: 1}

    def test_circle(self):
        """测试三角形边界的同调是圆周"""
        result = homology(simplex_boundary(Q), with_basis=True)
        assert result.nonzero_dims() == {0: 1, 1: 1}
        assert not result.is_concentrated_in(0)
        cycle = result.representatives[1]
        assert (simplex_boundary(Q).d(1) @ cycle).is_zero()
        assert result.projection[1] @ cycle == Matrix.identity(Q, 1)

    def test_projection_kills_boundaries(self):
        """测试投影把边缘映为零"""
        C = simplex_boundary(Q)
        result = homology(C, with_basis=True)
        boundaries = C.d(1)
        assert (result.projection[0] @ boundaries).is_zero()

    def test_window_edges_unreliable(self):
        """测试窗口边缘的度数被标为不可靠"""
        C = simplex_boundary(Q)
        result = homology(C, window=Window(min_deg=0, max_deg=0))
        assert 0 in result.unreliable
        assert 0 not in result.dims

    def test_truncation_marker(self):
        """测试构造时截断的度数不可靠"""
        space = GradedSpace(Q, {0: ["p"], 1: ["a"]})
        C = ChainComplex(space, {1: Matrix.from_rows(Q, [[1]])}, truncated_above=1)
        assert homology(C).unreliable == (1,)

    def test_induced_map(self):
        """测试恒等链映射诱导恒等"""
        C = simplex_boundary(Q)
        h = homology(C, with_basis=True)
        identity = {n: Matrix.identity(Q, C.dim(n)) for n in C.degrees}
        assert is_chain_map(identity, C, C)
        induced = induced_map(identity, h, h)
        assert induced[1] == Matrix.identity(Q, 1)
        assert induced[0] == Matrix.identity(Q, 1)

    def test_not_chain_map(self):
        """测试不与微分交换的映射"""
        C = two_term(Q, 1)
        f = {1: Matrix.identity(Q, 1), 0: Matrix.zeros(Q, 1, 1)}
        assert not is_chain_map(f, C, C)


class TestConstructions:
    """平移、张量积、对偶、直和测试"""

    def test_shift(self):
        """测试平移改变度数与微分符号"""
        C = shift(two_term(Q, 1), 1)
        assert C.dims() == {1: 1, 2: 1}
        assert C.d(2).to_lists() == [[-1]]

    def test_tensor_kunneth(self):
        """测试圆周与圆周的张量积：同调维数 1, 2, 1"""
        C = simplex_boundary(Q)
        T = tensor(C, C)
        assert T.dims() == {0: 9, 1: 18, 2: 9}
        assert homology_dims(T) == {0: 1, 1: 2, 2: 1}

    def test_tensor_field_mismatch(self):
        """测试不同域的张量积"""
        with pytest.raises(FieldMismatchError):
            tensor(two_term(Q), two_term(F2))

    def test_dualize(self):
        """测试对偶取负度数，对偶两次还原"""
        C = simplex_boundary(Q)
        D = dualize(C)
        assert D.dims() == {0: 3, -1: 3}
        assert homology_dims(D) == {0: 1, -1: 1}
        assert dualize(D) == C

    def test_dualize_window(self):
        """测试对偶越出窗口"""
        with pytest.raises(WindowOverflowError):
            dualize(simplex_boundary(Q), window=Window(min_deg=0, max_deg=3))

    def test_direct_sum(self):
        """测试直和的同调相加"""
        S = direct_sum(Q, [simplex_boundary(Q), two_term(Q, 1)])
        assert homology_dims(S) == {0: 1, 1: 1}


if __name__ == "__main__":
    pytest.main([__file__])
