# -*- coding: utf-8 -*-
"""
基域与精确线性代数测试
"""

from fractions import Fraction

import pytest

from py_operad import (
    DimensionMismatchError,
    FieldMismatchError,
    FieldSpec,
    InconsistentSystemError,
    InputValidationError,
    Matrix,
    image,
    inverse,
    kernel,
    quotient,
    rank,
    solve,
    solve_linear,
)

Q = FieldSpec.rationals()
F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)


class TestFieldSpec:
    """域描述测试"""

    @pytest.mark.parametrize("text", ["q", "Q", "0", "rationals"])
    def test_parse_rationals(self, text):
        """测试解析有理数域"""
        assert FieldSpec.parse(text) == Q

    @pytest.mark.parametrize("text,p", [("2", 2), ("F3", 3), ("GF(5)", 5), ("f7", 7)])
    def test_parse_prime(self, text, p):
        """测试解析素域"""
        field = FieldSpec.parse(text)
        assert field.characteristic == p
        assert field.label == f"F{p}"

    def test_parse_json_forms(self):
        """测试 JSON 形式的域"""
        assert FieldSpec.parse("Q").to_json() == "Q"
        assert FieldSpec.parse({"Fp": 3}) == F3
        assert F3.to_json() == {"Fp": 3}

    @pytest.mark.parametrize("bad", ["4", "F1", "reals", {"Fp": 9}, {"p": 2}])
    def test_parse_invalid(self, bad):
        """测试非法的域描述"""
        with pytest.raises(InputValidationError) as info:
            FieldSpec.parse(bad)
        assert info.value.field == "field"

    def test_elements(self):
        """测试元素转换与规范形式"""
        assert Q.to_python(Q.element("6/4")) == Fraction(3, 2)
        assert Q.to_string(Q.element(Fraction(-2, 1))) == "-2"
        assert F3.to_python(F3.element(-1)) == 2
        assert F3.to_python(F3.element("1/2")) == 2
        assert F2.sign(3) == F2.one

    def test_vanishing_denominator(self):
        """测试分母在 𝔽p 中为零"""
        with pytest.raises(InputValidationError):
            F3.element("1/3")


class TestMatrix:
    """稀疏矩阵测试"""

    def test_from_rows_and_access(self):
        """测试构造与访问"""
        M = Matrix.from_rows(Q, [[1, "1/2"], [0, 3]])
        assert M.shape == (2, 2)
        assert M[0, 1] == Fraction(1, 2)
        assert M.to_strings() == [["1", "1/2"], ["0", "3"]]
        assert M.nnz == 3

    def test_ragged_rows(self):
        """测试参差不齐的行"""
        with pytest.raises(DimensionMismatchError):
            Matrix.from_rows(Q, [[1, 2], [3]])

    def test_arithmetic(self):
        """测试乘法、加减与 Kronecker 积"""
        A = Matrix.from_rows(Q, [[1, 2], [3, 4]])
        B = Matrix.from_rows(Q, [[0, 1], [1, 0]])
        assert (A @ B).to_lists() == [[2, 1], [4, 3]]
        assert (A + B - B) == A
        assert (-A).to_lists() == [[-1, -2], [-3, -4]]
        K = B.kron(Matrix.identity(Q, 2))
        assert K.shape == (4, 4)
        assert K.apply({0: Q.one}) == {2: Q.one}
        assert A.trace() == Q.element(5)

    def test_field_mismatch(self):
        """测试不同域的矩阵不能相乘"""
        with pytest.raises(FieldMismatchError):
            Matrix.identity(Q, 2) @ Matrix.identity(F2, 2)

    def test_shape_mismatch(self):
        """测试形状不匹配"""
        with pytest.raises(DimensionMismatchError):
            Matrix.identity(Q, 2) @ Matrix.identity(Q, 3)

    def test_reduction_mod_p(self):
        """测试 𝔽p 上的规范化：2 ≡ 0 (mod 2)"""
        M = Matrix.from_rows(F2, [[2, 1], [1, 3]])
        assert M.to_lists() == [[0, 1], [1, 1]]


class TestLinearAlgebra:
    """核、像、商、求解测试"""

    def test_rank_depends_on_field(self):
        """测试同一整数矩阵在不同域上的秩"""
        rows = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
        assert rank(Matrix.from_rows(Q, rows)) == 3
        assert rank(Matrix.from_rows(F2, rows)) == 2

    def test_kernel(self):
        """测试核的基与 M·ker = 0"""
        M = Matrix.from_rows(Q, [[1, 2, 3], [2, 4, 6]])
        K = kernel(M)
        assert K.shape == (3, 2)
        assert (M @ K).is_zero()
        assert rank(K) == 2

    def test_image(self):
        """测试像取主元列"""
        M = Matrix.from_rows(Q, [[1, 2, 0], [0, 0, 1]])
        assert image(M).shape == (2, 2)

    def test_quotient(self):
        """测试商空间：投影把像映为零，在补空间上为恒等"""
        M = Matrix.from_rows(Q, [[1], [1], [0]])
        quo = quotient(M)
        assert quo.dim == 2
        assert (quo.projection @ M).is_zero()
        assert quo.projection @ quo.complement == Matrix.identity(Q, 2)

    def test_solve(self):
        """测试特解"""
        A = Matrix.from_rows(Q, [[1, 1], [0, 2]])
        B = Matrix.from_rows(Q, [[3], [4]])
        X = solve(A, B)
        assert A @ X == B
        assert X.to_lists() == [[1], [2]]

    def test_solve_inconsistent(self):
        """测试无解的方程组"""
        A = Matrix.from_rows(Q, [[1], [1]])
        B = Matrix.from_rows(Q, [[1], [2]])
        with pytest.raises(InconsistentSystemError):
            solve(A, B)

    def test_inverse(self):
        """测试逆矩阵与奇异矩阵"""
        A = Matrix.from_rows(F3, [[1, 1], [0, 2]])
        assert A @ inverse(A) == Matrix.identity(F3, 2)
        with pytest.raises(InconsistentSystemError):
            inverse(Matrix.from_rows(F3, [[1, 2], [2, 1]]))

    def test_solve_linear_modes(self):
        """测试统一入口"""
        M = Matrix.from_rows(Q, [[1, 0], [0, 0]])
        assert solve_linear(M, "rank") == 1
        assert solve_linear(M, "kernel").shape == (2, 1)
        assert solve_linear(M, "quotient-basis").dim == 1
        assert solve_linear(M, "solve", Matrix.from_rows(Q, [[5], [0]])).to_lists() == [[5], [0]]
        with pytest.raises(InputValidationError):
            solve_linear(M, "determinant")
        with pytest.raises(DimensionMismatchError):
            solve_linear(M, "solve")


if __name__ == "__main__":
    pytest.main([__file__])
