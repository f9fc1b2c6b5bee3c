# -*- coding: utf-8 -*-
"""
精确标量运算与线性代数内核

支持有理数域 ℚ 与素域 𝔽p。矩阵采用稀疏的行字典存储，元素是 sympy 域元素，
行约化（rref）交给 sympy 的 DomainMatrix 完成。其余模块的秩、核、像、商空间、
解方程都经由这里，不做任何浮点运算。
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, model_validator
from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from .exceptions import (
    DimensionMismatchError,
    FieldMismatchError,
    InconsistentSystemError,
    InputValidationError,
)

Scalar = Union[int, Fraction, str]
RowData = Dict[int, Dict[int, Any]]


@lru_cache(maxsize=None)
def _domain_for(kind: str, p: Optional[int]):
    if kind == "rationals":
        return QQ
    return GF(p)


class FieldSpec(BaseModel):
    """基域描述：有理数域或素域"""

    model_config = {"frozen": True}

    kind: Literal["rationals", "prime-field"] = "rationals"
    p: Optional[int] = None

    @model_validator(mode="after")
    def validate_prime(self):
        if self.kind == "prime-field":
            if self.p is None or not isprime(self.p):
                raise ValueError(f"p must be a prime integer, got {self.p}")
        elif self.p is not None:
            raise ValueError("p is only allowed for prime-field")
        return self

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(kind="rationals")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(kind="prime-field", p=p)

    @classmethod
    def parse(cls, text: Union[str, int, dict]) -> "FieldSpec":
        """
        解析域描述

        接受 "q"/"Q"/"0"、素数 "2"、"F2"/"GF(2)"，以及 JSON 形式 "Q" 或 {"Fp": p}。
        """
        if isinstance(text, dict):
            if set(text) != {"Fp"}:
                raise InputValidationError(f"unknown field object {text!r}", field="field")
            return cls._prime_checked(text["Fp"])
        raw = str(text).strip()
        lowered = raw.lower()
        if lowered in ("q", "0", "qq", "rationals"):
            return cls.rationals()
        for prefix in ("gf(", "f"):
            if lowered.startswith(prefix):
                lowered = lowered[len(prefix):].rstrip(")")
                break
        try:
            return cls._prime_checked(int(lowered))
        except ValueError:
            raise InputValidationError(f"cannot parse field {raw!r}", field="field") from None

    @classmethod
    def _prime_checked(cls, p: Any) -> "FieldSpec":
        if not isinstance(p, int) or not isprime(p):
            raise InputValidationError(f"characteristic must be prime, got {p!r}", field="field")
        return cls.prime(p)

    @property
    def domain(self):
        """对应的 sympy 域（QQ 或 GF(p)）"""
        return _domain_for(self.kind, self.p)

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "rationals" else int(self.p)

    @property
    def is_rational(self) -> bool:
        return self.kind == "rationals"

    @property
    def label(self) -> str:
        return "Q" if self.is_rational else f"F{self.p}"

    def to_json(self) -> Union[str, Dict[str, int]]:
        return "Q" if self.is_rational else {"Fp": int(self.p)}

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def element(self, value: Any):
        """把 int / Fraction / "a/b" 字符串 / 域元素 转为域元素"""
        K = self.domain
        if isinstance(value, str):
            try:
                value = Fraction(value.strip())
            except ValueError:
                raise InputValidationError(f"not a rational literal: {value!r}", field="coeff") from None
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return K.convert(value)
        if isinstance(value, Fraction):
            if self.is_rational:
                return QQ(value.numerator, value.denominator)
            if value.denominator % self.p == 0:
                raise InputValidationError(
                    f"denominator of {value} vanishes in {self.label}", field="coeff"
                )
            return K.convert(value.numerator) / K.convert(value.denominator)
        return K.convert(value)

    def to_python(self, value) -> Union[int, Fraction]:
        """规范形式：ℚ 上为最简分数，𝔽p 上为 [0, p) 内的整数"""
        if self.is_rational:
            frac = Fraction(int(QQ.numer(value)), int(QQ.denom(value)))
            return frac.numerator if frac.denominator == 1 else frac
        return int(value) % int(self.p)

    def to_string(self, value) -> str:
        return str(self.to_python(value))

    def is_zero(self, value) -> bool:
        return self.domain.is_zero(value)

    def sign(self, exponent: int):
        """(-1)^exponent 作为域元素"""
        return self.one if exponent % 2 == 0 else -self.one


class Matrix:
    """
    稀疏矩阵（行字典），值语义

    只保存非零元；所有元素都是所在域的规范形式。构造后不再修改。
    """

    __slots__ = ("field", "rows", "cols", "_data", "_columns")

    def __init__(self, field: FieldSpec, rows: int, cols: int, data: Optional[RowData] = None):
        if rows < 0 or cols < 0:
            raise DimensionMismatchError(f"negative shape {rows}x{cols}")
        self.field = field
        self.rows = rows
        self.cols = cols
        cleaned: RowData = {}
        if data:
            K = field.domain
            for i, row in data.items():
                kept = {j: v for j, v in row.items() if not K.is_zero(v)}
                if kept:
                    cleaned[i] = kept
        self._data = cleaned
        self._columns: Optional[List[Dict[int, Any]]] = None

    # ---- 构造 ----

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, n, n, {i: {i: field.one} for i in range(n)})

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> "Matrix":
        """从嵌套列表构造，元素可以是 int、Fraction 或有理数字符串"""
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else (cols or 0)
        data: RowData = {}
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                raise DimensionMismatchError("ragged rows")
            data[i] = {j: field.element(v) for j, v in enumerate(row)}
        return cls(field, n_rows, n_cols, data)

    @classmethod
    def from_columns(cls, field: FieldSpec, rows: int, columns: Sequence[Dict[int, Any]]) -> "Matrix":
        """从列向量（行号 -> 域元素 的字典）构造"""
        data: RowData = {}
        for j, column in enumerate(columns):
            for i, v in column.items():
                data.setdefault(i, {})[j] = v
        return cls(field, rows, len(columns), data)

    @classmethod
    def hstack(cls, field: FieldSpec, rows: int, *blocks: "Matrix") -> "Matrix":
        data: RowData = {}
        offset = 0
        for block in blocks:
            _require_same_field(field, block.field)
            if block.rows != rows:
                raise DimensionMismatchError(f"hstack: {block.rows} rows, expected {rows}")
            for i, row in block._data.items():
                target = data.setdefault(i, {})
                for j, v in row.items():
                    target[offset + j] = v
            offset += block.cols
        return cls(field, rows, offset, data)

    @classmethod
    def vstack(cls, field: FieldSpec, cols: int, *blocks: "Matrix") -> "Matrix":
        data: RowData = {}
        offset = 0
        for block in blocks:
            _require_same_field(field, block.field)
            if block.cols != cols:
                raise DimensionMismatchError(f"vstack: {block.cols} cols, expected {cols}")
            for i, row in block._data.items():
                data[offset + i] = dict(row)
            offset += block.rows
        return cls(field, offset, cols, data)

    # ---- 访问 ----

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int):
        return self._data.get(i, {}).get(j, self.field.zero)

    def __getitem__(self, key: Tuple[int, int]) -> Union[int, Fraction]:
        i, j = key
        return self.field.to_python(self.entry(i, j))

    def row(self, i: int) -> Dict[int, Any]:
        return self._data.get(i, {})

    def column(self, j: int) -> Dict[int, Any]:
        if self._columns is None:
            columns: List[Dict[int, Any]] = [dict() for _ in range(self.cols)]
            for i, row in self._data.items():
                for jj, v in row.items():
                    columns[jj][i] = v
            self._columns = columns
        return self._columns[j]

    def items(self) -> Iterable[Tuple[int, int, Any]]:
        for i in sorted(self._data):
            row = self._data[i]
            for j in sorted(row):
                yield i, j, row[j]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    def to_lists(self) -> List[List[Union[int, Fraction]]]:
        to_py = self.field.to_python
        zero = self.field.zero
        return [
            [to_py(self._data.get(i, {}).get(j, zero)) for j in range(self.cols)]
            for i in range(self.rows)
        ]

    def to_strings(self) -> List[List[str]]:
        return [[str(v) for v in row] for row in self.to_lists()]

    def is_zero(self) -> bool:
        return not self._data

    def trace(self):
        K = self.field.domain
        total = K.zero
        for i, row in self._data.items():
            if i in row:
                total += row[i]
        return total

    # ---- 运算 ----

    def transpose(self) -> "Matrix":
        data: RowData = {}
        for i, row in self._data.items():
            for j, v in row.items():
                data.setdefault(j, {})[i] = v
        return Matrix(self.field, self.cols, self.rows, data)

    def matmul(self, other: "Matrix") -> "Matrix":
        _require_same_field(self.field, other.field)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        data: RowData = {}
        other_rows = other._data
        for i, row in self._data.items():
            acc: Dict[int, Any] = {}
            for k, a in row.items():
                brow = other_rows.get(k)
                if not brow:
                    continue
                for j, b in brow.items():
                    if j in acc:
                        acc[j] += a * b
                    else:
                        acc[j] = a * b
            if acc:
                data[i] = acc
        return Matrix(self.field, self.rows, other.cols, data)

    __matmul__ = matmul

    def apply(self, vector: Dict[int, Any]) -> Dict[int, Any]:
        """矩阵作用在稀疏列向量上"""
        K = self.field.domain
        out: Dict[int, Any] = {}
        for k, a in vector.items():
            for i, v in self.column(k).items():
                out[i] = out.get(i, K.zero) + v * a
        return {i: v for i, v in out.items() if not K.is_zero(v)}

    def _combine(self, other: "Matrix", sign: int) -> "Matrix":
        _require_same_field(self.field, other.field)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shape mismatch {self.shape} vs {other.shape}")
        data: RowData = {i: dict(r) for i, r in self._data.items()}
        for i, row in other._data.items():
            target = data.setdefault(i, {})
            for j, v in row.items():
                if j in target:
                    target[j] = target[j] + v if sign > 0 else target[j] - v
                else:
                    target[j] = v if sign > 0 else -v
        return Matrix(self.field, self.rows, self.cols, data)

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, 1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, -1)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols,
                      {i: {j: -v for j, v in r.items()} for i, r in self._data.items()})

    def scale(self, c: Any) -> "Matrix":
        factor = c if not isinstance(c, (int, Fraction, str)) else self.field.element(c)
        return Matrix(self.field, self.rows, self.cols,
                      {i: {j: factor * v for j, v in r.items()} for i, r in self._data.items()})

    def kron(self, other: "Matrix") -> "Matrix":
        """张量积矩阵，行列指标 (i, k) -> i * other.rows + k"""
        _require_same_field(self.field, other.field)
        data: RowData = {}
        for i, row in self._data.items():
            for k, orow in other._data.items():
                target = data.setdefault(i * other.rows + k, {})
                for j, a in row.items():
                    for l, b in orow.items():
                        target[j * other.cols + l] = a * b
        return Matrix(self.field, self.rows * other.rows, self.cols * other.cols, data)

    def select_columns(self, indices: Sequence[int]) -> "Matrix":
        position = {j: pos for pos, j in enumerate(indices)}
        data: RowData = {}
        for i, row in self._data.items():
            kept = {position[j]: v for j, v in row.items() if j in position}
            if kept:
                data[i] = kept
        return Matrix(self.field, self.rows, len(indices), data)

    def select_rows(self, indices: Sequence[int]) -> "Matrix":
        data: RowData = {}
        for pos, i in enumerate(indices):
            if i in self._data:
                data[pos] = dict(self._data[i])
        return Matrix(self.field, len(indices), self.cols, data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self._data == other._data)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Matrix({self.field.label}, {self.rows}x{self.cols}, nnz={self.nnz})"


def _require_same_field(a: FieldSpec, b: FieldSpec) -> None:
    if a != b:
        raise FieldMismatchError(f"field mismatch: {a.label} vs {b.label}")


# ---------------------------------------------------------------------------
# 线性代数
# ---------------------------------------------------------------------------

def rref(M: Matrix) -> Tuple[Dict[int, Dict[int, Any]], Tuple[int, ...]]:
    """
    行最简形

    Returns:
        (pivot_rows, pivots)：pivot_rows 以主元列为键，值为该主元行（稀疏）；
        pivots 为递增的主元列。
    """
    if M.is_zero():
        return {}, ()
    dm = DomainMatrix({i: dict(r) for i, r in M._data.items()}, M.shape, M.field.domain)
    reduced, _ = dm.rref()
    K = M.field.domain
    pivot_rows: Dict[int, Dict[int, Any]] = {}
    for row in reduced.to_sparse().rep.values():
        entries = {j: v for j, v in row.items() if not K.is_zero(v)}
        if entries:
            pivot_rows[min(entries)] = entries
    return pivot_rows, tuple(sorted(pivot_rows))


def rank(M: Matrix) -> int:
    """秩；行数较多时对转置做约化"""
    if M.is_zero():
        return 0
    target = M.transpose() if M.rows > M.cols else M
    return len(rref(target)[1])


def kernel(M: Matrix) -> Matrix:
    """核的基，按列给出（cols × nullity）"""
    pivot_rows, pivots = rref(M)
    pivot_set = set(pivots)
    K = M.field.domain
    columns = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        vector = {free: K.one}
        for p, row in pivot_rows.items():
            if free in row:
                vector[p] = -row[free]
        columns.append(vector)
    return Matrix.from_columns(M.field, M.cols, columns)


def image(M: Matrix) -> Matrix:
    """像的基：M 的主元列"""
    _, pivots = rref(M)
    return M.select_columns(pivots)


@dataclass(frozen=True)
class Quotient:
    """
    商空间 K^N / span(M 的列)

    complement 的列是补空间的标准基向量，projection 把 K^N 的向量映到商空间坐标。
    """
    complement: Matrix
    projection: Matrix
    complement_indices: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.complement_indices)


def quotient(M: Matrix) -> Quotient:
    """余核：取 M 的像在 K^rows 中的标准补，并给出投影矩阵"""
    N = M.rows
    pivot_rows, pivots = rref(M.transpose())
    pivot_set = set(pivots)
    kept = tuple(j for j in range(N) if j not in pivot_set)
    position = {j: q for q, j in enumerate(kept)}
    K = M.field.domain
    data: RowData = {q: {j: K.one} for q, j in enumerate(kept)}
    for p, row in pivot_rows.items():
        for j, v in row.items():
            if j in position:
                data[position[j]][p] = data[position[j]].get(p, K.zero) - v
    projection = Matrix(M.field, len(kept), N, data)
    complement = Matrix.from_columns(M.field, N, [{j: K.one} for j in kept])
    return Quotient(complement=complement, projection=projection, complement_indices=kept)


def solve(A: Matrix, B: Matrix) -> Matrix:
    """
    求 A X = B 的一个特解（自由变量取 0）

    Raises:
        InconsistentSystemError: 方程组无解
    """
    if A.rows != B.rows:
        raise DimensionMismatchError(f"solve: A has {A.rows} rows, B has {B.rows}")
    augmented = Matrix.hstack(A.field, A.rows, A, B)
    pivot_rows, pivots = rref(augmented)
    if pivots and pivots[-1] >= A.cols:
        raise InconsistentSystemError("linear system has no solution")
    data: RowData = {}
    for p, row in pivot_rows.items():
        entries = {j - A.cols: v for j, v in row.items() if j >= A.cols}
        if entries:
            data[p] = entries
    return Matrix(A.field, A.cols, B.cols, data)


def inverse(A: Matrix) -> Matrix:
    if A.rows != A.cols:
        raise DimensionMismatchError(f"inverse of non-square {A.shape}")
    if rank(A) != A.rows:
        raise InconsistentSystemError("matrix is singular")
    return solve(A, Matrix.identity(A.field, A.rows))


def independent_columns(M: Matrix) -> Tuple[int, ...]:
    """从左到右贪心选出的线性无关列"""
    return rref(M)[1]


_MODES = ("kernel", "image", "rank", "quotient-basis", "solve")


def solve_linear(M: Matrix, mode: str, rhs: Optional[Matrix] = None):
    """
    线性代数统一入口

    Args:
        M: 矩阵
        mode: kernel | image | rank | quotient-basis | solve
        rhs: mode 为 solve 时的右端

    Returns:
        kernel/image 返回基矩阵（按列），rank 返回整数，
        quotient-basis 返回 Quotient，solve 返回特解矩阵
    """
    if mode not in _MODES:
        raise InputValidationError(f"unknown mode {mode!r}, expected one of {_MODES}", field="mode")
    if mode == "kernel":
        return kernel(M)
    if mode == "image":
        return image(M)
    if mode == "rank":
        return rank(M)
    if mode == "quotient-basis":
        return quotient(M)
    if rhs is None:
        raise DimensionMismatchError("mode 'solve' needs a right-hand side", field="rhs")
    return solve(M, rhs)
