# -*- coding: utf-8 -*-
"""
分次空间与链复形

采用同调（下标）约定：微分 d_n 把 n 度映到 n−1 度。
张量积使用 Koszul 符号 d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy，
线性对偶的微分取 −dᵀ（对偶两次回到原复形）。
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .config import Window
from .exceptions import (
    AxiomViolationError,
    DimensionMismatchError,
    FieldMismatchError,
    InputValidationError,
    WindowOverflowError,
)
from .field import FieldSpec, Matrix, kernel, quotient, rank, rref, solve
from .logging import get_logger

logger = get_logger(__name__)

Label = Hashable


class GradedSpace:
    """
    分次向量空间：度数 -> 有序的带标签基

    只保存非零度数；同一度数内标签唯一。
    """

    __slots__ = ("field", "_basis", "_index")

    def __init__(self, field: FieldSpec, basis: Mapping[int, Sequence[Label]]):
        self.field = field
        self._basis: Dict[int, Tuple[Label, ...]] = {
            int(n): tuple(labels) for n, labels in sorted(basis.items()) if len(labels) > 0
        }
        self._index: Dict[int, Dict[Label, int]] = {}
        for n, labels in self._basis.items():
            index = {label: k for k, label in enumerate(labels)}
            if len(index) != len(labels):
                raise InputValidationError(f"duplicate labels in degree {n}", field="basis")
            self._index[n] = index

    @classmethod
    def from_dims(cls, field: FieldSpec, dims: Mapping[int, int], prefix: str = "e") -> "GradedSpace":
        return cls(field, {n: [f"{prefix}{n}_{k}" for k in range(d)] for n, d in dims.items()})

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(self._basis)

    def basis(self, n: int) -> Tuple[Label, ...]:
        return self._basis.get(n, ())

    def index(self, n: int, label: Label) -> int:
        return self._index[n][label]

    def dim(self, n: int) -> int:
        return len(self._basis.get(n, ()))

    def dims(self) -> Dict[int, int]:
        return {n: len(labels) for n, labels in self._basis.items()}

    @property
    def total_dim(self) -> int:
        return sum(len(labels) for labels in self._basis.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * len(labels) for n, labels in self._basis.items())

    def items(self) -> Iterable[Tuple[int, Tuple[Label, ...]]]:
        return self._basis.items()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedSpace):
            return NotImplemented
        return self.field == other.field and self._basis == other._basis

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"GradedSpace({self.field.label}, dims={self.dims()})"


class ChainComplex:
    """
    有限维链复形

    Args:
        space: 分次空间
        differential: 度数 n -> d_n（形状 dim(n−1) × dim(n)），缺省为零
        truncated_above / truncated_below: 构造时被截掉的度数界，
            在该度数上的同调不可靠
        check: 是否立即校验 d² = 0
    """

    __slots__ = ("space", "_differential", "truncated_above", "truncated_below")

    def __init__(
        self,
        space: GradedSpace,
        differential: Optional[Mapping[int, Matrix]] = None,
        truncated_above: Optional[int] = None,
        truncated_below: Optional[int] = None,
        check: bool = True,
    ):
        self.space = space
        self._differential: Dict[int, Matrix] = {}
        for n, d in (differential or {}).items():
            if d.field != space.field:
                raise FieldMismatchError(f"differential d_{n} over {d.field.label}, space over {space.field.label}")
            if d.shape != (space.dim(n - 1), space.dim(n)):
                raise DimensionMismatchError(
                    f"d_{n} has shape {d.shape}, expected {(space.dim(n - 1), space.dim(n))}"
                )
            if not d.is_zero():
                self._differential[n] = d
        self.truncated_above = truncated_above
        self.truncated_below = truncated_below
        if check:
            self.check()

    @classmethod
    def concentrated(cls, field: FieldSpec, dims: Mapping[int, int], prefix: str = "e") -> "ChainComplex":
        """零微分复形"""
        return cls(GradedSpace.from_dims(field, dims, prefix))

    @classmethod
    def unit(cls, field: FieldSpec) -> "ChainComplex":
        return cls(GradedSpace(field, {0: ["1"]}))

    @property
    def field(self) -> FieldSpec:
        return self.space.field

    @property
    def degrees(self) -> Tuple[int, ...]:
        return self.space.degrees

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def dims(self) -> Dict[int, int]:
        return self.space.dims()

    def basis(self, n: int) -> Tuple[Label, ...]:
        return self.space.basis(n)

    def d(self, n: int) -> Matrix:
        found = self._differential.get(n)
        if found is not None:
            return found
        return Matrix.zeros(self.field, self.dim(n - 1), self.dim(n))

    @property
    def differentials(self) -> Dict[int, Matrix]:
        return dict(self._differential)

    def check(self) -> None:
        """校验 d_{n−1} ∘ d_n = 0"""
        for n, d in self._differential.items():
            below = self._differential.get(n - 1)
            if below is not None and not (below @ d).is_zero():
                raise AxiomViolationError(f"d^2 != 0 at degree {n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self.space == other.space and self._differential == other._differential

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ChainComplex({self.field.label}, dims={self.dims()})"


@dataclass
class HomologyResult:
    """
    同调计算结果

    dims 只含窗口内可靠的度数；unreliable 为窗口边缘被排除的度数。
    需要基时，representatives[n] 的列是 C_n 中的代表闭链，
    projection[n] 把闭链映到 H_n 的坐标。
    """
    field: FieldSpec
    dims: Dict[int, int]
    unreliable: Tuple[int, ...] = ()
    representatives: Dict[int, Matrix] = dc_field(default_factory=dict)
    projection: Dict[int, Matrix] = dc_field(default_factory=dict)

    @property
    def space(self) -> GradedSpace:
        return GradedSpace(self.field, {n: [("h", n, k) for k in range(d)] for n, d in self.dims.items()})

    def nonzero_dims(self) -> Dict[int, int]:
        return {n: d for n, d in sorted(self.dims.items()) if d}

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_concentrated_in(self, degree: int) -> bool:
        return all(d == 0 for n, d in self.dims.items() if n != degree)


def _reliability(C: ChainComplex, window: Optional[Window]) -> Tuple[List[int], List[int]]:
    """窗口内的度数与窗口边缘不可靠的度数"""
    if window is None:
        degrees = sorted(set(C.degrees) | {n - 1 for n in C.degrees})
        lo, hi = (min(degrees), max(degrees)) if degrees else (0, 0)
    else:
        lo, hi = window.min_deg, window.max_deg
    unreliable = []
    if C.dim(hi + 1) > 0:
        unreliable.append(hi)
    if C.dim(lo - 1) > 0:
        unreliable.append(lo)
    for edge in (C.truncated_above, C.truncated_below):
        if edge is not None and lo <= edge <= hi:
            unreliable.append(edge)
    return list(range(lo, hi + 1)), sorted(set(unreliable))


def homology(C: ChainComplex, window: Optional[Window] = None, with_basis: bool = False) -> HomologyResult:
    """
    计算同调 H_n = ker d_n / im d_{n+1}

    Args:
        C: 链复形
        window: 计算窗口，缺省取复形自身的度数范围
        with_basis: 是否同时给出代表闭链与投影

    Returns:
        HomologyResult
    """
    degrees, unreliable = _reliability(C, window)
    ranks: Dict[int, int] = {}

    def rank_of(n: int) -> int:
        if n not in ranks:
            ranks[n] = rank(C.d(n)) if C.dim(n) and C.dim(n - 1) else 0
        return ranks[n]

    dims: Dict[int, int] = {}
    reps: Dict[int, Matrix] = {}
    projections: Dict[int, Matrix] = {}
    for n in degrees:
        if n in unreliable or C.dim(n) == 0:
            continue
        h = C.dim(n) - rank_of(n) - rank_of(n + 1)
        dims[n] = h
        if with_basis:
            reps[n], projections[n] = _homology_basis(C, n)
    if unreliable:
        logger.debug("同调窗口边缘不可靠", degrees=unreliable)
    return HomologyResult(
        field=C.field, dims=dims, unreliable=tuple(unreliable),
        representatives=reps, projection=projections,
    )


def _homology_basis(C: ChainComplex, n: int) -> Tuple[Matrix, Matrix]:
    """代表闭链（列）与投影矩阵（H_n × C_n，在边缘上为零）"""
    F = C.field
    N = C.dim(n)
    Z = kernel(C.d(n))
    B = C.d(n + 1)
    _, b_pivots = rref(B)
    B = B.select_columns(b_pivots)
    stacked = Matrix.hstack(F, N, B, Z)
    _, pivots = rref(stacked)
    h_cols = [p - B.cols for p in pivots if p >= B.cols]
    H = Z.select_columns(h_cols)
    if H.cols == 0:
        return H, Matrix.zeros(F, 0, N)
    spanned = Matrix.hstack(F, N, B, H)
    completion = quotient(spanned)
    full = Matrix.hstack(F, N, spanned, completion.complement)
    # full 可逆；投影是 full⁻¹ 中对应 H 的那几行
    selector = Matrix.from_columns(F, N, [{B.cols + k: F.one} for k in range(H.cols)])
    projection = solve(full.transpose(), selector).transpose()
    return H, projection


def homology_dims(C: ChainComplex, window: Optional[Window] = None) -> Dict[int, int]:
    """只返回非零的可靠同调维数"""
    return homology(C, window).nonzero_dims()


def induced_map(
    f: Mapping[int, Matrix], source: HomologyResult, target: HomologyResult
) -> Dict[int, Matrix]:
    """链映射在同调上诱导的映射 H(f)_n = π_target ∘ f_n ∘ reps_source"""
    out: Dict[int, Matrix] = {}
    for n, reps in source.representatives.items():
        proj = target.projection.get(n)
        fn = f.get(n)
        if proj is None or fn is None:
            continue
        out[n] = proj @ (fn @ reps)
    return out


def is_chain_map(f: Mapping[int, Matrix], C: ChainComplex, D: ChainComplex) -> bool:
    """检查 d_D ∘ f_n = f_{n−1} ∘ d_C"""
    F = C.field
    for n in sorted(set(C.degrees) | set(f)):
        fn = f.get(n, Matrix.zeros(F, D.dim(n), C.dim(n)))
        fm = f.get(n - 1, Matrix.zeros(F, D.dim(n - 1), C.dim(n - 1)))
        if D.d(n) @ fn != fm @ C.d(n):
            return False
    return True


def shift(C: ChainComplex, m: int) -> ChainComplex:
    """平移 (C[m])_n = C_{n−m}，微分乘以 (−1)^m"""
    if m == 0:
        return C
    space = GradedSpace(C.field, {n + m: C.basis(n) for n in C.degrees})
    sign = C.field.sign(m)
    differential = {n + m: d.scale(sign) for n, d in C.differentials.items()}
    above = None if C.truncated_above is None else C.truncated_above + m
    below = None if C.truncated_below is None else C.truncated_below + m
    return ChainComplex(space, differential, above, below, check=False)


def tensor(C: ChainComplex, D: ChainComplex, window: Optional[Window] = None) -> ChainComplex:
    """
    张量积 (C⊗D)_n = ⊕_{i+j=n} C_i ⊗ D_j

    基标签为有序对 (x, y)，按 (i, x 的次序, y 的次序) 排列。
    若标签在不同度数间重名，则使用 ((i, x), (j, y))。
    """
    if C.field != D.field:
        raise FieldMismatchError(f"tensor of complexes over {C.field.label} and {D.field.label}")
    F = C.field
    tagged = _labels_collide(C) or _labels_collide(D)
    slots: Dict[int, List[Tuple[int, int, int, int]]] = {}
    for i in C.degrees:
        for j in D.degrees:
            n = i + j
            if window is not None and not window.contains_degree(n):
                continue
            bucket = slots.setdefault(n, [])
            for a in range(C.dim(i)):
                for b in range(D.dim(j)):
                    bucket.append((i, a, j, b))
    position = {n: {slot: k for k, slot in enumerate(bucket)} for n, bucket in slots.items()}

    def label(i: int, a: int, j: int, b: int) -> Label:
        x, y = C.basis(i)[a], D.basis(j)[b]
        return ((i, x), (j, y)) if tagged else (x, y)

    space = GradedSpace(F, {n: [label(*s) for s in bucket] for n, bucket in slots.items()})
    differential: Dict[int, Matrix] = {}
    for n, bucket in slots.items():
        below = position.get(n - 1)
        if below is None:
            continue
        data: Dict[int, Dict[int, Any]] = {}
        for col, (i, a, j, b) in enumerate(bucket):
            for r, v in C.d(i).column(a).items():
                row = below.get((i - 1, r, j, b))
                if row is not None:
                    data.setdefault(row, {})[col] = v
            sign = F.sign(i)
            for r, v in D.d(j).column(b).items():
                row = below.get((i, a, j - 1, r))
                if row is not None:
                    target = data.setdefault(row, {})
                    target[col] = target.get(col, F.zero) + sign * v
        differential[n] = Matrix(F, len(below), len(bucket), data)
    above = below_edge = None
    if window is not None:
        if any(i + j > window.max_deg for i in C.degrees for j in D.degrees):
            above = window.max_deg
        if any(i + j < window.min_deg for i in C.degrees for j in D.degrees):
            below_edge = window.min_deg
    return ChainComplex(space, differential, above, below_edge)


def _labels_collide(C: ChainComplex) -> bool:
    seen = set()
    for n in C.degrees:
        for label in C.basis(n):
            if label in seen:
                return True
            seen.add(label)
    return False


def dual_label(label: Label) -> Label:
    """对偶基标签：("*", x)，对偶两次还原"""
    if isinstance(label, tuple) and len(label) == 2 and label[0] == "*":
        return label[1]
    return ("*", label)


def dualize(C: ChainComplex, window: Optional[Window] = None) -> ChainComplex:
    """
    线性对偶 (C^∨)_n = (C_{−n})^*，微分为 −(d_{1−n})ᵀ

    Raises:
        WindowOverflowError: 窗口外仍有非零分量
    """
    if window is not None:
        outside = [n for n in C.degrees if not window.contains_degree(-n)]
        if outside:
            raise WindowOverflowError(f"dual has components outside the window at degrees {[-n for n in outside]}")
    space = GradedSpace(C.field, {-n: [dual_label(x) for x in C.basis(n)] for n in C.degrees})
    differential = {1 - n: -d.transpose() for n, d in C.differentials.items()}
    above = None if C.truncated_below is None else -C.truncated_below
    below = None if C.truncated_above is None else -C.truncated_above
    return ChainComplex(space, differential, above, below, check=False)


def direct_sum(F: FieldSpec, parts: Sequence[ChainComplex]) -> ChainComplex:
    """直和，标签为 (分量序号, 原标签)"""
    basis: Dict[int, List[Label]] = {}
    offsets: List[Dict[int, int]] = []
    for k, part in enumerate(parts):
        if part.field != F:
            raise FieldMismatchError("direct sum across fields")
        offset = {}
        for n in part.degrees:
            bucket = basis.setdefault(n, [])
            offset[n] = len(bucket)
            bucket.extend((k, x) for x in part.basis(n))
        offsets.append(offset)
    space = GradedSpace(F, basis)
    differential: Dict[int, Matrix] = {}
    for k, part in enumerate(parts):
        for n, d in part.differentials.items():
            data = differential.setdefault(n, {})
            for i, j, v in d.items():
                data.setdefault(offsets[k][n - 1] + i, {})[offsets[k][n] + j] = v
    return ChainComplex(
        space, {n: Matrix(F, space.dim(n - 1), space.dim(n), data) for n, data in differential.items()}
    )
