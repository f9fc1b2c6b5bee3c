# -*- coding: utf-8 -*-
"""
对称序列

每个元数 n 的分量是一个有限维链复形，连同 Σ_n 的作用。作用由相邻对换
s_0..s_{n−2} 的矩阵给出，任意置换经约化字展开；约定 σ·a 把第 k 个输入
改名为 σ(k)。

分量采用扁平存储：标签、各基元的度数、总微分矩阵与生成元矩阵共用同一组指标。
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import permutations as perms
from .config import Window, get_settings
from .exceptions import AxiomViolationError, FieldMismatchError, InputValidationError, WindowOverflowError
from .field import FieldSpec, Matrix, Quotient, kernel, quotient, rank, solve
from .graded import ChainComplex, GradedSpace
from .logging import get_logger
from .workqueue import run_per_arity

logger = get_logger(__name__)

Label = Hashable
Vector = Dict[int, Any]


class Component:
    """
    单个元数的分量：带 Σ_n 作用的链复形

    Args:
        field: 基域
        arity: 元数 n
        labels: 基标签（唯一）
        degrees: 每个基元的度数
        differential: 总微分（把 k 度映到 k−1 度），缺省为零
        generators: 相邻对换 s_0..s_{n−2} 的作用矩阵，缺省为平凡作用
    """

    __slots__ = ("field", "arity", "labels", "degrees", "differential", "generators", "_index", "_cache")

    def __init__(
        self,
        field: FieldSpec,
        arity: int,
        labels: Sequence[Label],
        degrees: Sequence[int],
        differential: Optional[Matrix] = None,
        generators: Optional[Sequence[Matrix]] = None,
    ):
        if len(labels) != len(degrees):
            raise InputValidationError("labels and degrees differ in length", field="degrees")
        self.field = field
        self.arity = arity
        self.labels = tuple(labels)
        self.degrees = tuple(int(d) for d in degrees)
        dim = len(self.labels)
        self._index = {label: k for k, label in enumerate(self.labels)}
        if len(self._index) != dim:
            raise InputValidationError(f"duplicate labels in arity {arity}", field="basis")
        self.differential = differential if differential is not None else Matrix.zeros(field, dim, dim)
        if generators is None:
            generators = [Matrix.identity(field, dim) for _ in range(max(arity - 1, 0))]
        self.generators = tuple(generators)
        if len(self.generators) != max(arity - 1, 0):
            raise InputValidationError(
                f"arity {arity} needs {max(arity - 1, 0)} transposition matrices, got {len(self.generators)}",
                field="transpositions",
            )
        for g in (self.differential, *self.generators):
            if g.field != field:
                raise FieldMismatchError("component matrices over a different field")
            if g.shape != (dim, dim):
                raise InputValidationError(f"matrix shape {g.shape}, expected {(dim, dim)}", field="transpositions")
        self._cache: Dict[perms.Perm, Matrix] = {}

    @classmethod
    def empty(cls, field: FieldSpec, arity: int) -> "Component":
        return cls(field, arity, (), ())

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: Label) -> int:
        return self._index[label]

    def find(self, label: Label) -> Optional[int]:
        return self._index.get(label)

    def dims_by_degree(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def indices_in_degree(self, degree: int) -> List[int]:
        return [k for k, d in enumerate(self.degrees) if d == degree]

    def complex(self) -> ChainComplex:
        """按度数拆开的链复形"""
        blocks = {d: self.indices_in_degree(d) for d in self.dims_by_degree()}
        space = GradedSpace(self.field, {d: [self.labels[k] for k in idx] for d, idx in blocks.items()})
        differential = {}
        for d, idx in blocks.items():
            below = blocks.get(d - 1)
            if below:
                differential[d] = self.differential.select_columns(idx).select_rows(below)
        return ChainComplex(space, differential, check=False)

    def action(self, sigma: perms.Perm) -> Matrix:
        """置换 sigma 的作用矩阵 ρ(σ) = G_{i_k} ⋯ G_{i_0}"""
        if sigma in self._cache:
            return self._cache[sigma]
        result = Matrix.identity(self.field, self.dim)
        for i in reversed(perms.adjacent_word(sigma)):
            result = result @ self.generators[i]
        if len(self._cache) < 5040:
            self._cache[sigma] = result
        return result

    def group_elements(self) -> Dict[perms.Perm, Matrix]:
        """Σ_n 全部元素的作用矩阵，由生成元逐层左乘得到"""
        start = perms.identity(self.arity)
        found = {start: Matrix.identity(self.field, self.dim)}
        frontier = [start]
        while frontier:
            nxt = []
            for sigma in frontier:
                for i, g in enumerate(self.generators):
                    tau = perms.compose(perms.adjacent(self.arity, i), sigma)
                    if tau not in found:
                        found[tau] = g @ found[sigma]
                        nxt.append(tau)
            frontier = nxt
        return found

    def character(self, cycle_type: Tuple[int, ...]) -> Any:
        """共轭类上的特征标（作用矩阵的迹，返回规范形式）"""
        return self.field.to_python(self.action(perms.cycle_type_representative(cycle_type)).trace())

    def character_table(self) -> Dict[Tuple[int, ...], Any]:
        return {ct: self.character(ct) for ct in perms.cycle_types(self.arity)}

    def check(self) -> None:
        """
        校验分量：d² = 0、d 降一度、生成元保度、对合、辫关系、与 d 交换

        Raises:
            AxiomViolationError: 任一条不成立
        """
        F = self.field
        d = self.differential
        if not (d @ d).is_zero():
            raise AxiomViolationError(f"d^2 != 0 in arity {self.arity}")
        for i, j, _ in d.items():
            if self.degrees[i] != self.degrees[j] - 1:
                raise AxiomViolationError(f"differential does not lower degree by one in arity {self.arity}")
        identity = Matrix.identity(F, self.dim)
        gens = self.generators
        for k, g in enumerate(gens):
            for i, j, _ in g.items():
                if self.degrees[i] != self.degrees[j]:
                    raise AxiomViolationError(f"s_{k} is not of degree 0 in arity {self.arity}")
            if g @ g != identity:
                raise AxiomViolationError(f"s_{k}^2 != 1 in arity {self.arity}")
            if g @ d != d @ g:
                raise AxiomViolationError(f"s_{k} does not commute with d in arity {self.arity}")
            if k + 1 < len(gens):
                h = gens[k + 1]
                if g @ h @ g != h @ g @ h:
                    raise AxiomViolationError(f"braid relation fails at s_{k} in arity {self.arity}")
            for l in range(k + 2, len(gens)):
                if g @ gens[l] != gens[l] @ g:
                    raise AxiomViolationError(f"s_{k} and s_{l} do not commute in arity {self.arity}")

    def shifted(self, degree_shift: int, differential_parity: int, action_parity: int) -> "Component":
        """平移度数，微分乘 (−1)^differential_parity，对换乘 (−1)^action_parity"""
        F = self.field
        return Component(
            F,
            self.arity,
            self.labels,
            [d + degree_shift for d in self.degrees],
            self.differential.scale(F.sign(differential_parity)),
            [g.scale(F.sign(action_parity)) for g in self.generators],
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Component):
            return NotImplemented
        return (
            self.field == other.field
            and self.arity == other.arity
            and self.labels == other.labels
            and self.degrees == other.degrees
            and self.differential == other.differential
            and self.generators == other.generators
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Component(arity={self.arity}, dims={self.dims_by_degree()})"


class SymSeqObject:
    """
    对称序列：元数 -> Component

    只保存非零分量；元数 0 也可以显式保存。
    """

    __slots__ = ("field", "window", "_components")

    def __init__(self, field: FieldSpec, window: Window, components: Mapping[int, Component]):
        self.field = field
        self.window = window
        self._components: Dict[int, Component] = {}
        for n, comp in sorted(components.items()):
            if comp.field != field:
                raise FieldMismatchError(f"arity {n} over {comp.field.label}, sequence over {field.label}")
            if comp.arity != n:
                raise InputValidationError(f"component stored at arity {n} has arity {comp.arity}", field="arities")
            if n > window.max_arity:
                raise WindowOverflowError(f"arity {n} exceeds maxArity {window.max_arity}", field="maxArity")
            if comp.dim:
                self._components[n] = comp

    @property
    def arities(self) -> Tuple[int, ...]:
        return tuple(self._components)

    def component(self, n: int) -> Component:
        found = self._components.get(n)
        return found if found is not None else Component.empty(self.field, n)

    def __getitem__(self, n: int) -> Component:
        return self.component(n)

    def items(self) -> Iterable[Tuple[int, Component]]:
        return self._components.items()

    def dims(self) -> Dict[int, Dict[int, int]]:
        """元数 -> (度数 -> 维数)"""
        return {n: c.dims_by_degree() for n, c in self._components.items()}

    def total_dims(self) -> Dict[int, int]:
        return {n: c.dim for n, c in self._components.items()}

    def is_nonunital(self) -> bool:
        return 0 not in self._components

    def check(self) -> None:
        for comp in self._components.values():
            comp.check()

    def with_window(self, window: Window) -> "SymSeqObject":
        return SymSeqObject(self.field, window, {n: c for n, c in self._components.items() if n <= window.max_arity})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymSeqObject):
            return NotImplemented
        return self.field == other.field and self._components == other._components

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SymSeqObject({self.field.label}, dims={self.total_dims()})"


# ---------------------------------------------------------------------------
# 内置序列
# ---------------------------------------------------------------------------

def trivial_sequence(field: FieldSpec, window: Window) -> SymSeqObject:
    """triv：只有元数 1 的一维分量（复合积的单位）"""
    return SymSeqObject(field, window, {1: Component(field, 1, ["id"], [0])})


def commutative_sequence(field: FieldSpec, window: Window) -> SymSeqObject:
    """Comm^nu：每个元数 n ≥ 1 一维，平凡作用"""
    return SymSeqObject(
        field, window, {n: Component(field, n, [f"mu{n}"], [0]) for n in range(1, window.max_arity + 1)}
    )


def associative_component(field: FieldSpec, n: int) -> Component:
    """Ass^nu_n：以输入的线性顺序（单词）为基的正则表示"""
    words = sorted(perms.all_permutations(n))
    index = {w: k for k, w in enumerate(words)}
    generators = []
    for i in range(n - 1):
        s = perms.adjacent(n, i)
        data = {index[tuple(s[x] for x in w)]: {k: field.one} for k, w in enumerate(words)}
        generators.append(Matrix(field, len(words), len(words), data))
    return Component(field, n, words, [0] * len(words), generators=generators)


def associative_sequence(field: FieldSpec, window: Window) -> SymSeqObject:
    return SymSeqObject(field, window, {n: associative_component(field, n) for n in range(1, window.max_arity + 1)})


def regular_representation(field: FieldSpec, n: int) -> Component:
    return associative_component(field, n)


def trivial_representation(field: FieldSpec, n: int, dim: int = 1) -> Component:
    return Component(field, n, [f"t{k}" for k in range(dim)], [0] * dim)


def sign_representation(field: FieldSpec, n: int) -> Component:
    return Component(field, n, ["sgn"], [0], generators=[Matrix.identity(field, 1).scale(-1)] * (n - 1))


# ---------------------------------------------------------------------------
# 复合积
# ---------------------------------------------------------------------------

def _tensor_vectors(F: FieldSpec, parts: Sequence[Vector]) -> Dict[Tuple[int, ...], Any]:
    out: Dict[Tuple[int, ...], Any] = {(): F.one}
    for vec in parts:
        nxt: Dict[Tuple[int, ...], Any] = {}
        for key, c in out.items():
            for k, v in vec.items():
                nxt[key + (k,)] = c * v
        out = nxt
    return out


def _composite_component(X: SymSeqObject, Y: SymSeqObject, n: int, window: Window) -> Component:
    """(X∘Y)_n 的基、微分与相邻对换作用"""
    F = X.field
    keys: List[Tuple[perms.SetPartition, int, Tuple[int, ...]]] = []
    labels: List[Label] = []
    degrees: List[int] = []
    for blocks in perms.set_partitions(n):
        xk = X.component(len(blocks))
        if not xk.dim:
            continue
        ys = [Y.component(len(b)) for b in blocks]
        if any(not y.dim for y in ys):
            continue
        for xi in range(xk.dim):
            for yidx in product(*(range(y.dim) for y in ys)):
                degree = xk.degrees[xi] + sum(y.degrees[j] for y, j in zip(ys, yidx))
                if not window.contains_degree(degree):
                    raise WindowOverflowError(
                        f"composite of degree {degree} at arity {n} leaves the window", field="minDeg/maxDeg"
                    )
                keys.append((blocks, xi, tuple(yidx)))
                labels.append((blocks, xk.labels[xi], tuple(y.labels[j] for y, j in zip(ys, yidx))))
                degrees.append(degree)
    guard = get_settings().guards.max_cells
    if len(keys) > guard:
        raise WindowOverflowError(f"composition at arity {n} has {len(keys)} basis elements", predicted=len(keys))
    position = {key: k for k, key in enumerate(keys)}

    def y_degree(blocks, yidx, j):
        return Y.component(len(blocks[j])).degrees[yidx[j]]

    # 微分：Leibniz 规则
    ddata: Dict[int, Dict[int, Any]] = {}
    for col, (blocks, xi, yidx) in enumerate(keys):
        xk = X.component(len(blocks))
        for r, v in xk.differential.column(xi).items():
            ddata.setdefault(position[(blocks, r, yidx)], {})[col] = v
        sign_exp = xk.degrees[xi]
        for j, block in enumerate(blocks):
            y = Y.component(len(block))
            sign = F.sign(sign_exp)
            for r, v in y.differential.column(yidx[j]).items():
                row = position[(blocks, xi, yidx[:j] + (r,) + yidx[j + 1:])]
                target = ddata.setdefault(row, {})
                target[col] = target.get(col, F.zero) + sign * v
            sign_exp += y_degree(blocks, yidx, j)
    differential = Matrix(F, len(keys), len(keys), ddata)

    generators = []
    for i in range(n - 1):
        sigma = perms.adjacent(n, i)
        gdata: Dict[int, Dict[int, Any]] = {}
        for col, (blocks, xi, yidx) in enumerate(keys):
            images = []
            taus = []
            for block in blocks:
                image, tau = perms.induced_order(block, sigma)
                images.append(image)
                taus.append(tau)
            order = sorted(range(len(blocks)), key=lambda j: images[j][0])
            r = [0] * len(blocks)
            for new, old in enumerate(order):
                r[old] = new
            r = tuple(r)
            new_blocks = tuple(images[old] for old in order)
            xk = X.component(len(blocks))
            x_vec = xk.action(r).column(xi)
            y_vecs = [None] * len(blocks)
            ydegs = []
            for j, block in enumerate(blocks):
                y = Y.component(len(block))
                y_vecs[r[j]] = y.action(taus[j]).column(yidx[j])
                ydegs.append(y.degrees[yidx[j]])
            sign = F.sign(0 if perms.sort_sign(ydegs, r) > 0 else 1)
            for xr, xv in x_vec.items():
                for ykey, yv in _tensor_vectors(F, y_vecs).items():
                    row = position[(new_blocks, xr, ykey)]
                    target = gdata.setdefault(row, {})
                    target[col] = target.get(col, F.zero) + sign * xv * yv
        generators.append(Matrix(F, len(keys), len(keys), gdata))
    return Component(F, n, labels, degrees, differential, generators)


def compose(X: SymSeqObject, Y: SymSeqObject, window: Optional[Window] = None) -> SymSeqObject:
    """
    复合积 (X∘Y)_n = ⊕_k (X_k ⊗ ⊕_{f: n↠k} ⊗_j Y_{f⁻¹(j)})_{Σ_k}

    Σ_k 在满射上自由作用，余不变量取轨道代表：块按最小元排序的集合分拆。
    基标签为 (分拆, x 标签, (y 标签...))。

    Raises:
        InputValidationError: Y_0 ≠ 0
        FieldMismatchError: 两者不在同一个域上
    """
    if X.field != Y.field:
        raise FieldMismatchError(f"compose over {X.field.label} and {Y.field.label}")
    if not Y.is_nonunital():
        raise InputValidationError("right factor must vanish in arity 0", field="Y_0")
    window = window or X.window
    arities = list(range(1, window.max_arity + 1))
    built = run_per_arity(arities, lambda n: _composite_component(X, Y, n, window))
    logger.debug("复合积完成", dims={n: c.dim for n, c in built.items()})
    return SymSeqObject(X.field, window, built)


def compose_many(factors: Sequence[SymSeqObject], window: Optional[Window] = None) -> SymSeqObject:
    """多重复合积 X_1∘(X_2∘(⋯∘X_ℓ))"""
    if not factors:
        raise InputValidationError("need at least one factor", field="factors")
    result = factors[-1]
    for X in reversed(factors[:-1]):
        result = compose(X, result, window)
    return result


def unit_isomorphism(composite: SymSeqObject, original: SymSeqObject, side: str) -> Dict[int, Matrix]:
    """
    单位同构 triv∘Y → Y（side="left"）或 X∘triv → X（side="right"）

    Returns:
        元数 -> 把复合基映到原基的置换矩阵
    """
    F = composite.field
    out: Dict[int, Matrix] = {}
    for n, comp in composite.items():
        target = original.component(n)
        data: Dict[int, Dict[int, Any]] = {}
        for col, (blocks, x_label, y_labels) in enumerate(comp.labels):
            label = y_labels[0] if side == "left" else x_label
            data.setdefault(target.index(label), {})[col] = F.one
        out[n] = Matrix(F, target.dim, comp.dim, data)
    return out


def truncate(X: SymSeqObject, n: int, side: str = "above") -> SymSeqObject:
    """截断：above 去掉元数 > n 的分量，below 去掉元数 < n 的分量"""
    if n < 1:
        raise InputValidationError("truncation arity must be >= 1", field="n")
    if side not in ("above", "below"):
        raise InputValidationError(f"unknown side {side!r}", field="side")
    keep = (lambda k: k <= n) if side == "above" else (lambda k: k >= n)
    return SymSeqObject(X.field, X.window, {k: c for k, c in X.items() if keep(k)})


def shift_component(comp: Component, m: int) -> Component:
    """元数 r 分量平移 (1−r)m 度，微分乘 (−1)^{m(1−r)}，对换乘 (−1)^m"""
    r = comp.arity
    degree_shift = (1 - r) * m
    return comp.shifted(degree_shift, degree_shift, m)


def operadic_shift(X: SymSeqObject, m: int) -> SymSeqObject:
    """算子平移 X(m)_r = X_r[(1−r)m]，Σ_r 作用扭以 sign^m"""
    if m == 0:
        return X
    return SymSeqObject(X.field, X.window, {r: shift_component(c, m) for r, c in X.items()})


# ---------------------------------------------------------------------------
# 余不变量、不变量与范数映射
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormMapResult:
    """
    范数映射 N: V_{Σ_n} → V^{Σ_n}

    matrix 的列对应余不变量的基（coinvariants.complement 的列），
    行对应不变量的基（invariants 的列）。
    """
    coinvariants: Quotient
    invariants: Matrix
    matrix: Matrix
    is_iso: bool

    @property
    def coinvariant_dim(self) -> int:
        return self.coinvariants.dim

    @property
    def invariant_dim(self) -> int:
        return self.invariants.cols


def coinvariants(V: Component) -> Quotient:
    """余不变量：V 模去所有 (s_i − 1) 的像"""
    F = V.field
    identity = Matrix.identity(F, V.dim)
    if not V.generators:
        return quotient(Matrix.zeros(F, V.dim, 0))
    return quotient(Matrix.hstack(F, V.dim, *(g - identity for g in V.generators)))


def invariants(V: Component) -> Matrix:
    """不变量：所有 (s_i − 1) 的公共核"""
    F = V.field
    identity = Matrix.identity(F, V.dim)
    if not V.generators:
        return identity
    return kernel(Matrix.vstack(F, V.dim, *(g - identity for g in V.generators)))


def norm_map(V: Component) -> NormMapResult:
    """
    范数映射：N = Σ_{σ∈Σ_n} ρ(σ) 在余不变量与不变量之间诱导的映射

    Raises:
        AxiomViolationError: 作用不是群同态
    """
    V.check()
    F = V.field
    coinv = coinvariants(V)
    inv = invariants(V)
    total = Matrix.zeros(F, V.dim, V.dim)
    for matrix in V.group_elements().values():
        total = total + matrix
    image = total @ coinv.complement
    if inv.cols == 0:
        induced = Matrix.zeros(F, 0, coinv.dim)
    else:
        induced = solve(inv, image)
    is_iso = coinv.dim == inv.cols and rank(induced) == inv.cols
    logger.debug("范数映射", arity=V.arity, coinvariants=coinv.dim, invariants=inv.cols, is_iso=is_iso)
    return NormMapResult(coinvariants=coinv, invariants=inv, matrix=induced, is_iso=is_iso)


def composite_norm_maps(composite: SymSeqObject, X: SymSeqObject, Y: SymSeqObject) -> List[Tuple[int, int, bool]]:
    """
    复合积中出现的 Σ_k 表示的范数映射

    对每个目标元数 n 与块数 k，取 X_k ⊗ (⊗_j Y_{|B_j|}) 上 Σ_k 的置换作用（在块大小全等的
    分拆型上），检查范数映射是否可逆。

    Returns:
        [(n, k, is_iso), ...]
    """
    out = []
    F = composite.field
    for n in composite.arities:
        for k in range(1, n + 1):
            xk = X.component(k)
            if not xk.dim or n % k:
                continue
            y = Y.component(n // k)
            if not y.dim:
                continue
            rep = block_permutation_representation(F, xk, y, k)
            out.append((n, k, norm_map(rep).is_iso))
    return out


def block_permutation_representation(F: FieldSpec, xk: Component, y: Component, k: int) -> Component:
    """Σ_k 在 X_k ⊗ Y^{⊗k} 上的作用：x 上按 X_k 作用，y 因子按 Koszul 符号置换"""
    keys = [(xi, yidx) for xi in range(xk.dim) for yidx in product(range(y.dim), repeat=k)]
    position = {key: c for c, key in enumerate(keys)}
    degrees = [xk.degrees[xi] + sum(y.degrees[j] for j in yidx) for xi, yidx in keys]
    generators = []
    for i in range(k - 1):
        data: Dict[int, Dict[int, Any]] = {}
        for col, (xi, yidx) in enumerate(keys):
            swapped = list(yidx)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            sign = F.sign(y.degrees[yidx[i]] * y.degrees[yidx[i + 1]])
            for xr, xv in xk.generators[i].column(xi).items():
                row = position[(xr, tuple(swapped))]
                data.setdefault(row, {})[col] = sign * xv
        generators.append(Matrix(F, len(keys), len(keys), data))
    labels = [(xk.labels[xi], tuple(y.labels[j] for j in yidx)) for xi, yidx in keys]
    return Component(F, k, labels, degrees, generators=generators)


# ---------------------------------------------------------------------------
# 自由代数
# ---------------------------------------------------------------------------

def free_algebra(O: SymSeqObject, V: GradedSpace, max_word_length: int) -> GradedSpace:
    """
    自由 O-代数 ⊕_{n ≤ N} (O_n ⊗ V^{⊗n})_{Σ_n}，按词长分次

    σ 把 v_k 放到第 σ(k) 个位置，带 Koszul 符号。

    Returns:
        以词长为分次的空间，标签为余不变量的代表基元
    """
    if V.field != O.field:
        raise FieldMismatchError("free algebra over mismatched fields")
    if max_word_length > O.window.max_arity:
        raise WindowOverflowError(
            f"word length {max_word_length} exceeds maxArity {O.window.max_arity}", field="maxWordLength"
        )
    F = O.field
    letters = [(d, label) for d in V.degrees for label in V.basis(d)]
    basis: Dict[int, List[Label]] = {}
    for n in range(1, max_word_length + 1):
        on = O.component(n)
        if not on.dim or not letters:
            continue
        keys = [(oi, word) for oi in range(on.dim) for word in product(range(len(letters)), repeat=n)]
        guard = get_settings().guards.max_cells
        if len(keys) > guard:
            raise WindowOverflowError(f"free algebra length {n} has {len(keys)} monomials", predicted=len(keys))
        position = {key: c for c, key in enumerate(keys)}
        relations = []
        for i in range(n - 1):
            data: Dict[int, Dict[int, Any]] = {}
            for col, (oi, word) in enumerate(keys):
                swapped = list(word)
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                sign = F.sign(letters[word[i]][0] * letters[word[i + 1]][0])
                for orow, ov in on.generators[i].column(oi).items():
                    row = position[(orow, tuple(swapped))]
                    target = data.setdefault(row, {})
                    target[col] = target.get(col, F.zero) + sign * ov
                target = data.setdefault(col, {})
                target[col] = target.get(col, F.zero) - F.one
            relations.append(Matrix(F, len(keys), len(keys), data))
        if relations:
            q = quotient(Matrix.hstack(F, len(keys), *relations))
            kept = q.complement_indices
        else:
            kept = tuple(range(len(keys)))
        basis[n] = [
            (on.labels[keys[c][0]], tuple(letters[j][1] for j in keys[c][1])) for c in kept
        ]
        logger.debug("自由代数", word_length=n, dim=len(kept))
    return GradedSpace(F, basis)
