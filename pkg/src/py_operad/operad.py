# -*- coding: utf-8 -*-
"""
算子（operad）、余算子与模

算子以部分复合 ∘_i 给出（i 从 1 开始）：O_m ⊗ O_n → O_{m+n−1}，
矩阵的列指标为 a * dim(O_n) + b。复合矩阵按需计算并缓存。
"""

from __future__ import annotations

import threading
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from . import permutations as perms
from .config import Window, get_settings
from .exceptions import AxiomViolationError, InputValidationError, UnsupportedOperadError, WindowOverflowError
from .field import FieldSpec, Matrix, rank
from .logging import get_logger
from .symseq import (
    Component,
    SymSeqObject,
    associative_sequence,
    commutative_sequence,
    shift_component,
    trivial_sequence,
)

logger = get_logger(__name__)

Vector = Dict[int, Any]
PartialFn = Callable[[int, int, int], Matrix]

BUILTIN_NAMES = ("triv", "comm_nu", "ass_nu", "lie", "lie_shifted")


def bilinear(C: Matrix, dn: int, va: Vector, vb: Vector) -> Vector:
    """把复合矩阵 C 作用在 va ⊗ vb 上"""
    F = C.field
    out: Vector = {}
    for a, x in va.items():
        for b, y in vb.items():
            for r, v in C.column(a * dn + b).items():
                out[r] = out.get(r, F.zero) + x * y * v
    return {r: v for r, v in out.items() if not F.is_zero(v)}


def block_permutation(sigma: perms.Perm, i: int, tau: perms.Perm) -> perms.Perm:
    """块置换 σ∘_i τ：σ 作用在外层输入上，第 i 个输入（1 起始）展开为 τ 作用的块"""
    p = i - 1
    n = len(tau)
    head = sigma[p]

    def outer(k: int) -> int:
        return sigma[k] if sigma[k] < head else sigma[k] + n - 1

    out = [outer(x) for x in range(p)]
    out.extend(head + tau[y] for y in range(n))
    out.extend(outer(k) for k in range(p + 1, len(sigma)))
    return tuple(out)


class Operad:
    """
    算子

    Args:
        name: 名称（用于日志与报告）
        underlying: 底层对称序列
        unit: 单位元在元数 1 分量中的标签
        partial: (m, i, n) -> ∘_i 的矩阵
        reduced: 是否满足 O_1 = span(unit)、O_0 = 0
    """

    def __init__(self, name: str, underlying: SymSeqObject, unit: Any, partial: PartialFn, reduced: bool = True):
        self.name = name
        self.underlying = underlying
        self.unit = unit
        self._partial_fn = partial
        self._cache: Dict[Tuple[int, int, int], Matrix] = {}
        self._lock = threading.Lock()
        self.reduced = reduced
        if reduced:
            one = underlying.component(1)
            if one.labels != (unit,) or not underlying.is_nonunital():
                raise InputValidationError(f"operad {name} is not reduced", field="reduced")

    @property
    def field(self) -> FieldSpec:
        return self.underlying.field

    @property
    def window(self) -> Window:
        return self.underlying.window

    @property
    def max_arity(self) -> int:
        return self.window.max_arity

    def component(self, n: int) -> Component:
        return self.underlying.component(n)

    def dim(self, n: int) -> int:
        return self.underlying.component(n).dim

    @property
    def unit_index(self) -> int:
        return self.component(1).index(self.unit)

    def partial(self, m: int, i: int, n: int) -> Matrix:
        """∘_i: O_m ⊗ O_n → O_{m+n−1} 的矩阵"""
        if not 1 <= i <= m:
            raise InputValidationError(f"partial composition index {i} outside 1..{m}", field="i")
        if m + n - 1 > self.max_arity:
            raise WindowOverflowError(f"composite arity {m + n - 1} exceeds maxArity {self.max_arity}")
        key = (m, i, n)
        found = self._cache.get(key)
        if found is None:
            found = self._partial_fn(m, i, n)
            expected = (self.dim(m + n - 1), self.dim(m) * self.dim(n))
            if found.shape != expected:
                raise AxiomViolationError(f"∘_{i} for ({m},{n}) has shape {found.shape}, expected {expected}")
            with self._lock:
                self._cache[key] = found
        return found

    def compose_vectors(self, m: int, i: int, n: int, va: Vector, vb: Vector) -> Vector:
        return bilinear(self.partial(m, i, n), self.dim(n), va, vb)

    def gamma(self, k: int, top: Vector, inputs: Sequence[Tuple[int, Vector]]) -> Tuple[int, Vector]:
        """
        完全复合 γ(a; b_1, …, b_k)，从左到右插入，不另加符号

        Args:
            k: a 的元数
            top: a 的向量
            inputs: [(b_j 的元数, b_j 的向量), ...]

        Returns:
            (结果元数, 结果向量)
        """
        arity, vec = k, top
        position = 1
        for n, vb in inputs:
            if not vec:
                return k + sum(x - 1 for x, _ in inputs), {}
            vec = self.compose_vectors(arity, position, n, vec, vb)
            arity += n - 1
            position += n
        return arity, vec

    def with_partial(self, name: str, partial: PartialFn) -> "Operad":
        return Operad(name, self.underlying, self.unit, partial, self.reduced)

    def __repr__(self) -> str:
        return f"Operad({self.name}, {self.field.label}, dims={self.underlying.total_dims()})"


class Cooperad:
    """
    余算子：部分余复合 Δ_i: C_{m+n−1} → C_m ⊗ C_n（行指标 a * dim(C_n) + b）

    由算子逐元数取线性对偶得到。
    """

    def __init__(self, name: str, underlying: SymSeqObject, counit: Any, partial: PartialFn):
        self.name = name
        self.underlying = underlying
        self.counit = counit
        self._partial_fn = partial
        self._cache: Dict[Tuple[int, int, int], Matrix] = {}

    @property
    def field(self) -> FieldSpec:
        return self.underlying.field

    @property
    def window(self) -> Window:
        return self.underlying.window

    def dim(self, n: int) -> int:
        return self.underlying.component(n).dim

    def partial(self, m: int, i: int, n: int) -> Matrix:
        key = (m, i, n)
        if key not in self._cache:
            self._cache[key] = self._partial_fn(m, i, n)
        return self._cache[key]

    def __repr__(self) -> str:
        return f"Cooperad({self.name}, {self.field.label}, dims={self.underlying.total_dims()})"


# ---------------------------------------------------------------------------
# 内置算子
# ---------------------------------------------------------------------------

def triv_operad(field: FieldSpec, window: Window) -> Operad:
    """单位算子 triv"""
    def partial(m: int, i: int, n: int) -> Matrix:
        if (m, n) == (1, 1):
            return Matrix.identity(field, 1)
        return Matrix.zeros(field, 0, 0)

    return Operad("triv", trivial_sequence(field, window), "id", partial)


def comm_operad(field: FieldSpec, window: Window) -> Operad:
    """非单位交换算子 Comm^nu：mu_m ∘_i mu_n = mu_{m+n−1}"""
    def partial(m: int, i: int, n: int) -> Matrix:
        return Matrix.identity(field, 1)

    return Operad("comm_nu", commutative_sequence(field, window), "mu1", partial)


def ass_operad(field: FieldSpec, window: Window) -> Operad:
    """非单位结合算子 Ass^nu：单词 a 中第 i 个字母替换为移位后的单词 b"""
    seq = associative_sequence(field, window)

    def partial(m: int, i: int, n: int) -> Matrix:
        A, B, T = seq.component(m), seq.component(n), seq.component(m + n - 1)
        p = i - 1
        data: Dict[int, Dict[int, Any]] = {}
        for a, word_a in enumerate(A.labels):
            for b, word_b in enumerate(B.labels):
                word: List[int] = []
                for letter in word_a:
                    if letter == p:
                        word.extend(p + x for x in word_b)
                    else:
                        word.append(letter if letter < p else letter + n - 1)
                data.setdefault(T.index(tuple(word)), {})[a * B.dim + b] = field.one
        return Matrix(field, T.dim, A.dim * B.dim, data)

    return Operad("ass_nu", seq, (0,), partial)


def shift_operad(O: Operad, m: int, name: Optional[str] = None) -> Operad:
    """
    算子平移 O(m)

    元数 r 分量平移 (1−r)m 度，作用扭以 sign^m；
    (a ∘_i b) 的符号为 (−1)^{|a|·m(1−n) + m(n−1)(i−1)}，|a| 为平移前的度数。
    """
    if m == 0:
        return O
    F = O.field
    seq = SymSeqObject(F, O.window, {r: shift_component(c, m) for r, c in O.underlying.items()})

    def partial(k: int, i: int, n: int) -> Matrix:
        base = O.partial(k, i, n)
        dn = O.dim(n)
        degrees = O.component(k).degrees
        data: Dict[int, Dict[int, Any]] = {}
        for r, c, v in base.items():
            exponent = degrees[c // dn] * m * (1 - n) + m * (n - 1) * (i - 1)
            data.setdefault(r, {})[c] = F.sign(exponent) * v
        return Matrix(F, base.rows, base.cols, data)

    return Operad(name or f"{O.name}({m})", seq, O.unit, partial, O.reduced)


@lru_cache(maxsize=32)
def _lie_cached(field: FieldSpec, max_arity: int) -> Operad:
    from .presentation import lie_presentation, presented_operad

    window = Window(max_arity=max_arity)
    guard = get_settings().guards.lie_max_arity
    return presented_operad(lie_presentation(field), window, name="lie", max_arity_guard=guard)


def lie_operad(field: FieldSpec, window: Window) -> Operad:
    """Lie：由反对称括号模 Jacobi 关系的表现构造，按 (域, 最大元数) 缓存"""
    guard = get_settings().guards.lie_max_arity
    if window.max_arity > guard:
        raise WindowOverflowError(f"lie needs maxArity <= {guard}, got {window.max_arity}", field="maxArity")
    cached = _lie_cached(field, window.max_arity)
    if cached.window == window:
        return cached
    return Operad("lie", cached.underlying.with_window(window), cached.unit, cached.partial, cached.reduced)


def builtin(name: str, field: FieldSpec, window: Window) -> Operad:
    """
    内置算子

    Args:
        name: triv | comm_nu | ass_nu | lie | lie_shifted（也接受连字符写法）
        field: 基域
        window: 计算窗口

    Raises:
        UnsupportedOperadError: 未知名称
    """
    key = name.replace("-", "_").lower()
    if key == "triv":
        return triv_operad(field, window)
    if key in ("comm_nu", "comm"):
        return comm_operad(field, window)
    if key in ("ass_nu", "ass"):
        return ass_operad(field, window)
    if key == "lie":
        return lie_operad(field, window)
    if key == "lie_shifted":
        return shift_operad(lie_operad(field, window), 1, name="lie_shifted")
    raise UnsupportedOperadError(f"unknown operad {name!r}, expected one of {BUILTIN_NAMES}", field="operad")


def flip_partial(O: Operad, m: int, i: int, n: int) -> Operad:
    """把某一个 ∘_i 取负，得到一个（通常）不再满足公理的算子"""
    def partial(k: int, j: int, l: int) -> Matrix:
        base = O.partial(k, j, l)
        return -base if (k, j, l) == (m, i, n) else base

    return O.with_partial(f"{O.name}~flip({m},{i},{n})", partial)


# ---------------------------------------------------------------------------
# 公理检查
# ---------------------------------------------------------------------------

class AxiomFailure(BaseModel):
    """一条失败的公理实例"""
    axiom: str
    arities: List[int]
    indices: List[int]
    basis: List[str]


class OperadCheckReport(BaseModel):
    """check_operad 的报告"""
    name: str
    max_arity: int
    checked: int = 0
    failures: List[AxiomFailure] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        if self.valid:
            return "valid"
        return f"{len(self.failures)} failed axiom instances"


def _first_difference(L: Matrix, R: Matrix) -> Optional[int]:
    if L == R:
        return None
    diff = L - R
    return min(j for _, j, _ in diff.items())


def _split(col: int, dims: Sequence[int]) -> List[int]:
    out = []
    for d in reversed(dims):
        out.append(col % d)
        col //= d
    return list(reversed(out))


def check_operad(O: Operad, max_failures: int = 50) -> OperadCheckReport:
    """
    在窗口内检查算子公理：单位、顺序与平行结合律、Σ 等变性

    失败记入报告，不抛异常。
    """
    F = O.field
    A = O.max_arity
    report = OperadCheckReport(name=O.name, max_arity=A)

    def fail(axiom: str, arities: List[int], indices: List[int], col: int) -> None:
        if len(report.failures) >= max_failures:
            return
        coords = _split(col, [O.dim(a) for a in arities])
        labels = [str(O.component(a).labels[c]) for a, c in zip(arities, coords)]
        report.failures.append(AxiomFailure(axiom=axiom, arities=arities, indices=indices, basis=labels))

    def eye(n: int) -> Matrix:
        return Matrix.identity(F, O.dim(n))

    arities = [n for n in range(1, A + 1) if O.dim(n)]
    if 1 not in arities:
        report.failures.append(AxiomFailure(axiom="unit", arities=[1], indices=[], basis=[]))
        return report
    u = O.unit_index
    d1 = O.dim(1)

    for n in arities:
        left = O.partial(1, 1, n).select_columns([u * O.dim(n) + x for x in range(O.dim(n))])
        report.checked += 1
        col = _first_difference(left, eye(n))
        if col is not None:
            fail("left-unit", [n], [1], col)
        for i in range(1, n + 1):
            right = O.partial(n, i, 1).select_columns([x * d1 + u for x in range(O.dim(n))])
            report.checked += 1
            col = _first_difference(right, eye(n))
            if col is not None:
                fail("right-unit", [n], [i], col)

    for m in arities:
        for n in arities:
            if m + n - 1 > A:
                continue
            for p in arities:
                if m + n + p - 2 > A:
                    continue
                swap = _swap_last_two(O, m, n, p)
                for i in range(1, m + 1):
                    ab = O.partial(m, i, n).kron(eye(p))
                    for j in range(1, n + 1):
                        lhs = O.partial(m + n - 1, i + j - 1, p) @ ab
                        rhs = O.partial(m, i, n + p - 1) @ eye(m).kron(O.partial(n, j, p))
                        report.checked += 1
                        col = _first_difference(lhs, rhs)
                        if col is not None:
                            fail("sequential", [m, n, p], [i, j], col)
                    for j in range(i + 1, m + 1):
                        lhs = O.partial(m + n - 1, j + n - 1, p) @ ab
                        rhs = O.partial(m + p - 1, i, n) @ O.partial(m, j, p).kron(eye(n)) @ swap
                        report.checked += 1
                        col = _first_difference(lhs, rhs)
                        if col is not None:
                            fail("parallel", [m, n, p], [i, j], col)

    for m in arities:
        for n in arities:
            if m + n - 1 > A:
                continue
            target = O.component(m + n - 1)
            for i in range(1, m + 1):
                C = O.partial(m, i, n)
                for k, g in enumerate(O.component(m).generators):
                    sigma = perms.adjacent(m, k)
                    moved = O.partial(m, sigma[i - 1] + 1, n) @ g.kron(eye(n))
                    block = target.action(block_permutation(sigma, i, perms.identity(n)))
                    report.checked += 1
                    col = _first_difference(moved, block @ C)
                    if col is not None:
                        fail("equivariance-outer", [m, n], [i, k], col)
                for k, h in enumerate(O.component(n).generators):
                    tau = perms.adjacent(n, k)
                    moved = C @ eye(m).kron(h)
                    block = target.action(block_permutation(perms.identity(m), i, tau))
                    report.checked += 1
                    col = _first_difference(moved, block @ C)
                    if col is not None:
                        fail("equivariance-inner", [m, n], [i, k], col)

    logger.info("算子公理检查", operad=O.name, checked=report.checked, failures=len(report.failures))
    return report


def _swap_last_two(O: Operad, m: int, n: int, p: int) -> Matrix:
    """a⊗b⊗c ↦ (−1)^{|b||c|} a⊗c⊗b"""
    F = O.field
    dm, dn, dp = O.dim(m), O.dim(n), O.dim(p)
    deg_n, deg_p = O.component(n).degrees, O.component(p).degrees
    data: Dict[int, Dict[int, Any]] = {}
    for a in range(dm):
        for b in range(dn):
            for c in range(dp):
                col = (a * dn + b) * dp + c
                row = (a * dp + c) * dn + b
                data[row] = {col: F.sign(deg_n[b] * deg_p[c])}
    return Matrix(F, dm * dp * dn, dm * dn * dp, data)


def assert_valid(O: Operad) -> None:
    report = check_operad(O, max_failures=1)
    if not report.valid:
        failure = report.failures[0]
        raise AxiomViolationError(f"operad {O.name}: {failure.axiom} fails at {failure.arities} {failure.indices}")


# ---------------------------------------------------------------------------
# 对偶
# ---------------------------------------------------------------------------

def dual_component(comp: Component) -> Component:
    """逐元数线性对偶：度数取负，微分取 −dᵀ，对换取转置"""
    from .graded import dual_label

    return Component(
        comp.field,
        comp.arity,
        [dual_label(x) for x in comp.labels],
        [-d for d in comp.degrees],
        -comp.differential.transpose(),
        [g.transpose() for g in comp.generators],
    )


def dual_sequence(X: SymSeqObject) -> SymSeqObject:
    return SymSeqObject(X.field, X.window, {n: dual_component(c) for n, c in X.items()})


def dual_cooperad(O: Operad) -> Cooperad:
    """对偶余算子：Δ_i 为 ∘_i 的转置"""
    from .graded import dual_label

    return Cooperad(
        f"{O.name}^*", dual_sequence(O.underlying), dual_label(O.unit),
        lambda m, i, n: O.partial(m, i, n).transpose(),
    )


def dual_operad(C: Cooperad) -> Operad:
    """余算子的对偶算子：∘_i 为 Δ_i 的转置"""
    from .graded import dual_label

    seq = dual_sequence(C.underlying)
    unit = dual_label(C.counit)
    reduced = seq.component(1).labels == (unit,) and seq.is_nonunital()
    return Operad(f"{C.name}^*", seq, unit, lambda m, i, n: C.partial(m, i, n).transpose(), reduced)


# ---------------------------------------------------------------------------
# 模
# ---------------------------------------------------------------------------

class RightModule:
    """
    右 O-模：部分作用 ρ_i: M_m ⊗ O_n → M_{m+n−1}

    Args:
        name: 名称
        underlying: 底层对称序列
        operad: 作用的算子
        action: (m, i, n) -> 矩阵，列指标 x * dim(O_n) + b
    """

    def __init__(self, name: str, underlying: SymSeqObject, operad: Operad, action: PartialFn):
        self.name = name
        self.underlying = underlying
        self.operad = operad
        self._action = action
        self._cache: Dict[Tuple[int, int, int], Matrix] = {}

    @property
    def field(self) -> FieldSpec:
        return self.underlying.field

    def component(self, n: int) -> Component:
        return self.underlying.component(n)

    def dim(self, n: int) -> int:
        return self.underlying.component(n).dim

    def partial(self, m: int, i: int, n: int) -> Matrix:
        key = (m, i, n)
        if key not in self._cache:
            target = m + n - 1
            if self.dim(target) == 0 or self.dim(m) == 0:
                self._cache[key] = Matrix.zeros(self.field, 0, self.dim(m) * self.operad.dim(n))
            else:
                self._cache[key] = self._action(m, i, n)
        return self._cache[key]

    def act(self, k: int, top: Vector, inputs: Sequence[Tuple[int, Vector]]) -> Tuple[int, Vector]:
        """完全作用 ρ(x; o_1, …, o_k)，从左到右"""
        arity, vec = k, top
        position = 1
        for n, vb in inputs:
            if not vec:
                return k + sum(x - 1 for x, _ in inputs), {}
            vec = bilinear(self.partial(arity, position, n), self.operad.dim(n), vec, vb)
            arity += n - 1
            position += n
        return arity, vec


class LeftModule:
    """
    左 O-模：截断正则模 τ_b(O)，作用为 O 的复合，元数超过 b 时为零

    b = 1 即平凡模 triv。
    """

    def __init__(self, operad: Operad, bound: int):
        if bound < 1:
            raise InputValidationError("left module bound must be >= 1", field="bound")
        self.operad = operad
        self.bound = min(bound, operad.max_arity)
        self.name = "triv" if self.bound == 1 else f"tau{self.bound}({operad.name})"

    @property
    def field(self) -> FieldSpec:
        return self.operad.field

    @property
    def is_trivial(self) -> bool:
        return self.bound == 1

    def component(self, n: int) -> Component:
        if n > self.bound:
            return Component.empty(self.field, n)
        return self.operad.component(n)

    def dim(self, n: int) -> int:
        return self.component(n).dim

    def act(self, k: int, top: Vector, inputs: Sequence[Tuple[int, Vector]]) -> Tuple[int, Vector]:
        """λ(a; l_1, …, l_k)：总元数超过 b 时结果为零"""
        total = sum(n for n, _ in inputs)
        if total > self.bound:
            return total, {}
        return self.operad.gamma(k, top, inputs)


def regular_right_module(O: Operad) -> RightModule:
    return RightModule(O.name, O.underlying, O, O.partial)


def truncated_right_module(O: Operad, m: int) -> RightModule:
    """τ_m(O) 作为右 O-模：O 模去元数 > m 的理想"""
    seq = SymSeqObject(O.field, O.window, {n: c for n, c in O.underlying.items() if n <= m})

    def action(k: int, i: int, n: int) -> Matrix:
        return O.partial(k, i, n)

    return RightModule(f"tau{m}({O.name})", seq, O, action)


def trivial_right_module(O: Operad) -> RightModule:
    """triv 作为右 O-模（经增广作用）"""
    return truncated_right_module(O, 1)


def fiber_module(O: Operad, m: int) -> RightModule:
    """集中在元数 m 的平凡右模：只有单位作用，分量为 O_m"""
    seq = SymSeqObject(O.field, O.window, {m: O.component(m)})
    u = O.unit_index
    F = O.field

    def action(k: int, i: int, n: int) -> Matrix:
        d = O.dim(m)
        data = {x: {x * O.dim(1) + u: F.one} for x in range(d)}
        return Matrix(F, d, d * O.dim(1), data)

    return RightModule(f"fiber{m}({O.name})", seq, O, action)


class ModuleStructureReport(BaseModel):
    """单元数序列上右模结构映射空间的描述"""
    arity: int
    unknowns: int
    constraints: int
    solution_dim: int
    consistent: bool

    @property
    def contractible(self) -> bool:
        return self.consistent and self.solution_dim == 0


def module_structure_space(X: Component, O: Operad) -> ModuleStructureReport:
    """
    求集中在元数 n 的序列 X 上全部右 O-模结构映射

    未知量为所有 ρ_i: X_n ⊗ O_k → X_{n+k−1} 的矩阵元；由于 X 只在元数 n 非零，
    只剩 k = 1 的映射。约束为单位公理 ρ_i(x ⊗ u) = x 与 Σ_n 等变性。
    报告齐次方程组解空间的维数（0 即结构唯一）。

    只接受约化算子：此时 O_1 由单位张成，单位公理已确定全部未知量，
    结果必为“唯一”或“无解”。这里检查的是这组方程自洽，而不是去发现非平凡的结构。
    """
    n = X.arity
    if n < 2:
        raise InputValidationError("single-arity module check needs arity >= 2", field="arity")
    if not O.reduced:
        raise InputValidationError("module structure check needs a reduced operad", field="operad")
    F = O.field
    d = X.dim
    d1 = O.dim(1)
    # 未知量 (i, 目标行, 源列)：源列 x * d1 + w
    unknown_index: Dict[Tuple[int, int, int], int] = {}
    for i in range(1, n + 1):
        for r in range(d):
            for c in range(d * d1):
                unknown_index[(i, r, c)] = len(unknown_index)
    rows: List[Dict[int, Any]] = []
    rhs: List[Any] = []
    u = O.unit_index
    for i in range(1, n + 1):
        for x in range(d):
            for r in range(d):
                rows.append({unknown_index[(i, r, x * d1 + u)]: F.one})
                rhs.append(F.one if r == x else F.zero)
    # 等变性：ρ_{σ(i)}(σx ⊗ w) = σ·ρ_i(x ⊗ w)，对生成元
    for k, g in enumerate(X.generators):
        sigma = perms.adjacent(n, k)
        for i in range(1, n + 1):
            j = sigma[i - 1] + 1
            for x in range(d):
                for w in range(d1):
                    for r in range(d):
                        row: Dict[int, Any] = {}
                        for y, gv in g.column(x).items():
                            key = unknown_index[(j, r, y * d1 + w)]
                            row[key] = row.get(key, F.zero) + gv
                        for s, gv in g.row(r).items():
                            key = unknown_index[(i, s, x * d1 + w)]
                            row[key] = row.get(key, F.zero) - gv
                        rows.append(row)
                        rhs.append(F.zero)
    system = Matrix(F, len(rows), len(unknown_index), {k: r for k, r in enumerate(rows)})
    r = rank(system)
    augmented = Matrix.hstack(F, len(rows), system, Matrix.from_columns(F, len(rows), [
        {k: v for k, v in enumerate(rhs) if not F.is_zero(v)}
    ]))
    consistent = rank(augmented) == r
    return ModuleStructureReport(
        arity=n, unknowns=len(unknown_index), constraints=len(rows),
        solution_dim=len(unknown_index) - r, consistent=consistent,
    )
