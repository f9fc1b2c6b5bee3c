# -*- coding: utf-8 -*-
"""
两侧 bar 复形与 Koszul 对偶

元数 n 的胞腔是集合分拆的严格链 P_0 < P_1 < … < P_s：
P_0 的每个块由左模 L 装饰，第 t 层（1 ≤ t ≤ s）的每个块由 O_m 装饰
（m 为它包含的 P_{t−1} 的块数，按最小元排序），顶端由右模 R 的一个元装饰，
其元数为 P_s 的块数。严格性即“没有双射的层”，这就是正规化复形。

张量因子按 [R][第 s 层]…[第 1 层][L] 排列，胞腔度数为 s 加各装饰的度数。
总微分 D = Σ_j (−1)^j d_j + (−1)^s d_int，面 d_j 去掉 P_j 并复合相邻两层。
"""

from __future__ import annotations

from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from . import permutations as perms
from .config import Window, get_settings
from .exceptions import AxiomViolationError, FieldMismatchError, InputValidationError, WindowOverflowError
from .field import FieldSpec, Matrix
from .graded import ChainComplex, HomologyResult, homology
from .logging import get_logger
from .operad import (
    Cooperad,
    LeftModule,
    Operad,
    RightModule,
    dual_component,
    dual_operad,
    fiber_module,
    trivial_right_module,
    truncated_right_module,
)
from .symseq import Component, SymSeqObject, block_permutation_representation, norm_map
from .workqueue import run_per_arity

logger = get_logger(__name__)

Partition = perms.SetPartition
Chain = Tuple[Partition, ...]
Decorations = Tuple[Tuple[int, ...], ...]
Cell = Tuple[Chain, Decorations]
Vector = Dict[int, Any]


def _children(upper: Partition, lower: Optional[Partition], n: int) -> List[List[int]]:
    """upper 的每个块包含的 lower 块的序号（lower 为 None 时为元素本身），升序"""
    if lower is None:
        return [list(block) for block in upper]
    owner = {}
    for idx, block in enumerate(upper):
        for x in block:
            owner[x] = idx
    out: List[List[int]] = [[] for _ in upper]
    for idx, block in enumerate(lower):
        out[owner[block[0]]].append(idx)
    return out


def coarsenings(P: Partition) -> List[Tuple[Partition, List[List[int]]]]:
    """P 的全部严格粗化，连同每个新块包含的 P 块序号"""
    out = []
    for pattern in perms.set_partitions(len(P)):
        if len(pattern) == len(P):
            continue
        blocks = [tuple(sorted(x for b in group for x in P[b])) for group in pattern]
        out.append((tuple(blocks), [list(group) for group in pattern]))
    return out


def _one(n: int) -> Partition:
    return (tuple(range(n)),)


def _sign(F: FieldSpec, sign: int) -> Any:
    return F.one if sign > 0 else -F.one


def count_cells(R: RightModule, O: Operad, L: LeftModule, n: int) -> int:
    """胞腔数的预估（不枚举装饰）"""
    memo: Dict[Partition, int] = {}

    def above(P: Partition) -> int:
        if P in memo:
            return memo[P]
        total = R.dim(len(P))
        for Q, groups in coarsenings(P):
            weight = 1
            for g in groups:
                weight *= O.dim(len(g))
                if not weight:
                    break
            if weight:
                total += weight * above(Q)
        memo[P] = total
        return total

    total = 0
    for P0 in perms.set_partitions(n):
        weight = 1
        for block in P0:
            weight *= L.dim(len(block))
        if weight:
            total += weight * above(P0)
    return total


def enumerate_cells(R: RightModule, O: Operad, L: LeftModule, n: int) -> List[Tuple[Cell, int]]:
    """枚举非退化胞腔及其度数，顺序确定"""
    chains: List[Chain] = []

    def extend(chain: List[Partition]) -> None:
        P = chain[-1]
        if R.dim(len(P)):
            chains.append(tuple(chain))
        for Q, groups in coarsenings(P):
            if all(O.dim(len(g)) for g in groups):
                extend(chain + [Q])

    for P0 in perms.set_partitions(n):
        if all(L.dim(len(block)) for block in P0):
            extend([P0])

    cells: List[Tuple[Cell, int]] = []
    for chain in chains:
        s = len(chain) - 1
        level_components: List[List[Component]] = [[L.component(len(block)) for block in chain[0]]]
        for t in range(1, s + 1):
            groups = _children(chain[t], chain[t - 1], n)
            level_components.append([O.component(len(g)) for g in groups])
        level_components.append([R.component(len(chain[-1]))])
        ranges = [list(product(*(range(c.dim) for c in comps))) for comps in level_components]
        for decos in product(*ranges):
            degree = s
            for comps, idx in zip(level_components, decos):
                degree += sum(c.degrees[x] for c, x in zip(comps, idx))
            cells.append(((chain, tuple(decos)), degree))
    return cells


class BarComplex:
    """
    两侧 bar 复形 Bar(R, O, L)：元数 -> 带 Σ_n 作用的链复形（Component）

    cells[n] 与 component(n) 的基一一对应。
    """

    def __init__(self, name: str, field: FieldSpec, window: Window,
                 components: Dict[int, Component], truncated: Dict[int, Tuple[Optional[int], Optional[int]]]):
        self.name = name
        self.field = field
        self.window = window
        self.components = components
        self.truncated = truncated

    @property
    def arities(self) -> Tuple[int, ...]:
        return tuple(sorted(self.components))

    def component(self, n: int) -> Component:
        return self.components.get(n) or Component.empty(self.field, n)

    def cells(self, n: int) -> Tuple[Cell, ...]:
        return self.component(n).labels

    def complex(self, n: int) -> ChainComplex:
        comp = self.component(n)
        C = comp.complex()
        above, below = self.truncated.get(n, (None, None))
        return ChainComplex(C.space, C.differentials, above, below, check=False)

    def cell_counts(self, n: int) -> Dict[int, int]:
        return self.component(n).dims_by_degree()

    def euler_characteristic(self, n: int) -> int:
        return sum((-1) ** (d % 2) * c for d, c in self.cell_counts(n).items())

    def check(self) -> None:
        for comp in self.components.values():
            comp.check()


class _BarBuilder:
    """单个元数的胞腔、微分与 Σ_n 作用"""

    def __init__(self, R: RightModule, O: Operad, L: LeftModule, n: int, window: Window):
        self.R, self.O, self.L = R, O, L
        self.n = n
        self.window = window
        self.F = O.field
        self.above: Optional[int] = None
        self.below: Optional[int] = None
        kept: List[Tuple[Cell, int]] = []
        for cell, degree in enumerate_cells(R, O, L, n):
            if degree > window.max_deg:
                self.above = window.max_deg
            elif degree < window.min_deg:
                self.below = window.min_deg
            else:
                kept.append((cell, degree))
        self.cells = [c for c, _ in kept]
        self.degrees = [d for _, d in kept]
        self.index = {c: k for k, c in enumerate(self.cells)}

    # ---- 层的几何 ----

    def _partition(self, chain: Chain, level: int) -> Partition:
        return chain[level] if level < len(chain) else _one(self.n)

    def _inputs(self, chain: Chain, level: int) -> List[List[int]]:
        """第 level 层每个块的输入（下一层块序号；0 层为元素）"""
        lower = chain[level - 1] if level >= 1 else None
        return _children(self._partition(chain, level), lower, self.n)

    def _component(self, chain: Chain, level: int, arity: int) -> Component:
        s = len(chain) - 1
        if level == 0:
            return self.L.component(arity)
        if level == s + 1:
            return self.R.component(arity)
        return self.O.component(arity)

    # ---- 微分 ----

    def _add(self, out: Vector, cell: Cell, coeff: Any) -> None:
        row = self.index.get(cell)
        if row is None:
            return
        value = out.get(row, self.F.zero) + coeff
        if self.F.is_zero(value):
            out.pop(row, None)
        else:
            out[row] = value

    def _expand(self, chain: Chain, decos: List[Any], coeff: Any, out: Vector) -> None:
        """decos 中的每一层是若干向量（或单个指标），展开成胞腔"""
        choices = []
        for level in decos:
            factors = []
            for item in level:
                factors.append(list(item.items()) if isinstance(item, dict) else [(item, self.F.one)])
            choices.append(list(product(*factors)))
        for combo in product(*choices):
            c = coeff
            new_decos = []
            for level in combo:
                new_decos.append(tuple(x for x, _ in level))
                for _, v in level:
                    c = c * v
            self._add(out, (chain, tuple(new_decos)), c)

    def face(self, cell: Cell, j: int, out: Vector, coeff: Any) -> None:
        """面 d_j：去掉 P_j，第 j+1 层复合到第 j 层上"""
        chain, decos = cell
        s = len(chain) - 1
        F = self.F
        upper_level, lower_level = j + 1, j
        upper_inputs = self._inputs(chain, upper_level)
        lower_inputs = self._inputs(chain, lower_level)

        if lower_level == 0:
            composer, target_of = self.L.act, self.L.component
        elif upper_level == s + 1:
            composer, target_of = self.R.act, self.R.component
        else:
            composer, target_of = self.O.gamma, self.O.component

        composites: List[Vector] = []
        flat_positions: List[int] = []
        degrees_upper = [self._component(chain, upper_level, len(g)).degrees[x]
                         for g, x in zip(upper_inputs, decos[upper_level])]
        degrees_lower = [self._component(chain, lower_level, len(g)).degrees[x]
                         for g, x in zip(lower_inputs, decos[lower_level])]
        new_position_upper = [0] * len(upper_inputs)
        new_position_lower = [0] * len(lower_inputs)
        pos = 0
        for a, children in enumerate(upper_inputs):
            new_position_upper[a] = pos
            pos += 1
            for b in children:
                new_position_lower[b] = pos
                pos += 1
            top_arity = len(children)
            inputs = [(len(lower_inputs[b]), {decos[lower_level][b]: F.one}) for b in children]
            arity, vec = composer(top_arity, {decos[upper_level][a]: F.one}, inputs)
            if not vec:
                return
            # γ 的输入按子块依次排列，改名为按最小元排序
            order = [x for b in children for x in lower_inputs[b]]
            ranked = sorted(order)
            sigma = tuple(ranked.index(x) for x in order)
            if sigma != perms.identity(len(sigma)):
                vec = target_of(arity).action(sigma).apply(vec)
                if not vec:
                    return
            composites.append(vec)
        sign = perms.sort_sign(degrees_upper + degrees_lower, new_position_upper + new_position_lower)
        total = coeff * F.sign(j) * _sign(F, sign)
        new_chain = chain[:j] + chain[j + 1:]
        new_decos: List[Any] = list(decos[:j]) + [composites] + list(decos[j + 2:])
        self._expand(new_chain, new_decos, total, out)

    def internal(self, cell: Cell, out: Vector, coeff: Any) -> None:
        """内部微分（Leibniz，按 [R][第 s 层]…[L] 的顺序计符号），整体乘 (−1)^s"""
        chain, decos = cell
        s = len(chain) - 1
        F = self.F
        running = 0
        for level in range(len(decos) - 1, -1, -1):
            inputs = self._inputs(chain, level)
            for b, x in enumerate(decos[level]):
                comp = self._component(chain, level, len(inputs[b]))
                column = comp.differential.column(x)
                sign = F.sign(s + running)
                for r, v in column.items():
                    new_level = list(decos[level])
                    new_level[b] = r
                    new_decos = decos[:level] + (tuple(new_level),) + decos[level + 1:]
                    self._add(out, (chain, new_decos), coeff * sign * v)
                running += comp.degrees[x]

    def differential(self) -> Matrix:
        F = self.F
        data: Dict[int, Dict[int, Any]] = {}
        for col, cell in enumerate(self.cells):
            out: Vector = {}
            s = len(cell[0]) - 1
            if s >= 1:
                for j in range(s + 1):
                    self.face(cell, j, out, F.one)
            self.internal(cell, out, F.one)
            for row, v in out.items():
                data.setdefault(row, {})[col] = v
        return Matrix(F, len(self.cells), len(self.cells), data)

    # ---- Σ_n 作用 ----

    def act(self, cell: Cell, sigma: perms.Perm) -> Tuple[Chain, List[List[Vector]], int]:
        """
        置换作用：各层分拆取像，块内输入的诱导置换作用在装饰上，
        同层因子按新的块序重排并计 Koszul 符号

        Returns:
            (新链, 各层装饰向量, 符号)
        """
        chain, decos = cell
        s = len(chain) - 1
        new_chain = tuple(tuple(sorted(tuple(sorted(sigma[x] for x in b)) for b in P)) for P in chain)
        sign = 1
        new_decos: List[List[Vector]] = []
        for level in range(s + 2):
            old_P = self._partition(chain, level)
            new_P = self._partition(new_chain, level)
            new_index = {block: k for k, block in enumerate(new_P)}
            old_inputs = self._inputs(chain, level)
            if level >= 1:
                lower_old = chain[level - 1]
                lower_new_index = {block: k for k, block in enumerate(new_chain[level - 1])}
                child_map = [lower_new_index[tuple(sorted(sigma[x] for x in b))] for b in lower_old]
            else:
                child_map = list(sigma)
            vectors: List[Optional[Vector]] = [None] * len(old_P)
            moved = []
            degrees = []
            for a, block in enumerate(old_P):
                image = tuple(sorted(sigma[x] for x in block))
                target = new_index[image]
                moved.append(target)
                images = [child_map[c] for c in old_inputs[a]]
                ranked = sorted(images)
                tau = tuple(ranked.index(v) for v in images)
                comp = self._component(chain, level, len(old_inputs[a]))
                x = decos[level][a]
                degrees.append(comp.degrees[x])
                vectors[target] = comp.action(tau).column(x)
            sign *= perms.sort_sign(degrees, moved)
            new_decos.append(vectors)  # type: ignore[arg-type]
        return new_chain, new_decos, sign

    def generator(self, k: int) -> Matrix:
        F = self.F
        sigma = perms.adjacent(self.n, k)
        data: Dict[int, Dict[int, Any]] = {}
        for col, cell in enumerate(self.cells):
            new_chain, vectors, sign = self.act(cell, sigma)
            out: Vector = {}
            self._expand(new_chain, vectors, _sign(F, sign), out)
            for row, v in out.items():
                data.setdefault(row, {})[col] = v
        return Matrix(F, len(self.cells), len(self.cells), data)

    def build(self) -> Component:
        generators = [self.generator(k) for k in range(self.n - 1)]
        return Component(self.F, self.n, self.cells, self.degrees, self.differential(), generators)


def bar_complex(R: RightModule, O: Operad, L: LeftModule, window: Optional[Window] = None,
                arities: Optional[Sequence[int]] = None, check: bool = True) -> BarComplex:
    """
    两侧 bar 复形（正规化）

    Args:
        R: 右 O-模
        O: 约化算子
        L: 左 O-模（截断正则模）
        window: 计算窗口，缺省取 O 的窗口
        arities: 只构造这些元数
        check: 是否校验 d² = 0 与作用公理

    Raises:
        WindowOverflowError: 超出成本上限（附预估胞腔数）
        AxiomViolationError: d² ≠ 0 或作用不是同态
    """
    if not O.reduced:
        raise InputValidationError("bar complex needs a reduced operad", field="operad")
    if R.field != O.field or L.field != O.field:
        raise FieldMismatchError("bar complex inputs over different fields")
    window = window or O.window
    guards = get_settings().guards
    if window.max_arity > guards.max_arity:
        raise WindowOverflowError(f"maxArity {window.max_arity} exceeds {guards.max_arity}", field="maxArity")
    if window.degree_span > guards.max_degree_span:
        raise WindowOverflowError(f"degree span {window.degree_span} exceeds {guards.max_degree_span}",
                                  field="minDeg/maxDeg")
    targets = list(arities) if arities is not None else list(range(1, window.max_arity + 1))
    for n in targets:
        predicted = count_cells(R, O, L, n)
        if predicted > guards.max_cells:
            raise WindowOverflowError(f"bar complex at arity {n} has about {predicted} cells",
                                      field="maxArity", predicted=predicted)

    def build(n: int) -> Tuple[Component, Tuple[Optional[int], Optional[int]]]:
        builder = _BarBuilder(R, O, L, n, window)
        comp = builder.build()
        if check:
            comp.check()
        logger.debug("bar 复形", arity=n, cells=comp.dim, degrees=comp.dims_by_degree())
        return comp, (builder.above, builder.below)

    built = run_per_arity(targets, build)
    name = f"Bar({R.name},{O.name},{L.name})"
    return BarComplex(name, O.field, window, {n: c for n, (c, _) in built.items() if c.dim},
                      {n: t for n, (_, t) in built.items()})


# ---------------------------------------------------------------------------
# 同调与 Σ_n 的诱导作用
# ---------------------------------------------------------------------------

class _ArityHomology:
    """单个元数的同调：可选的带作用分量，以及扁平指标与度数块之间的换算"""

    def __init__(self, comp: Component, result: HomologyResult, homology_component: Optional[Component]):
        self.comp = comp
        self.result = result
        self.component = homology_component
        self.blocks = {d: comp.indices_in_degree(d) for d in comp.dims_by_degree()}
        self.position = {flat: (d, k) for d, idx in self.blocks.items() for k, flat in enumerate(idx)}
        self.offsets: Dict[int, int] = {}
        total = 0
        for d, h in sorted(result.dims.items()):
            self.offsets[d] = total
            total += h
        self.dim = total

    def concentrated_degree(self) -> Optional[int]:
        """同调集中的唯一度数；全为零时返回 None"""
        nonzero = [d for d, h in self.result.dims.items() if h]
        return nonzero[0] if len(nonzero) == 1 else None

    def project(self, flat: int) -> Vector:
        """胞腔（扁平指标）在同调扁平基上的投影"""
        d, k = self.position[flat]
        proj = self.result.projection.get(d)
        if proj is None:
            return {}
        return {self.offsets[d] + r: v for r, v in proj.column(k).items()}


def arity_homology(comp: Component, truncated: Tuple[Optional[int], Optional[int]] = (None, None),
                   with_action: bool = True) -> _ArityHomology:
    """
    单个元数的同调，需要时连同 Σ_n 的诱导作用

    Returns:
        _ArityHomology；with_action 时 component 的标签为 ("h", 度数, k)
    """
    C = comp.complex()
    above, below = truncated
    C = ChainComplex(C.space, C.differentials, above, below, check=False)
    result = homology(C, with_basis=with_action)
    if not with_action:
        return _ArityHomology(comp, result, None)
    F = comp.field
    blocks = {d: comp.indices_in_degree(d) for d in comp.dims_by_degree()}
    labels: List[Any] = []
    degrees: List[int] = []
    for d, h in sorted(result.dims.items()):
        labels.extend(("h", d, k) for k in range(h))
        degrees.extend([d] * h)
    generators = []
    for g in comp.generators:
        data: Dict[int, Dict[int, Any]] = {}
        offset = 0
        for d, h in sorted(result.dims.items()):
            if h:
                idx = blocks[d]
                block = result.projection[d] @ (g.select_columns(idx).select_rows(idx) @ result.representatives[d])
                for r, c, v in block.items():
                    data.setdefault(offset + r, {})[offset + c] = v
            offset += h
        generators.append(Matrix(F, len(labels), len(labels), data))
    hom = Component(F, comp.arity, labels, degrees, generators=generators)
    hom.check()
    return _ArityHomology(comp, result, hom)


def bar_homology(bar: BarComplex, with_action: bool = True) -> Dict[int, _ArityHomology]:
    """逐元数计算 bar 复形的同调"""
    return run_per_arity(
        list(bar.arities),
        lambda n: arity_homology(bar.component(n), bar.truncated.get(n, (None, None)), with_action),
    )


def relative_compose_homology(R: RightModule, O: Operad, L: LeftModule,
                              window: Optional[Window] = None) -> SymSeqObject:
    """
    R ∘_O L 的导出复合：Bar(R, O, L) 的逐元数同调，带诱导的 Σ_n 作用

    Raises:
        WindowOverflowError: 超出成本上限
    """
    bar = bar_complex(R, O, L, window)
    homologies = bar_homology(bar, with_action=True)
    components = {n: h.component for n, h in homologies.items() if h.component is not None and h.component.dim}
    logger.info("相对复合同调", name=bar.name, dims={n: h.result.nonzero_dims() for n, h in homologies.items()})
    return SymSeqObject(O.field, bar.window, components)


class EulerCheck(BaseModel):
    """链与同调的 Euler 示性数比较（只对未截断的元数有意义）"""
    arity: int
    chains: int
    homology: int
    truncated: bool

    @property
    def consistent(self) -> bool:
        return self.truncated or self.chains == self.homology


def euler_check(bar: BarComplex, homologies: Dict[int, _ArityHomology]) -> List[EulerCheck]:
    out = []
    for n, h in sorted(homologies.items()):
        chi_h = sum((-1) ** (d % 2) * dim for d, dim in h.result.dims.items())
        truncated = bar.truncated.get(n, (None, None)) != (None, None) or bool(h.result.unreliable)
        out.append(EulerCheck(arity=n, chains=bar.euler_characteristic(n), homology=chi_h, truncated=truncated))
    return out


def count_partition_chains(n: int) -> Dict[int, int]:
    """
    Π_n 中严格链 0̂ = P_0 < … < P_s = 1̂ 的条数，按长度 s 计

    只依赖块数：c(k, s) = Σ_{j<k} S(k, j) c(j, s−1)，S 为第二类 Stirling 数。
    用作 Bar(triv, Comm, triv) 胞腔数的独立校验。
    """
    from sympy.functions.combinatorial.numbers import stirling

    if n < 1:
        raise InputValidationError("arity must be >= 1", field="arity")
    table: Dict[Tuple[int, int], int] = {(1, 0): 1}
    for k in range(2, n + 1):
        for s in range(1, k):
            table[(k, s)] = sum(int(stirling(k, j)) * table.get((j, s - 1), 0) for j in range(1, k))
    return {s: table[(n, s)] for s in range(n) if table.get((n, s))}


# ---------------------------------------------------------------------------
# Koszul 对偶余算子
# ---------------------------------------------------------------------------

def cut_cell(cell: Cell, m: int, i: int, n: int) -> Optional[Tuple[Cell, Cell, int]]:
    """
    Bar(triv, O, triv) 的胞腔沿连续块 B = {i−1, …, i+n−2} 拆成 (外层, 内层)

    只有当某个 P_t 恰为 B 加若干单点时才有一项：内层取 P_0..P_t 在 B 上的限制，
    外层取 P_t/B..P_s；内层的 t 个悬挂越过外层装饰，符号为 (−1)^{t·|外层|}。
    外层装饰的度数由调用方给出（见 _outer_degree）。

    Returns:
        (外层胞腔, 内层胞腔, t)，无此项时为 None
    """
    chain, decos = cell
    N = m + n - 1
    start = i - 1
    block = tuple(range(start, start + n))
    target = tuple(sorted([block] + [(x,) for x in range(N) if not start <= x < start + n]))
    try:
        t = chain.index(target)
    except ValueError:
        return None

    def collapse(x: int) -> int:
        if x < start:
            return x
        if x < start + n:
            return start
        return x - (n - 1)

    inner_chain = tuple(
        tuple(tuple(x - start for x in b) for b in P if b[0] >= start and b[-1] < start + n)
        for P in chain[: t + 1]
    )
    inner_decos: List[Tuple[int, ...]] = [tuple(0 for _ in range(n))]
    for level in range(1, t + 1):
        inner_decos.append(tuple(
            x for b, x in zip(chain[level], decos[level]) if b[0] >= start and b[-1] < start + n
        ))
    inner_decos.append((0,))

    outer_chain = tuple(
        tuple(sorted({tuple(sorted({collapse(x) for x in b})) for b in P})) for P in chain[t:]
    )
    outer_decos = [tuple(0 for _ in range(m))] + [decos[level] for level in range(t + 1, len(chain))]
    outer_decos.append(decos[-1])
    return (outer_chain, tuple(outer_decos)), (inner_chain, tuple(inner_decos)), t


def _outer_degree(O: Operad, cell: Cell) -> int:
    """胞腔中 1..s 层装饰的度数之和"""
    chain, decos = cell
    total = 0
    for level in range(1, len(chain)):
        groups = _children(chain[level], chain[level - 1], 0)
        total += sum(O.component(len(g)).degrees[x] for g, x in zip(groups, decos[level]))
    return total


def _cocomposition(O: Operad, homologies: Dict[int, _ArityHomology], m: int, i: int, n: int) -> Matrix:
    """同调上的 Δ_i: H_{m+n−1} → H_m ⊗ H_n（行指标 a * dim H_n + b）"""
    F = O.field
    N = m + n - 1
    source, outer_h, inner_h = homologies[N], homologies[m], homologies[n]
    data: Dict[int, Dict[int, Any]] = {}
    col = 0
    for d, h in sorted(source.result.dims.items()):
        reps = source.result.representatives.get(d)
        idx = source.blocks.get(d, [])
        for k in range(h):
            acc: Dict[int, Any] = {}
            for pos, coeff in reps.column(k).items():
                cut = cut_cell(source.comp.labels[idx[pos]], m, i, n)
                if cut is None:
                    continue
                outer, inner, t = cut
                flat_outer = outer_h.comp.find(outer)
                flat_inner = inner_h.comp.find(inner)
                if flat_outer is None or flat_inner is None:
                    continue
                c = coeff * F.sign(t * _outer_degree(O, outer))
                for a, va in outer_h.project(flat_outer).items():
                    for b, vb in inner_h.project(flat_inner).items():
                        row = a * inner_h.dim + b
                        acc[row] = acc.get(row, F.zero) + c * va * vb
            for row, v in acc.items():
                if not F.is_zero(v):
                    data.setdefault(row, {})[col] = v
            col += 1
    return Matrix(F, outer_h.dim * inner_h.dim, source.dim, data)


class KoszulDualResult:
    """
    Koszul 对偶的计算结果

    Attributes:
        bar: Bar(triv, O, triv)
        homologies: 元数 -> 同调（可选带作用）
        concentrated: 元数 -> 同调集中的度数（不集中时为 None）
        cooperad: 诱导的余算子，只有全部元数集中时才给出
    """

    def __init__(self, operad: Operad, bar: BarComplex, homologies: Dict[int, _ArityHomology],
                 cooperad: Optional[Cooperad]):
        self.operad = operad
        self.bar = bar
        self.homologies = homologies
        self.cooperad = cooperad

    @property
    def dims(self) -> Dict[int, Dict[int, int]]:
        return {n: h.result.nonzero_dims() for n, h in sorted(self.homologies.items())}

    @property
    def concentrated(self) -> Dict[int, Optional[int]]:
        return {n: h.concentrated_degree() for n, h in sorted(self.homologies.items())}

    @property
    def sequence(self) -> Optional[SymSeqObject]:
        comps = {n: h.component for n, h in self.homologies.items() if h.component is not None and h.component.dim}
        if len(comps) != len([h for h in self.homologies.values() if h.dim]):
            return None
        return SymSeqObject(self.operad.field, self.bar.window, comps)


def koszul_dual(O: Operad, window: Optional[Window] = None, with_structure: bool = True) -> KoszulDualResult:
    """
    Koszul 对偶 K(O) = triv ∘_O triv

    Args:
        O: 约化算子
        window: 计算窗口
        with_structure: 是否计算 Σ_n 作用与余复合；只要维数时关掉可省去同调基

    Returns:
        KoszulDualResult；余复合只在每个元数的同调都集中于单一度数时给出
    """
    triv_r = trivial_right_module(O)
    triv_l = LeftModule(O, 1)
    bar = bar_complex(triv_r, O, triv_l, window)
    homologies = bar_homology(bar, with_action=with_structure)
    cooperad = None
    if with_structure:
        spread = {n: h.result.nonzero_dims() for n, h in homologies.items() if h.concentrated_degree() is None}
        if spread:
            logger.warning("同调不集中，不给出余算子结构", arities=sorted(spread))
        else:
            seq = SymSeqObject(O.field, bar.window, {n: h.component for n, h in homologies.items()})
            counit = ("h", 0, 0)

            def partial(m: int, i: int, n: int) -> Matrix:
                if m + n - 1 not in homologies or m not in homologies or n not in homologies:
                    return Matrix.zeros(O.field, seq.component(m).dim * seq.component(n).dim,
                                        seq.component(m + n - 1).dim)
                return _cocomposition(O, homologies, m, i, n)

            cooperad = Cooperad(f"K({O.name})", seq, counit, partial)
    logger.info("Koszul 对偶", operad=O.name, dims={n: h.result.nonzero_dims() for n, h in homologies.items()})
    return KoszulDualResult(O, bar, homologies, cooperad)


# ---------------------------------------------------------------------------
# 双重对偶
# ---------------------------------------------------------------------------

class DoubleDualArity(BaseModel):
    arity: int
    expected: Dict[int, int]
    actual: Dict[int, int]
    characters_match: bool

    @property
    def matches(self) -> bool:
        return self.expected == self.actual and self.characters_match


class DoubleDualReport(BaseModel):
    """O 与 (triv ∘_{K(O)^∨} triv)^∨ 的逐元数比较"""
    operad: str
    arities: List[DoubleDualArity] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(a.matches for a in self.arities)


def double_dual_check(O: Operad, window: Optional[Window] = None) -> DoubleDualReport:
    """
    双重对偶检查：K = K(O)，取线性对偶算子 K^∨，再算 Bar(triv, K^∨, triv) 的对偶的同调，
    与 O 比较维数与 Σ_n 特征标

    Raises:
        AxiomViolationError: K(O) 的同调不集中，无法诱导余算子
    """
    window = window or O.window
    K = koszul_dual(O, window)
    if K.cooperad is None:
        raise AxiomViolationError(f"Koszul dual of {O.name} is not concentrated; no cooperad structure")
    dual = dual_operad(K.cooperad)
    bar = bar_complex(trivial_right_module(dual), dual, LeftModule(dual, 1), window)
    report = DoubleDualReport(operad=O.name)
    for n in range(1, window.max_arity + 1):
        expected = O.component(n)
        flipped = dual_component(bar.component(n))
        above, below = bar.truncated.get(n, (None, None))
        h = arity_homology(flipped, (-below if below is not None else None, -above if above is not None else None))
        got = h.component
        characters_match = (
            got is not None and got.dim == expected.dim
            and (got.dim == 0 or got.character_table() == expected.character_table())
        )
        report.arities.append(DoubleDualArity(
            arity=n,
            expected={d: c for d, c in expected.dims_by_degree().items() if c},
            actual=h.result.nonzero_dims(),
            characters_match=bool(characters_match),
        ))
    logger.info("双重对偶检查", operad=O.name, valid=report.valid)
    return report


# ---------------------------------------------------------------------------
# 截断塔
# ---------------------------------------------------------------------------

class NormRecord(BaseModel):
    """纤维中 Σ_{m+1} 在 O_{m+1} ⊗ K_j^{⊗(m+1)} 上的范数映射"""
    stage: int
    fiber_arity: int
    block_arity: int
    arity: int
    coinvariant_dim: int
    invariant_dim: int
    is_iso: bool


class LesCheck(BaseModel):
    """相邻两层与纤维之间长正合列的一致性"""
    stage: int
    arity: int
    euler_consistent: bool
    bounds_consistent: bool
    reliable: bool

    @property
    def consistent(self) -> bool:
        return not self.reliable or (self.euler_consistent and self.bounds_consistent)


class TowerStage(BaseModel):
    stage: int
    dims: Dict[int, Dict[int, int]]
    concentrated: Dict[int, Optional[int]]
    fiber_dims: Dict[int, Dict[int, int]] = Field(default_factory=dict)


class TowerReport(BaseModel):
    operad: str
    field: str
    stages: List[TowerStage] = Field(default_factory=list)
    les: List[LesCheck] = Field(default_factory=list)
    norms: List[NormRecord] = Field(default_factory=list)

    @property
    def les_consistent(self) -> bool:
        return all(c.consistent for c in self.les)

    def concentration_report(self) -> Dict[int, Dict[int, bool]]:
        """第 m 层：元数 k > 1 的同调是否只落在度数 1−m"""
        out: Dict[int, Dict[int, bool]] = {}
        for stage in self.stages:
            out[stage.stage] = {
                k: all(d == 1 - stage.stage for d, h in dims.items() if h)
                for k, dims in stage.dims.items() if k > 1
            }
        return out


def _euler(dims: Dict[int, int]) -> int:
    return sum((-1) ** (d % 2) * h for d, h in dims.items())


def _les_bounds(upper: Dict[int, int], lower: Dict[int, int], fiber: Dict[int, int]) -> bool:
    """… → H_d(纤维) → H_d(m+1) → H_d(m) → H_{d−1}(纤维) → … 的维数不等式"""
    degrees = set(upper) | set(lower) | set(fiber) | {d + 1 for d in fiber}
    for d in degrees:
        if upper.get(d, 0) > fiber.get(d, 0) + lower.get(d, 0):
            return False
        if lower.get(d, 0) > upper.get(d, 0) + fiber.get(d - 1, 0):
            return False
        if fiber.get(d, 0) > upper.get(d, 0) + lower.get(d + 1, 0):
            return False
    return True


def truncation_tower(O: Operad, window: Optional[Window] = None, max_stage: int = 2) -> TowerReport:
    """
    截断塔 τ_m(O) ∘_O triv，m = 1..max_stage

    每层给出同调维数与集中度数；相邻两层与纤维 Bar(O_{m+1}, O, triv) 之间检查
    长正合列的 Euler 示性数与维数不等式；纤维处记录 Σ_{m+1} 的范数映射是否可逆。
    """
    window = window or O.window
    if max_stage < 1:
        raise InputValidationError("maxStage must be >= 1", field="maxStage")
    triv_l = LeftModule(O, 1)
    report = TowerReport(operad=O.name, field=O.field.label)
    stage_dims: Dict[int, Dict[int, Dict[int, int]]] = {}
    reliable: Dict[int, Dict[int, bool]] = {}
    first_bar: Optional[BarComplex] = None
    for m in range(1, max_stage + 1):
        bar = bar_complex(truncated_right_module(O, m), O, triv_l, window)
        if m == 1:
            first_bar = bar
        homologies = bar_homology(bar, with_action=False)
        dims = {n: homologies[n].result.nonzero_dims() if n in homologies else {}
                for n in range(1, window.max_arity + 1)}
        stage_dims[m] = dims
        reliable[m] = {n: not (n in homologies and homologies[n].result.unreliable) for n in dims}
        report.stages.append(TowerStage(
            stage=m, dims=dims,
            concentrated={n: (next(iter(d)) if len(d) == 1 else None) for n, d in dims.items()},
        ))
        logger.info("截断塔", operad=O.name, stage=m, dims=dims)

    for m in range(1, max_stage):
        if m + 1 > window.max_arity or not O.dim(m + 1):
            continue
        fiber_bar = bar_complex(fiber_module(O, m + 1), O, triv_l, window)
        fiber = bar_homology(fiber_bar, with_action=False)
        fiber_dims = {n: fiber[n].result.nonzero_dims() if n in fiber else {}
                      for n in range(1, window.max_arity + 1)}
        report.stages[m - 1].fiber_dims = fiber_dims
        for n in range(1, window.max_arity + 1):
            upper, lower, fib = stage_dims[m + 1][n], stage_dims[m][n], fiber_dims[n]
            ok = reliable[m][n] and reliable[m + 1][n] and not (n in fiber and fiber[n].result.unreliable)
            report.les.append(LesCheck(
                stage=m, arity=n,
                euler_consistent=_euler(upper) == _euler(lower) + _euler(fib),
                bounds_consistent=_les_bounds(upper, lower, fib),
                reliable=ok,
            ))
        report.norms.extend(_fiber_norms(O, first_bar, m, window))
    if not report.les_consistent:
        logger.warning("截断塔长正合列不一致", operad=O.name)
    return report


def _fiber_norms(O: Operad, first_bar: BarComplex, m: int, window: Window) -> List[NormRecord]:
    """Σ_{m+1} 在 O_{m+1} ⊗ K_j^{⊗(m+1)} 上的范数映射，(m+1)·j 不超过窗口"""
    out = []
    top = O.component(m + 1)
    for j in range(1, window.max_arity // (m + 1) + 1):
        k_j = arity_homology(first_bar.component(j), first_bar.truncated.get(j, (None, None))).component
        if k_j is None or not k_j.dim:
            continue
        rep = block_permutation_representation(O.field, top, k_j, m + 1)
        result = norm_map(rep)
        out.append(NormRecord(
            stage=m, fiber_arity=m + 1, block_arity=j, arity=(m + 1) * j,
            coinvariant_dim=result.coinvariant_dim, invariant_dim=result.invariant_dim, is_iso=result.is_iso,
        ))
    return out
