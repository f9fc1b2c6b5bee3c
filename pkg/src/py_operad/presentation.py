# -*- coding: utf-8 -*-
"""
由生成元与关系表现的算子

自由算子的基是叶子标号的有根树：对称/反对称生成元的子树按最小叶子排序
（反对称时带上排序置换的符号），无对称性生成元的子树保持顺序。
理想由恰好含一个“关系顶点”的树张成；关系顶点视为无对称性的生成元，
因此 Σ 封闭是自动的。商空间取标准单项式（非主元列）为基。
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations as _orderings, product
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from . import permutations as perms
from .config import Window, get_settings
from .exceptions import AxiomViolationError, InputValidationError, WindowOverflowError
from .field import FieldSpec, Matrix, quotient
from .logging import get_logger
from .operad import Operad
from .symseq import Component, SymSeqObject

logger = get_logger(__name__)

Tree = Union[int, Tuple[str, tuple]]
NestedTree = Union[int, List[Any]]

RELATION_PREFIX = "@R"


class Generator(BaseModel):
    """生成元：元数 ≥ 2，度数 0，对称性 symmetric / antisymmetric / none"""
    label: str
    arity: int
    degree: int = 0
    symmetry: Literal["symmetric", "antisymmetric", "none"] = "none"

    @field_validator("label")
    @classmethod
    def validate_label(cls, v):
        if not v or v.startswith(RELATION_PREFIX) or any(ch in v for ch in "(),"):
            raise ValueError(f"invalid generator label {v!r}")
        return v

    @field_validator("arity")
    @classmethod
    def validate_arity(cls, v):
        if v < 2:
            raise ValueError("generators must have arity >= 2")
        return v

    @field_validator("degree")
    @classmethod
    def validate_degree(cls, v):
        if v != 0:
            raise ValueError("only degree-0 generators are supported")
        return v


class RelationTerm(BaseModel):
    """关系中的一项：嵌套列表表示的树（叶子为 1 起始整数），前序顶点标签，系数"""
    tree: Any
    vertex_labels: List[str] = Field(alias="vertexLabels")
    coeff: str = "1"

    model_config = {"populate_by_name": True}

    @field_validator("coeff", mode="before")
    @classmethod
    def validate_coeff(cls, v):
        text = str(v).strip()
        try:
            Fraction(text)
        except ValueError:
            raise ValueError(f"coefficient {v!r} is not a rational literal") from None
        return text


class OperadPresentation(BaseModel):
    """算子表现：域、生成元、关系（每个关系是若干项的线性组合）"""
    field: Any = Field(default_factory=FieldSpec.rationals)
    generators: List[Generator]
    relations: List[List[RelationTerm]] = Field(default_factory=list)

    @field_validator("field", mode="before")
    @classmethod
    def validate_field(cls, v):
        return FieldSpec.parse(v) if not isinstance(v, FieldSpec) else v

    @model_validator(mode="after")
    def validate_labels(self):
        labels = [g.label for g in self.generators]
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be unique")
        return self

    @property
    def field_spec(self) -> FieldSpec:
        return self.field

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "field": self.field_spec.to_json(),
            "generators": [g.model_dump() for g in self.generators],
            "relations": [[t.model_dump(by_alias=True) for t in rel] for rel in self.relations],
        }


# ---------------------------------------------------------------------------
# 内置表现
# ---------------------------------------------------------------------------

def _term(tree: NestedTree, labels: Sequence[str], coeff: str = "1") -> RelationTerm:
    return RelationTerm(tree=tree, vertexLabels=list(labels), coeff=coeff)


def lie_presentation(field: FieldSpec) -> OperadPresentation:
    """反对称二元括号 b 模 Jacobi 关系"""
    return OperadPresentation(
        field=field,
        generators=[Generator(label="b", arity=2, symmetry="antisymmetric")],
        relations=[[
            _term([[1, 2], 3], ["b", "b"]),
            _term([[2, 3], 1], ["b", "b"]),
            _term([[3, 1], 2], ["b", "b"]),
        ]],
    )


def ass_presentation(field: FieldSpec) -> OperadPresentation:
    """无对称性的二元乘法模结合律"""
    return OperadPresentation(
        field=field,
        generators=[Generator(label="m", arity=2, symmetry="none")],
        relations=[[_term([[1, 2], 3], ["m", "m"]), _term([1, [2, 3]], ["m", "m"], "-1")]],
    )


def comm_presentation(field: FieldSpec) -> OperadPresentation:
    """对称二元乘法模结合律"""
    return OperadPresentation(
        field=field,
        generators=[Generator(label="m", arity=2, symmetry="symmetric")],
        relations=[[_term([[1, 2], 3], ["m", "m"]), _term([1, [2, 3]], ["m", "m"], "-1")]],
    )


PRESENTATIONS = {"lie": lie_presentation, "ass": ass_presentation, "comm": comm_presentation}


# ---------------------------------------------------------------------------
# 树
# ---------------------------------------------------------------------------

def parse_tree(nested: NestedTree, labels: Sequence[str]) -> Tree:
    """嵌套列表 + 前序顶点标签 -> 内部树（叶子改为 0 起始）"""
    queue = list(labels)

    def build(node: NestedTree) -> Tree:
        if isinstance(node, bool):
            raise InputValidationError("tree leaves must be integers", field="tree")
        if isinstance(node, int):
            if node < 1:
                raise InputValidationError("tree leaves are numbered from 1", field="tree")
            return node - 1
        if not isinstance(node, list) or not node:
            raise InputValidationError(f"malformed tree node {node!r}", field="tree")
        if not queue:
            raise InputValidationError("fewer vertexLabels than vertices", field="vertexLabels")
        label = queue.pop(0)
        return (label, tuple(build(child) for child in node))

    tree = build(nested)
    if queue:
        raise InputValidationError("more vertexLabels than vertices", field="vertexLabels")
    return tree


def leaves(tree: Tree) -> List[int]:
    if isinstance(tree, int):
        return [tree]
    out: List[int] = []
    for child in tree[1]:
        out.extend(leaves(child))
    return out


def min_leaf(tree: Tree) -> int:
    if isinstance(tree, int):
        return tree
    return min(min_leaf(child) for child in tree[1])


def tree_to_string(tree: Tree) -> str:
    if isinstance(tree, int):
        return str(tree + 1)
    return f"{tree[0]}({','.join(tree_to_string(c) for c in tree[1])})"


def relabel(tree: Tree, mapping: Sequence[int]) -> Tree:
    if isinstance(tree, int):
        return mapping[tree]
    return (tree[0], tuple(relabel(c, mapping) for c in tree[1]))


def substitute(tree: Tree, position: int, inner: Tree, inner_arity: int) -> Tree:
    """把叶子 position 换成 inner（叶子平移 position），其余大于 position 的叶子平移 inner_arity−1"""
    if isinstance(tree, int):
        if tree == position:
            return relabel(inner, [position + k for k in range(inner_arity)])
        return tree if tree < position else tree + inner_arity - 1
    return (tree[0], tuple(substitute(c, position, inner, inner_arity) for c in tree[1]))


def graft(tree: Tree, children: Sequence[Tree]) -> Tree:
    """把关系树的叶子 l 换成 children[l]"""
    if isinstance(tree, int):
        return children[tree]
    return (tree[0], tuple(graft(c, children) for c in tree[1]))


class FreeOperadBasis:
    """
    自由算子（生成元与可选的关系顶点）的树枚举与规范化

    Args:
        generators: 生成元
        relations: 关系顶点：标签 -> (元数, [(系数, 树), ...])
    """

    def __init__(self, field: FieldSpec, generators: Sequence[Generator],
                 relations: Optional[Dict[str, Tuple[int, List[Tuple[Any, Tree]]]]] = None):
        self.field = field
        self.generators = list(generators)
        self.symmetry = {g.label: g.symmetry for g in generators}
        self.arity = {g.label: g.arity for g in generators}
        self.relations = relations or {}
        for label, (k, _) in self.relations.items():
            self.symmetry[label] = "none"
            self.arity[label] = k
        self._trees = lru_cache(maxsize=None)(self._enumerate)

    def canonical(self, tree: Tree) -> Tuple[int, Tree]:
        """规范形与符号；未知生成元或元数不符时报错"""
        if isinstance(tree, int):
            return 1, tree
        label, children = tree
        if label not in self.symmetry:
            raise InputValidationError(f"unknown generator {label!r}", field="vertexLabels")
        if len(children) != self.arity[label]:
            raise InputValidationError(
                f"vertex {label!r} has {len(children)} children, expected {self.arity[label]}", field="tree"
            )
        sign = 1
        canon = []
        for child in children:
            s, c = self.canonical(child)
            sign *= s
            canon.append(c)
        symmetry = self.symmetry[label]
        if symmetry != "none":
            order = sorted(range(len(canon)), key=lambda k: min_leaf(canon[k]))
            if symmetry == "antisymmetric":
                sign *= perms.sign(tuple(order))
            canon = [canon[k] for k in order]
        return sign, (label, tuple(canon))

    def trees(self, leaf_set: Tuple[int, ...], with_relation: bool = False) -> List[Tree]:
        return self._trees(leaf_set, with_relation)

    def _enumerate(self, leaf_set: Tuple[int, ...], with_relation: bool) -> List[Tree]:
        size = len(leaf_set)
        out: List[Tree] = []
        if size == 1 and not with_relation:
            return [leaf_set[0]]
        for label, sym in self.symmetry.items():
            k = self.arity[label]
            is_relation = label in self.relations
            if k > size or (is_relation and not with_relation):
                continue
            for pattern in perms.set_partitions(size):
                if len(pattern) != k:
                    continue
                blocks = [tuple(leaf_set[x] for x in b) for b in pattern]
                orders = [blocks] if sym != "none" else [list(o) for o in _orderings(blocks)]
                for ordered in orders:
                    if is_relation or not with_relation:
                        choices = [self.trees(b, False) for b in ordered]
                        for children in product(*choices):
                            out.append((label, tuple(children)))
                    else:
                        for j in range(k):
                            choices = [self.trees(b, j == idx) for idx, b in enumerate(ordered)]
                            for children in product(*choices):
                                out.append((label, tuple(children)))
        return out

    def expand(self, tree: Tree) -> Dict[Tree, Any]:
        """展开关系顶点，得到普通树的线性组合（规范形）"""
        F = self.field
        if isinstance(tree, int):
            return {tree: F.one}
        label, children = tree
        if label in self.relations:
            _, terms = self.relations[label]
            out: Dict[Tree, Any] = {}
            for coeff, rel_tree in terms:
                sign, canon = self.canonical(graft(rel_tree, children))
                out[canon] = out.get(canon, F.zero) + F.sign(0 if sign > 0 else 1) * coeff
            return {t: v for t, v in out.items() if not F.is_zero(v)}
        expansions = [self.expand(c) for c in children]
        out = {}
        for combo in product(*(e.items() for e in expansions)):
            coeff = F.one
            for _, v in combo:
                coeff = coeff * v
            sign, canon = self.canonical((label, tuple(t for t, _ in combo)))
            out[canon] = out.get(canon, F.zero) + F.sign(0 if sign > 0 else 1) * coeff
        return {t: v for t, v in out.items() if not F.is_zero(v)}


def _relation_data(P: OperadPresentation, F: FieldSpec) -> Dict[str, Tuple[int, List[Tuple[Any, Tree]]]]:
    """校验关系：各项元数一致，叶子恰为 1..k"""
    out = {}
    for r, relation in enumerate(P.relations):
        if not relation:
            raise AxiomViolationError(f"relation {r} is empty")
        terms = []
        arity = None
        for term in relation:
            tree = parse_tree(term.tree, term.vertex_labels)
            found = sorted(leaves(tree))
            if found != list(range(len(found))):
                raise AxiomViolationError(f"relation {r}: leaves must be exactly 1..k, got {[x + 1 for x in found]}")
            if arity is None:
                arity = len(found)
            elif arity != len(found):
                raise AxiomViolationError(f"relation {r}: terms of different arity")
            terms.append((F.element(term.coeff), tree))
        out[f"{RELATION_PREFIX}{r}"] = (arity, terms)
    return out


class PresentedOperad(Operad):
    """
    表现算子：记录自由基、商投影与保留的标准单项式，便于追踪
    """

    def __init__(self, name, underlying, unit, partial, free_bases, projections, kept):
        super().__init__(name, underlying, unit, partial, reduced=True)
        self.free_bases: Dict[int, List[Tree]] = free_bases
        self.projections: Dict[int, Matrix] = projections
        self.kept: Dict[int, Tuple[int, ...]] = kept


def presented_operad(P: OperadPresentation, window: Window, name: str = "presented",
                     max_arity_guard: Optional[int] = None) -> PresentedOperad:
    """
    由表现构造算子

    Raises:
        WindowOverflowError: 窗口最大元数超过上限
        AxiomViolationError: 关系不一致
    """
    guard = max_arity_guard or get_settings().guards.presented_max_arity
    if window.max_arity > guard:
        raise WindowOverflowError(f"presented operads need maxArity <= {guard}", field="maxArity")
    F = P.field_spec
    relations = _relation_data(P, F)
    free = FreeOperadBasis(F, P.generators)
    ideal = FreeOperadBasis(F, P.generators, relations)
    for label, (_, terms) in relations.items():
        for _, tree in terms:
            free.canonical(tree)

    free_bases: Dict[int, List[Tree]] = {}
    projections: Dict[int, Matrix] = {}
    kept: Dict[int, Tuple[int, ...]] = {}
    components: Dict[int, Component] = {}
    positions: Dict[int, Dict[Tree, int]] = {}
    for n in range(1, window.max_arity + 1):
        basis = free.trees(tuple(range(n)))
        free_bases[n] = basis
        index = {t: k for k, t in enumerate(basis)}
        positions[n] = index
        columns = []
        for tree in ideal.trees(tuple(range(n)), True) if n > 1 else []:
            vec = {index[t]: v for t, v in ideal.expand(tree).items()}
            if vec:
                columns.append(vec)
        if columns:
            q = quotient(Matrix.from_columns(F, len(basis), columns))
        else:
            q = quotient(Matrix.zeros(F, len(basis), 0))
        projections[n] = q.projection
        kept[n] = q.complement_indices
        logger.debug("表现算子分量", name=name, arity=n, free=len(basis), quotient=q.dim)

    def project(n: int, tree: Tree) -> Dict[int, Any]:
        sign, canon = free.canonical(tree)
        col = projections[n].column(positions[n][canon])
        return {r: v if sign > 0 else -v for r, v in col.items()}

    for n in range(1, window.max_arity + 1):
        trees = [free_bases[n][k] for k in kept[n]]
        generators = []
        for s in range(n - 1):
            sigma = perms.adjacent(n, s)
            generators.append(Matrix.from_columns(F, len(trees), [project(n, relabel(t, sigma)) for t in trees]))
        components[n] = Component(F, n, [tree_to_string(t) for t in trees], [0] * len(trees), generators=generators)
    underlying = SymSeqObject(F, window, components)

    def partial(m: int, i: int, n: int) -> Matrix:
        outer = [free_bases[m][k] for k in kept[m]]
        inner = [free_bases[n][k] for k in kept[n]]
        target = m + n - 1
        columns = [project(target, substitute(a, i - 1, b, n)) for a in outer for b in inner]
        return Matrix.from_columns(F, len(kept[target]), columns)

    unit = tree_to_string(0)
    if underlying.component(1).labels != (unit,):
        raise AxiomViolationError("arity-1 component of a presented operad must be the unit")
    operad = PresentedOperad(name, underlying, unit, partial, free_bases, projections, kept)
    logger.info("表现算子构造完成", name=name, dims=underlying.total_dims())
    return operad
