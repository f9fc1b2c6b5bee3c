# -*- coding: utf-8 -*-
"""
按度数截断的分次 Hopf 代数

张量 Hopf 代数 T(V)、本原元、泛包络代数 U(L)、Milnor–Moore 检查、
Sym 的指数律与特征 p 下的 Prim∘T。所有对象只保存度数 ≤ D 的部分；
生成元度数 ≥ 1，因此截断对乘法与余乘法封闭。

每个生成元带一个奇偶性（缺省为偶），Koszul 符号只看奇偶性，与度数无关。
"""

from __future__ import annotations

from itertools import product
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy import divisors, mobius

from . import permutations as perms
from .exceptions import AxiomViolationError, FieldMismatchError, InputValidationError
from .field import FieldSpec, Matrix, independent_columns, kernel, quotient, rank, solve
from .graded import GradedSpace
from .logging import get_logger

logger = get_logger(__name__)

Word = Tuple[int, ...]
Vector = Dict[int, Any]


class Letter(BaseModel):
    """生成元：标签、度数（≥ 1）与奇偶性"""
    model_config = ConfigDict(frozen=True)

    label: str
    degree: int = Field(ge=1)
    parity: int = 0

    @field_validator("parity")
    @classmethod
    def validate_parity(cls, v: int) -> int:
        if v not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        return v


def letters_from_space(V: GradedSpace, parities: Optional[Mapping[Any, int]] = None,
                       by_degree: bool = False) -> List[Letter]:
    """
    把分次空间的基展开为字母表

    Args:
        V: 分次空间，度数必须 ≥ 1
        parities: 标签 -> 奇偶性，缺省为偶
        by_degree: 为 True 时奇偶性取度数的奇偶（Koszul 约定）

    Raises:
        InputValidationError: 出现 ≤ 0 度的生成元
    """
    out = []
    for n, labels in V.items():
        if n <= 0:
            raise InputValidationError(f"generators must sit in degrees >= 1, got degree {n}", field="gens")
        for label in labels:
            parity = n % 2 if by_degree else (parities or {}).get(label, 0)
            out.append(Letter(label=str(label), degree=n, parity=parity))
    return out


class _Words:
    """度数 ≤ D 的全部字，按度数分组；组内按长度降序、再按字典序排列"""

    def __init__(self, letters: Sequence[Letter], max_degree: int):
        self.letters = list(letters)
        self.max_degree = max_degree
        by_degree: Dict[int, List[Word]] = {0: [()]}
        for n in range(1, max_degree + 1):
            found: List[Word] = []
            for k, letter in enumerate(self.letters):
                rest = n - letter.degree
                if rest >= 0:
                    found.extend((k,) + w for w in by_degree.get(rest, []))
            by_degree[n] = sorted(found, key=lambda w: (-len(w), w))
        self.by_degree = by_degree
        self.index = {n: {w: k for k, w in enumerate(ws)} for n, ws in by_degree.items()}

    def degree(self, w: Word) -> int:
        return sum(self.letters[k].degree for k in w)

    def parity(self, w: Word) -> int:
        return sum(self.letters[k].parity for k in w) % 2

    def dim(self, n: int) -> int:
        return len(self.by_degree.get(n, []))

    def concat(self, a: int, b: int, field: FieldSpec) -> Matrix:
        """乘法 T_a ⊗ T_b → T_{a+b}：字的拼接"""
        target = self.index[a + b]
        data: Dict[int, Dict[int, Any]] = {}
        db = self.dim(b)
        for x, u in enumerate(self.by_degree[a]):
            for y, v in enumerate(self.by_degree[b]):
                data.setdefault(target[u + v], {})[x * db + y] = field.one
        return Matrix(field, self.dim(a + b), self.dim(a) * db, data)

    def unshuffles(self, n: int, a: int, field: FieldSpec) -> Matrix:
        """余乘法分量 T_n → T_a ⊗ T_{n−a}：对字母子集求和，带 Koszul 符号"""
        b = n - a
        ia, ib = self.index[a], self.index[b]
        db = self.dim(b)
        data: Dict[int, Dict[int, Any]] = {}
        for col, w in enumerate(self.by_degree[n]):
            L = len(w)
            for mask in range(1 << L):
                left = [k for k in range(L) if mask >> k & 1]
                u = tuple(w[k] for k in left)
                if self.degree(u) != a:
                    continue
                right = [k for k in range(L) if not mask >> k & 1]
                v = tuple(w[k] for k in right)
                order = [0] * L
                for pos, k in enumerate(left + right):
                    order[k] = pos
                sign = perms.sort_sign([self.letters[x].parity for x in w], order)
                row = ia[u] * db + ib[v]
                entry = data.setdefault(row, {})
                value = entry.get(col, field.zero) + (field.one if sign > 0 else -field.one)
                if field.is_zero(value):
                    entry.pop(col, None)
                else:
                    entry[col] = value
        return Matrix(field, self.dim(a) * db, self.dim(n), data)

    def reversal(self, n: int, field: FieldSpec) -> Matrix:
        """对极 S(w) = (−1)^{len w} ε · reverse(w)，ε 为倒序的 Koszul 符号"""
        target = self.index[n]
        data: Dict[int, Dict[int, Any]] = {}
        for col, w in enumerate(self.by_degree[n]):
            L = len(w)
            sign = perms.sort_sign([self.letters[x].parity for x in w], [L - 1 - k for k in range(L)])
            value = field.sign(L) * (field.one if sign > 0 else -field.one)
            data.setdefault(target[tuple(reversed(w))], {})[col] = value
        return Matrix(field, self.dim(n), self.dim(n), data)


class HopfPresentation:
    """
    截断的分次 Hopf 代数

    Attributes:
        field: 基域
        max_degree: 截断度数 D
        basis_words: 度数 -> 作为基的字
        labels: 度数 -> 基标签（字母标签的元组）
        parities: 度数 -> 各基元的奇偶性
        product: (a, b) -> H_a ⊗ H_b → H_{a+b}
        coproduct: (a, b) -> H_{a+b} → H_a ⊗ H_b
        antipode: n -> H_n → H_n
        pbw_dims: 诊断用的 PBW 维数（仅包络代数）
        words: 生成元上的字
        word_projection: n -> T_n → H_n，把字映到它的类
    """

    def __init__(self, field: FieldSpec, max_degree: int, words: "_Words",
                 basis_words: Mapping[int, Sequence[Word]], product: Mapping[Tuple[int, int], Matrix],
                 coproduct: Mapping[Tuple[int, int], Matrix], antipode: Mapping[int, Matrix],
                 word_projection: Mapping[int, Matrix], pbw_dims: Optional[Dict[int, int]] = None):
        self.field = field
        self.max_degree = max_degree
        self.basis_words = {n: tuple(ws) for n, ws in basis_words.items()}
        self.labels = {n: tuple(tuple(words.letters[k].label for k in w) for w in ws)
                       for n, ws in self.basis_words.items()}
        self.parities = {n: tuple(words.parity(w) for w in ws) for n, ws in self.basis_words.items()}
        self.product = dict(product)
        self.coproduct = dict(coproduct)
        self.antipode = dict(antipode)
        self.words = words
        self.word_projection = dict(word_projection)
        self.pbw_dims = pbw_dims

    @property
    def letters(self) -> List[Letter]:
        return self.words.letters

    def word_class(self, word: Word) -> Vector:
        """字在 H 中的类（坐标向量）"""
        n = self.words.degree(word)
        if n > self.max_degree:
            return {}
        return dict(self.word_projection[n].column(self.words.index[n][word]))

    def dim(self, n: int) -> int:
        return len(self.labels.get(n, ()))

    def dims(self) -> Dict[int, int]:
        return {n: self.dim(n) for n in range(self.max_degree + 1)}

    @property
    def space(self) -> GradedSpace:
        return GradedSpace(self.field, self.labels)

    def multiply(self, a: int, va: Vector, b: int, vb: Vector) -> Vector:
        if a + b > self.max_degree:
            return {}
        m = self.product[(a, b)]
        db = self.dim(b)
        vec = {x * db + y: ca * cb for x, ca in va.items() for y, cb in vb.items()}
        return m.apply(vec)

    def reduced_coproduct(self, n: int) -> Matrix:
        """Δ̄ 在 n 度的全部分量（a = 1..n−1）纵向拼接"""
        blocks = [self.coproduct[(a, n - a)] for a in range(1, n)]
        if not blocks:
            return Matrix.zeros(self.field, 0, self.dim(n))
        return Matrix.vstack(self.field, self.dim(n), *blocks)

    def __repr__(self) -> str:
        return f"HopfPresentation({self.field.label}, D={self.max_degree}, dims={self.dims()})"


def _from_words(words: _Words, field: FieldSpec) -> HopfPresentation:
    D = words.max_degree
    product_maps = {(a, b): words.concat(a, b, field) for a in range(D + 1) for b in range(D + 1 - a)}
    coproduct_maps = {(a, n - a): words.unshuffles(n, a, field) for n in range(D + 1) for a in range(n + 1)}
    antipode = {n: words.reversal(n, field) for n in range(D + 1)}
    identity = {n: Matrix.identity(field, words.dim(n)) for n in range(D + 1)}
    return HopfPresentation(field, D, words, words.by_degree, product_maps, coproduct_maps, antipode, identity)


def tensor_hopf(V: GradedSpace, max_degree: int, parities: Optional[Mapping[Any, int]] = None) -> HopfPresentation:
    """
    张量 Hopf 代数 T(V)：生成元本原，余乘法为带符号的拆分求和，对极为带符号的倒序

    Args:
        V: 生成元空间，度数 ≥ 1
        max_degree: 截断度数 D
        parities: 生成元奇偶性，缺省全偶

    Raises:
        InputValidationError: V 含 ≤ 0 度的生成元
    """
    if max_degree < 0:
        raise InputValidationError("max degree must be >= 0", field="maxDegree")
    letters = letters_from_space(V, parities)
    H = _from_words(_Words(letters, max_degree), V.field)
    logger.debug("张量 Hopf 代数", dims=H.dims())
    return H


def primitives(H: HopfPresentation, n: int) -> Matrix:
    """
    n 度本原元 ker(Δ̄) 的基（按列，H_n 坐标）

    基向量按奇偶性分块给出，每个基向量的奇偶性是确定的。
    """
    if n > H.max_degree:
        raise InputValidationError(f"degree {n} above truncation {H.max_degree}", field="n")
    return Matrix.hstack(H.field, H.dim(n), *(basis for _, basis in _homogeneous_primitives(H, n)))


def _homogeneous_primitives(H: HopfPresentation, n: int) -> List[Tuple[int, Matrix]]:
    """[(奇偶性, 该奇偶性下本原元的基)]"""
    F = H.field
    if n <= 0 or H.dim(n) == 0:
        return []
    reduced = H.reduced_coproduct(n)
    out = []
    for parity in (0, 1):
        cols = [k for k, p in enumerate(H.parities[n]) if p == parity]
        if not cols:
            continue
        K = kernel(reduced.select_columns(cols))
        embedded = Matrix.from_columns(F, H.dim(n), [
            {cols[r]: v for r, v in K.column(c).items()} for c in range(K.cols)
        ])
        out.append((parity, embedded))
    return out


def primitive_dims(H: HopfPresentation) -> Dict[int, int]:
    return {n: primitives(H, n).cols for n in range(1, H.max_degree + 1)}


# ---------------------------------------------------------------------------
# 分次李代数
# ---------------------------------------------------------------------------

class LiePresentation:
    """
    有限维分次李代数

    Args:
        field: 基域
        letters: 基元（标签、度数、奇偶性）
        bracket: (i, j) -> [x_i, x_j] 的系数向量；缺省项为零
        p_operation: 特征 p 下偶元的 p 次运算（可选，只作记录，由包络代数验证）
        check: 构造时校验反对称性与 Jacobi 恒等式

    Raises:
        AxiomViolationError: 括号不保持度数/奇偶性、不反对称或不满足 Jacobi
    """

    def __init__(self, field: FieldSpec, letters: Sequence[Letter],
                 bracket: Optional[Mapping[Tuple[int, int], Vector]] = None,
                 p_operation: Optional[Mapping[int, Vector]] = None, check: bool = True):
        self.field = field
        self.letters = list(letters)
        self.bracket_table: Dict[Tuple[int, int], Vector] = {
            key: {k: field.element(v) for k, v in vec.items() if not field.is_zero(field.element(v))}
            for key, vec in (bracket or {}).items()
        }
        self.p_operation = dict(p_operation or {})
        if check:
            self.check()

    @classmethod
    def abelian(cls, V: GradedSpace, parities: Optional[Mapping[Any, int]] = None,
                by_degree: bool = False) -> "LiePresentation":
        return cls(V.field, letters_from_space(V, parities, by_degree))

    @classmethod
    def heisenberg(cls, field: FieldSpec) -> "LiePresentation":
        """x, y 在 1 度，z 在 2 度，[x, y] = z"""
        letters = [Letter(label="x", degree=1), Letter(label="y", degree=1), Letter(label="z", degree=2)]
        return cls(field, letters, {(0, 1): {2: 1}, (1, 0): {2: -1}})

    @property
    def space(self) -> GradedSpace:
        basis: Dict[int, List[str]] = {}
        for letter in self.letters:
            basis.setdefault(letter.degree, []).append(letter.label)
        return GradedSpace(self.field, basis)

    def dims(self) -> Dict[int, int]:
        return self.space.dims()

    def bracket(self, va: Vector, vb: Vector) -> Vector:
        F = self.field
        out: Vector = {}
        for i, a in va.items():
            for j, b in vb.items():
                for k, c in self.bracket_table.get((i, j), {}).items():
                    out[k] = out.get(k, F.zero) + a * b * c
        return {k: v for k, v in out.items() if not F.is_zero(v)}

    def _sign(self, i: int, j: int) -> Any:
        return self.field.sign(self.letters[i].parity * self.letters[j].parity)

    def check(self) -> None:
        F = self.field
        n = len(self.letters)
        for (i, j), vec in self.bracket_table.items():
            for k in vec:
                if self.letters[k].degree != self.letters[i].degree + self.letters[j].degree:
                    raise AxiomViolationError(f"bracket [{i},{j}] does not add degrees")
                if self.letters[k].parity != (self.letters[i].parity + self.letters[j].parity) % 2:
                    raise AxiomViolationError(f"bracket [{i},{j}] does not add parities")
        for i in range(n):
            for j in range(n):
                lhs = self.bracket_table.get((i, j), {})
                rhs = self.bracket_table.get((j, i), {})
                s = self._sign(i, j)
                for k in set(lhs) | set(rhs):
                    if not F.is_zero(lhs.get(k, F.zero) + s * rhs.get(k, F.zero)):
                        raise AxiomViolationError(f"bracket is not graded antisymmetric at ({i},{j})")
        for i, j, k in product(range(n), repeat=3):
            total: Vector = {}
            for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                inner = self.bracket({b: F.one}, {c: F.one})
                term = self.bracket({a: F.one}, inner)
                s = self._sign(c, a)
                for key, v in term.items():
                    total[key] = total.get(key, F.zero) + s * v
            if any(not F.is_zero(v) for v in total.values()):
                raise AxiomViolationError(f"Jacobi identity fails at ({i},{j},{k})")


class LieGeneratorModel(BaseModel):
    label: str
    degree: int = Field(ge=1)
    parity: int = 0


class LieBracketModel(BaseModel):
    left: str
    right: str
    value: Dict[str, str]


class LiePresentationModel(BaseModel):
    """李代数的 JSON 形式；系数为有理数字符串，反对称的另一半自动补上"""
    field: Any = "Q"
    generators: List[LieGeneratorModel]
    brackets: List[LieBracketModel] = Field(default_factory=list)

    def build(self) -> LiePresentation:
        F = FieldSpec.parse(self.field)
        letters = [Letter(label=g.label, degree=g.degree, parity=g.parity) for g in self.generators]
        index = {letter.label: k for k, letter in enumerate(letters)}
        if len(index) != len(letters):
            raise InputValidationError("duplicate Lie generator labels", field="generators")
        table: Dict[Tuple[int, int], Vector] = {}
        for entry in self.brackets:
            try:
                i, j = index[entry.left], index[entry.right]
                vec = {index[k]: F.element(v) for k, v in entry.value.items()}
            except KeyError as exc:
                raise InputValidationError(f"unknown generator {exc.args[0]!r}", field="brackets") from exc
            table[(i, j)] = vec
            if (j, i) not in table:
                s = F.sign(letters[i].parity * letters[j].parity + 1)
                table[(j, i)] = {k: s * v for k, v in vec.items()}
        return LiePresentation(F, letters, table)


# ---------------------------------------------------------------------------
# 泛包络代数
# ---------------------------------------------------------------------------

def _quotient_hopf(words: _Words, field: FieldSpec, relations: Mapping[int, List[Vector]],
                   pbw_dims: Optional[Dict[int, int]] = None) -> HopfPresentation:
    """
    T / (双边理想)：理想由 relations 在各度数的元素经左右乘字张成

    Raises:
        AxiomViolationError: 理想不是余理想或对极不保持理想
    """
    D = words.max_degree
    quotients = {}
    for n in range(D + 1):
        columns: List[Vector] = []
        for e, rels in relations.items():
            for left_degree in range(n - e + 1):
                right_degree = n - e - left_degree
                for u in words.by_degree.get(left_degree, []):
                    for v in words.by_degree.get(right_degree, []):
                        for r in rels:
                            vec: Vector = {}
                            for w_idx, c in r.items():
                                w = words.by_degree[e][w_idx]
                                key = words.index[n][u + w + v]
                                vec[key] = vec.get(key, field.zero) + c
                            vec = {k: c for k, c in vec.items() if not field.is_zero(c)}
                            if vec:
                                columns.append(vec)
        ideal = Matrix.from_columns(field, words.dim(n), columns)
        quotients[n] = (quotient(ideal), ideal)

    def incl(n: int) -> Matrix:
        return quotients[n][0].complement

    def proj(n: int) -> Matrix:
        return quotients[n][0].projection

    product_maps = {}
    coproduct_maps = {}
    antipode = {}
    for a in range(D + 1):
        for b in range(D + 1 - a):
            product_maps[(a, b)] = proj(a + b) @ words.concat(a, b, field) @ incl(a).kron(incl(b))
    for n in range(D + 1):
        ideal = quotients[n][1]
        for a in range(n + 1):
            delta = words.unshuffles(n, a, field)
            image = proj(a).kron(proj(n - a)) @ delta
            if ideal.cols and not (image @ ideal).is_zero():
                raise AxiomViolationError(f"relation span is not a coideal in degree {n}")
            coproduct_maps[(a, n - a)] = image @ incl(n)
        S = words.reversal(n, field)
        if ideal.cols and not (proj(n) @ S @ ideal).is_zero():
            raise AxiomViolationError(f"antipode does not preserve the relation span in degree {n}")
        antipode[n] = proj(n) @ S @ incl(n)
    basis_words = {n: [words.by_degree[n][i] for i in quotients[n][0].complement_indices] for n in range(D + 1)}
    projections = {n: proj(n) for n in range(D + 1)}
    return HopfPresentation(field, D, words, basis_words, product_maps, coproduct_maps, antipode,
                            projections, pbw_dims)


def pbw_dims(L: LiePresentation, max_degree: int) -> Dict[int, int]:
    """Sym(L) 的维数：偶元多项式、奇元外代数（仅作诊断）"""
    counts = [0] * (max_degree + 1)
    counts[0] = 1
    for letter in L.letters:
        step = letter.degree
        nxt = list(counts)
        if letter.parity:
            for n in range(max_degree, step - 1, -1):
                nxt[n] = counts[n] + counts[n - step]
        else:
            for n in range(step, max_degree + 1):
                nxt[n] = nxt[n] + nxt[n - step]
        counts = nxt
    return dict(enumerate(counts))


def enveloping(L: LiePresentation, max_degree: int) -> HopfPresentation:
    """
    泛包络代数 U(L) = T(L) / (xy − (−1)^{|x||y|} yx − [x, y])

    商由线性代数如实计算，特征 p 下行为与定义一致；PBW 维数只作诊断记录。

    Raises:
        AxiomViolationError: 李代数不合法，或关系不构成余理想
    """
    L.check()
    F = L.field
    words = _Words(L.letters, max_degree)
    relations: Dict[int, List[Vector]] = {}
    n = len(L.letters)
    for i in range(n):
        for j in range(n):
            e = L.letters[i].degree + L.letters[j].degree
            if e > max_degree:
                continue
            idx = words.index[e]
            vec: Vector = {idx[(i, j)]: F.one}
            key = idx[(j, i)]
            vec[key] = vec.get(key, F.zero) - L._sign(i, j)
            for k, c in L.bracket_table.get((i, j), {}).items():
                single = idx[(k,)]
                vec[single] = vec.get(single, F.zero) - c
            relations.setdefault(e, []).append({k: v for k, v in vec.items() if not F.is_zero(v)})
    diagnostics = pbw_dims(L, max_degree)
    U = _quotient_hopf(words, F, relations, diagnostics)
    if U.dims() != diagnostics:
        logger.info("包络代数维数与 PBW 计数不同", dims=U.dims(), pbw=diagnostics, field=F.label)
    logger.debug("泛包络代数", dims=U.dims())
    return U



# ---------------------------------------------------------------------------
# 交换子闭包、Witt 数与 Lyndon 字
# ---------------------------------------------------------------------------

def _commutator(H: HopfPresentation, a: int, va: Vector, pa: int, b: int, vb: Vector, pb: int) -> Vector:
    """[x, y] = xy − (−1)^{|x||y|} yx"""
    F = H.field
    out = dict(H.multiply(a, va, b, vb))
    s = F.sign(pa * pb)
    for k, v in H.multiply(b, vb, a, va).items():
        out[k] = out.get(k, F.zero) - s * v
    return {k: v for k, v in out.items() if not F.is_zero(v)}


def _power(H: HopfPresentation, a: int, v: Vector, p: int) -> Vector:
    result, degree = v, a
    for _ in range(p - 1):
        result = H.multiply(degree, result, a, v)
        degree += a
    return result


def _independent(F: FieldSpec, rows: int, candidates: List[Tuple[Vector, int]]) -> List[Tuple[Vector, int]]:
    candidates = [(v, q) for v, q in candidates if v]
    if not candidates:
        return []
    M = Matrix.from_columns(F, rows, [v for v, _ in candidates])
    return [candidates[k] for k in independent_columns(M)]


def lie_closure(H: HopfPresentation, p_powers: bool = False) -> Dict[int, List[Tuple[Vector, int]]]:
    """
    生成元在交换子下张成的子空间，逐度给出 (向量, 奇偶性) 的基

    Args:
        H: Hopf 代数（生成元取单字母字的类）
        p_powers: 特征 p 时并入偶元的 p 次幂（限制李代数的闭包）
    """
    F = H.field
    p = F.characteristic
    span: Dict[int, List[Tuple[Vector, int]]] = {}
    for n in range(1, H.max_degree + 1):
        candidates = [(H.word_class((k,)), letter.parity)
                      for k, letter in enumerate(H.letters) if letter.degree == n]
        for a in range(1, n):
            for va, pa in span.get(a, []):
                for vb, pb in span.get(n - a, []):
                    candidates.append((_commutator(H, a, va, pa, n - a, vb, pb), (pa + pb) % 2))
        if p_powers and p and n % p == 0:
            candidates.extend((_power(H, n // p, v, p), 0) for v, q in span.get(n // p, []) if q == 0)
        span[n] = _independent(F, H.dim(n), candidates)
    return span


def witt_dimension(d: int, n: int) -> int:
    """d 个 1 度偶生成元的自由李代数在 n 度的维数 (1/n) Σ_{e|n} μ(e) d^{n/e}"""
    if n < 1:
        raise InputValidationError("degree must be >= 1", field="n")
    return sum(int(mobius(e)) * d ** (n // e) for e in divisors(n)) // n


def lyndon_words(k: int, max_length: int) -> Iterable[Word]:
    """字母表 {0..k−1} 上长度 ≤ max_length 的全部 Lyndon 字，按字典序（Duval 算法）"""
    if k <= 0 or max_length <= 0:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_length:
            w.append(w[-m])
        while w and w[-1] == k - 1:
            w.pop()


def lyndon_dims(letters: Sequence[Letter], max_degree: int) -> Dict[int, int]:
    """按度数统计 Lyndon 字：偶生成元的自由李代数的维数"""
    counts = {n: 0 for n in range(1, max_degree + 1)}
    for w in lyndon_words(len(letters), max_degree):
        degree = sum(letters[x].degree for x in w)
        if degree <= max_degree:
            counts[degree] += 1
    return counts


def restricted_dims(letters: Sequence[Letter], max_degree: int, p: int) -> Dict[int, int]:
    """自由限制李代数的维数 Σ_{n = m·p^j} (n 度之外 m 度的 Lyndon 数)"""
    lie = lyndon_dims(letters, max_degree)
    out = {}
    for n in range(1, max_degree + 1):
        total, m = 0, n
        while True:
            total += lie.get(m, 0)
            if m % p:
                break
            m //= p
        out[n] = total
    return out


# ---------------------------------------------------------------------------
# 自由李代数、Milnor–Moore、限制单子、Sym 指数律
# ---------------------------------------------------------------------------

def free_lie_presentation(V: GradedSpace, max_degree: int,
                          parities: Optional[Mapping[Any, int]] = None) -> LiePresentation:
    """
    自由分次李代数（截断到 D 度），实现为 T(V) 中生成元的交换子闭包，括号为交换子

    基标签为 "l{度数}_{k}"。
    """
    T = tensor_hopf(V, max_degree, parities)
    span = lie_closure(T)
    F = V.field
    letters: List[Letter] = []
    offsets: Dict[int, int] = {}
    bases: Dict[int, Matrix] = {}
    for n, vectors in sorted(span.items()):
        offsets[n] = len(letters)
        letters.extend(Letter(label=f"l{n}_{k}", degree=n, parity=q) for k, (_, q) in enumerate(vectors))
        bases[n] = Matrix.from_columns(F, T.dim(n), [v for v, _ in vectors])
    table: Dict[Tuple[int, int], Vector] = {}
    for a, va_list in span.items():
        for b, vb_list in span.items():
            if a + b > max_degree or not span.get(a + b):
                continue
            for x, (va, pa) in enumerate(va_list):
                for y, (vb, pb) in enumerate(vb_list):
                    c = _commutator(T, a, va, pa, b, vb, pb)
                    if not c:
                        continue
                    coords = solve(bases[a + b], Matrix.from_columns(F, T.dim(a + b), [c]))
                    table[(offsets[a] + x, offsets[b] + y)] = {
                        offsets[a + b] + r: v for r, v in coords.column(0).items()
                    }
    L = LiePresentation(F, letters, table)
    logger.debug("自由李代数", dims=L.dims())
    return L


class MilnorMooreRow(BaseModel):
    degree: int
    lie_dim: int
    primitive_dim: int
    unit_rank: int
    unit_primitive: bool
    generated: bool

    @property
    def unit_iso(self) -> bool:
        return self.unit_primitive and self.unit_rank == self.lie_dim == self.primitive_dim


class MilnorMooreReport(BaseModel):
    field: str
    rows: List[MilnorMooreRow] = Field(default_factory=list)

    @property
    def iso(self) -> bool:
        return all(r.unit_iso for r in self.rows)

    @property
    def primitively_generated(self) -> bool:
        return all(r.generated for r in self.rows)


def milnor_moore_check(L: LiePresentation, max_degree: int) -> MilnorMooreReport:
    """
    单位映射 L → Prim(U(L)) 逐度是否同构，以及 U(L) 是否由本原元生成

    特征 p 时照常计算（结果一般不是同构），只记一条警告。
    """
    F = L.field
    if not F.is_rational:
        logger.warning("特征 p 下 Milnor–Moore 一般不成立", field=F.label)
    U = enveloping(L, max_degree)
    report = MilnorMooreReport(field=F.label)
    generated: Dict[int, List[Vector]] = {0: [{0: F.one}]}
    prims: Dict[int, List[Vector]] = {}
    for n in range(1, max_degree + 1):
        unit = Matrix.from_columns(F, U.dim(n), [
            U.word_class((k,)) for k, letter in enumerate(L.letters) if letter.degree == n
        ])
        P = primitives(U, n)
        prims[n] = [P.column(c) for c in range(P.cols)]
        candidates = [(v, 0) for v in prims[n]]
        for a in range(1, n):
            for x in prims[a]:
                for y in generated.get(n - a, []):
                    candidates.append((U.multiply(a, x, n - a, y), 0))
        generated[n] = [v for v, _ in _independent(F, U.dim(n), candidates)]
        report.rows.append(MilnorMooreRow(
            degree=n,
            lie_dim=sum(1 for letter in L.letters if letter.degree == n),
            primitive_dim=P.cols,
            unit_rank=rank(unit),
            unit_primitive=(U.reduced_coproduct(n) @ unit).is_zero(),
            generated=len(generated[n]) == U.dim(n),
        ))
    logger.info("Milnor–Moore 检查", field=F.label, iso=report.iso)
    return report


class RestrictedReport(BaseModel):
    """Prim(T(V)) 的维数与限制李闭包的见证"""
    field: str
    primitive_dims: Dict[int, int]
    lie_dims: Dict[int, int]
    closure_dims: Dict[int, int]
    formula_dims: Optional[Dict[int, int]] = None
    closure_primitive: bool

    @property
    def witness_ok(self) -> bool:
        return self.closure_primitive and self.closure_dims == self.primitive_dims


def restricted_monad(V: GradedSpace, max_degree: int,
                     parities: Optional[Mapping[Any, int]] = None) -> RestrictedReport:
    """
    特征 p 下 Prim(T(V)) 的维数表

    见证：每个本原元都落在李字与其 p^j 次幂张成的空间里（维数相等且闭包全是本原元）。
    生成元全偶时再给出 Σ_{n = m·p^j} W(m) 的公式值作对照。

    Raises:
        InputValidationError: 域不是 F_p
    """
    F = V.field
    if F.is_rational:
        raise InputValidationError("restricted monad needs a prime field", field="field")
    T = tensor_hopf(V, max_degree, parities)
    closure = lie_closure(T, p_powers=True)
    closure_primitive = all(
        (T.reduced_coproduct(n) @ Matrix.from_columns(F, T.dim(n), [v for v, _ in vs])).is_zero()
        for n, vs in closure.items() if vs
    )
    letters = T.letters
    formula = restricted_dims(letters, max_degree, F.characteristic) if all(
        letter.parity == 0 for letter in letters) else None
    report = RestrictedReport(
        field=F.label,
        primitive_dims=primitive_dims(T),
        lie_dims={n: len(vs) for n, vs in lie_closure(T).items()},
        closure_dims={n: len(vs) for n, vs in closure.items()},
        formula_dims=formula,
        closure_primitive=closure_primitive,
    )
    logger.info("限制单子", field=F.label, dims=report.primitive_dims, witness=report.witness_ok)
    return report


class SymExponentialRow(BaseModel):
    degree: int
    lhs: int
    rhs: int
    is_iso: bool


class SymExponentialReport(BaseModel):
    """Sym(X ⊕ Y) 与 Sym(X) ⊗ Sym(Y) 的逐度比较；matrices 为乘法给出的同构"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    field: str
    rows: List[SymExponentialRow] = Field(default_factory=list)
    matrices: Dict[int, Matrix] = Field(default_factory=dict, exclude=True)

    @property
    def valid(self) -> bool:
        return all(r.is_iso and r.lhs == r.rhs for r in self.rows)


def _tagged(V: GradedSpace, tag: str) -> GradedSpace:
    return GradedSpace(V.field, {n: [f"{tag}:{label}" for label in labels] for n, labels in V.items()})


def symmetric_algebra(V: GradedSpace, max_degree: int) -> HopfPresentation:
    """分次对称代数（Koszul 符号按度数），即交换李代数的包络代数"""
    return enveloping(LiePresentation.abelian(V, by_degree=True), max_degree)


def sym_exponential_check(X: GradedSpace, Y: GradedSpace, max_degree: int) -> SymExponentialReport:
    """
    指数律 Sym(X ⊕ Y) ≅ Sym(X) ⊗ Sym(Y)：逐度比较维数，并由乘法 u ⊗ v ↦ uv 给出显式矩阵
    """
    if X.field != Y.field:
        raise FieldMismatchError("sym exponential over mismatched fields")
    F = X.field
    X, Y = _tagged(X, "x"), _tagged(Y, "y")
    Z = GradedSpace(F, {n: list(X.basis(n)) + list(Y.basis(n)) for n in set(X.degrees) | set(Y.degrees)})
    SX, SY, SZ = (symmetric_algebra(S, max_degree) for S in (X, Y, Z))
    z_index = {letter.label: k for k, letter in enumerate(SZ.letters)}
    x_map = [z_index[letter.label] for letter in SX.letters]
    y_map = [z_index[letter.label] for letter in SY.letters]
    report = SymExponentialReport(field=F.label)
    for n in range(max_degree + 1):
        columns = []
        for a in range(n + 1):
            for u in SX.basis_words.get(a, ()):
                for v in SY.basis_words.get(n - a, ()):
                    word = tuple(x_map[k] for k in u) + tuple(y_map[k] for k in v)
                    columns.append(SZ.word_class(word))
        M = Matrix.from_columns(F, SZ.dim(n), columns)
        report.matrices[n] = M
        report.rows.append(SymExponentialRow(
            degree=n, lhs=SZ.dim(n), rhs=len(columns),
            is_iso=M.rows == M.cols and rank(M) == M.rows,
        ))
    return report


# ---------------------------------------------------------------------------
# Hopf 公理
# ---------------------------------------------------------------------------

class HopfAxiomReport(BaseModel):
    associativity: bool
    coassociativity: bool
    unit: bool
    counit: bool
    bialgebra: bool
    antipode: bool
    primitives_closed: bool
    p_power_closed: Optional[bool] = None

    @property
    def valid(self) -> bool:
        return all(v is not False for v in self.model_dump().values())


def _swap_middle(H: HopfPresentation, a1: int, a2: int, b1: int, b2: int) -> Matrix:
    """H_{a1}⊗H_{a2}⊗H_{b1}⊗H_{b2} → H_{a1}⊗H_{b1}⊗H_{a2}⊗H_{b2}，带 Koszul 符号"""
    F = H.field
    d1, d2, d3, d4 = H.dim(a1), H.dim(a2), H.dim(b1), H.dim(b2)
    p2, p3 = H.parities.get(a2, ()), H.parities.get(b1, ())
    data: Dict[int, Dict[int, Any]] = {}
    for i, j, k, l in product(range(d1), range(d2), range(d3), range(d4)):
        col = ((i * d2 + j) * d3 + k) * d4 + l
        row = ((i * d3 + k) * d2 + j) * d4 + l
        data.setdefault(row, {})[col] = F.sign(p2[j] * p3[k])
    n = d1 * d2 * d3 * d4
    return Matrix(F, n, n, data)


def hopf_axioms(H: HopfPresentation) -> HopfAxiomReport:
    """
    在 D 度以内逐项验证 Hopf 代数公理，附带本原元对交换子封闭、特征 p 下对 p 次幂封闭
    """
    F = H.field
    D = H.max_degree
    m, delta, S = H.product, H.coproduct, H.antipode

    def eye(n: int) -> Matrix:
        return Matrix.identity(F, H.dim(n))

    triples = [(a, b, c) for a in range(D + 1) for b in range(D + 1 - a) for c in range(D + 1 - a - b)]
    associativity = all(
        m[(a + b, c)] @ m[(a, b)].kron(eye(c)) == m[(a, b + c)] @ eye(a).kron(m[(b, c)]) for a, b, c in triples
    )
    coassociativity = all(
        delta[(a, b)].kron(eye(c)) @ delta[(a + b, c)] == eye(a).kron(delta[(b, c)]) @ delta[(a, b + c)]
        for a, b, c in triples
    )
    unit = H.dim(0) == 1 and all(m[(0, n)] == eye(n) and m[(n, 0)] == eye(n) for n in range(D + 1))
    counit = all(delta[(0, n)] == eye(n) and delta[(n, 0)] == eye(n) for n in range(D + 1))

    bialgebra = True
    for a in range(D + 1):
        for b in range(D + 1 - a):
            for c in range(a + b + 1):
                d = a + b - c
                lhs = delta[(c, d)] @ m[(a, b)]
                rhs = Matrix.zeros(F, lhs.rows, lhs.cols)
                for a1 in range(a + 1):
                    b1 = c - a1
                    a2, b2 = a - a1, b - b1
                    if b1 < 0 or b2 < 0:
                        continue
                    term = m[(a1, b1)].kron(m[(a2, b2)]) @ _swap_middle(H, a1, a2, b1, b2) @ \
                        delta[(a1, a2)].kron(delta[(b1, b2)])
                    rhs = rhs + term
                if lhs != rhs:
                    bialgebra = False

    antipode = S[0] == eye(0)
    for n in range(1, D + 1):
        left = Matrix.zeros(F, H.dim(n), H.dim(n))
        right = Matrix.zeros(F, H.dim(n), H.dim(n))
        for a in range(n + 1):
            left = left + m[(a, n - a)] @ S[a].kron(eye(n - a)) @ delta[(a, n - a)]
            right = right + m[(a, n - a)] @ eye(a).kron(S[n - a]) @ delta[(a, n - a)]
        antipode = antipode and left.is_zero() and right.is_zero()

    prims = {n: _homogeneous_primitives(H, n) for n in range(1, D + 1)}
    primitives_closed = True
    for a in range(1, D + 1):
        for b in range(1, D + 1 - a):
            for pa, Pa in prims[a]:
                for pb, Pb in prims[b]:
                    for x in range(Pa.cols):
                        for y in range(Pb.cols):
                            c = _commutator(H, a, Pa.column(x), pa, b, Pb.column(y), pb)
                            if c and H.reduced_coproduct(a + b).apply(c):
                                primitives_closed = False

    p_power_closed = None
    p = F.characteristic
    if p:
        p_power_closed = True
        for a in range(1, D // p + 1):
            for parity, Pa in prims[a]:
                if parity:
                    continue
                for x in range(Pa.cols):
                    power = _power(H, a, Pa.column(x), p)
                    if power and H.reduced_coproduct(a * p).apply(power):
                        p_power_closed = False

    report = HopfAxiomReport(
        associativity=associativity, coassociativity=coassociativity, unit=unit, counit=counit,
        bialgebra=bialgebra, antipode=antipode, primitives_closed=primitives_closed,
        p_power_closed=p_power_closed,
    )
    if not report.valid:
        logger.warning("Hopf 公理不成立", report=report.model_dump())
    return report
