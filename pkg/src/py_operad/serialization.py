# -*- coding: utf-8 -*-
"""
JSON / CSV / 文本表格的读写

JSON 一律按键排序输出，有理数以字符串传输；任何输出的文档重新解析后再输出，
得到逐字节相同的结果。
"""

import csv
import io
import json
from typing import Any, Dict, List, Mapping, Sequence, Tuple, Union

from pydantic import ValidationError

from .config import Window
from .exceptions import InputValidationError
from .field import FieldSpec, Matrix
from .hopf import LiePresentation, LiePresentationModel
from .logging import get_logger
from .presentation import OperadPresentation
from .symseq import Component, SymSeqObject

logger = get_logger(__name__)

ARITY_HEADER = ("arity", "degree", "dim")
DEGREE_HEADER = ("degree", "dim")

DimensionTable = Mapping[int, Mapping[int, int]]


def _string_keys(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _string_keys(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_string_keys(v) for v in value]
    return value


def dumps(document: Any) -> str:
    """确定性的 JSON 文本；键先转成字符串再排序，重新解析后输出不变"""
    return json.dumps(_string_keys(document), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"malformed JSON: {exc.msg} at line {exc.lineno}", field="json") from exc


# ---------------------------------------------------------------------------
# 标签与矩阵
# ---------------------------------------------------------------------------

def encode_label(label: Any) -> Any:
    if isinstance(label, tuple):
        return [encode_label(x) for x in label]
    return label


def decode_label(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(decode_label(x) for x in value)
    return value


def encode_matrix(M: Matrix) -> List[List[str]]:
    return M.to_strings()


def decode_matrix(field: FieldSpec, rows: Sequence[Sequence[Any]], size: int, name: str) -> Matrix:
    if len(rows) != size or any(len(r) != size for r in rows):
        raise InputValidationError(f"{name} must be a {size}x{size} matrix", field=name)
    return Matrix.from_rows(field, rows, size)


# ---------------------------------------------------------------------------
# 对称序列
# ---------------------------------------------------------------------------

def _degree_order(comp: Component) -> List[int]:
    return sorted(range(comp.dim), key=lambda k: (comp.degrees[k], k))


def encode_component(comp: Component) -> Dict[str, Any]:
    """单个分量；基按度数分组，矩阵按分组后的顺序给出"""
    order = _degree_order(comp)
    degrees: Dict[str, Dict[str, List[Any]]] = {}
    for k in order:
        degrees.setdefault(str(comp.degrees[k]), {"basis": []})["basis"].append(encode_label(comp.labels[k]))
    out: Dict[str, Any] = {
        "degrees": degrees,
        "transpositions": [encode_matrix(g.select_rows(order).select_columns(order)) for g in comp.generators],
    }
    d = comp.differential.select_rows(order).select_columns(order)
    if not d.is_zero():
        out["differential"] = encode_matrix(d)
    return out


def decode_component(field: FieldSpec, arity: int, document: Mapping[str, Any]) -> Component:
    labels: List[Any] = []
    degrees: List[int] = []
    try:
        for degree, block in sorted(document.get("degrees", {}).items(), key=lambda kv: int(kv[0])):
            for label in block["basis"]:
                labels.append(decode_label(label))
                degrees.append(int(degree))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputValidationError(f"malformed degrees in arity {arity}", field="degrees") from exc
    dim = len(labels)
    generators = None
    if "transpositions" in document:
        generators = [decode_matrix(field, g, dim, "transpositions") for g in document["transpositions"]]
    differential = None
    if "differential" in document:
        differential = decode_matrix(field, document["differential"], dim, "differential")
    return Component(field, arity, labels, degrees, differential, generators)


def encode_symseq(X: SymSeqObject) -> Dict[str, Any]:
    return {
        "field": X.field.to_json(),
        "window": X.window.model_dump(by_alias=True),
        "arities": {str(n): encode_component(comp) for n, comp in X.items()},
    }


def decode_symseq(document: Mapping[str, Any]) -> SymSeqObject:
    """
    Raises:
        InputValidationError: 文档结构不符或矩阵形状错误
    """
    field = FieldSpec.parse(document.get("field", "Q"))
    try:
        window = Window.model_validate(document.get("window", {}))
    except ValidationError as exc:
        raise InputValidationError(str(exc.errors()[0]["msg"]), field="window") from exc
    arities = document.get("arities")
    if not isinstance(arities, Mapping):
        raise InputValidationError("symmetric sequence needs an 'arities' object", field="arities")
    components = {int(n): decode_component(field, int(n), body) for n, body in arities.items()}
    return SymSeqObject(field, window, components)


# ---------------------------------------------------------------------------
# 表现
# ---------------------------------------------------------------------------

def decode_operad_presentation(document: Mapping[str, Any]) -> OperadPresentation:
    try:
        return OperadPresentation.model_validate(document)
    except ValidationError as exc:
        error = exc.errors()[0]
        where = ".".join(str(x) for x in error["loc"]) or "presentation"
        raise InputValidationError(f"{where}: {error['msg']}", field=where) from exc


def encode_operad_presentation(P: OperadPresentation) -> Dict[str, Any]:
    return P.to_json_dict()


def encode_lie_presentation(L: LiePresentation) -> Dict[str, Any]:
    F = L.field
    brackets = []
    for (i, j), vec in sorted(L.bracket_table.items()):
        if vec:
            brackets.append({
                "left": L.letters[i].label,
                "right": L.letters[j].label,
                "value": {L.letters[k].label: F.to_string(v) for k, v in sorted(vec.items())},
            })
    return {
        "field": F.to_json(),
        "generators": [letter.model_dump() for letter in L.letters],
        "brackets": brackets,
    }


def decode_lie_presentation(document: Mapping[str, Any]) -> LiePresentation:
    try:
        model = LiePresentationModel.model_validate(document)
    except ValidationError as exc:
        error = exc.errors()[0]
        where = ".".join(str(x) for x in error["loc"]) or "lie"
        raise InputValidationError(f"{where}: {error['msg']}", field=where) from exc
    return model.build()


# ---------------------------------------------------------------------------
# 维数表
# ---------------------------------------------------------------------------

def encode_dims(table: DimensionTable) -> Dict[str, Dict[str, int]]:
    return {str(n): {str(d): int(v) for d, v in row.items()} for n, row in table.items()}


def decode_dims(document: Mapping[str, Mapping[str, Any]]) -> Dict[int, Dict[int, int]]:
    return {int(n): {int(d): int(v) for d, v in row.items()} for n, row in document.items()}


def arity_rows(table: DimensionTable, keep_zero: bool = False) -> List[Tuple[int, int, int]]:
    return [
        (n, d, v)
        for n in sorted(table)
        for d, v in sorted(table[n].items())
        if v or keep_zero
    ]


def degree_rows(table: Mapping[int, int], keep_zero: bool = True) -> List[Tuple[int, int]]:
    return [(d, v) for d, v in sorted(table.items()) if v or keep_zero]


def to_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def to_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """等宽文本表格，右对齐"""
    cells = [[str(x) for x in header]] + [[str(x) for x in row] for row in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_rows(header: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str,
                document: Union[Dict[str, Any], None] = None) -> str:
    """按 json / csv / table 输出；json 时输出 document（缺省为行列表）"""
    if fmt == "csv":
        return to_csv(header, rows)
    if fmt == "table":
        return to_table(header, rows)
    if fmt == "json":
        return dumps(document if document is not None else [dict(zip(header, row)) for row in rows])
    raise InputValidationError(f"unknown format {fmt!r}", field="format")
