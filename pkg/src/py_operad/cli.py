# -*- coding: utf-8 -*-
"""
命令行入口

每个子命令是一次可复现的批量计算：结果写到 stdout（逐字节确定），日志写到 stderr。
退出码：0 成功；2 输入校验失败；3 结构检查失败（公理不成立、黄金表不符）。
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from . import serialization as ser
from .config import Window, get_settings
from .exceptions import AxiomViolationError, EngineError, FieldMismatchError, InputValidationError
from .field import FieldSpec
from .graded import GradedSpace
from .hopf import (
    LiePresentation,
    enveloping,
    free_lie_presentation,
    hopf_axioms,
    milnor_moore_check,
    primitive_dims,
    tensor_hopf,
)
from .koszul import double_dual_check, koszul_dual, truncation_tower
from .logging import get_logger, init_logging
from .operad import BUILTIN_NAMES, Operad, builtin, check_operad
from .presentation import PRESENTATIONS, presented_operad
from .symseq import compose, norm_map, regular_representation, sign_representation, trivial_representation

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_AXIOM = 3

REPRESENTATIONS = {
    "regular": regular_representation,
    "trivial": trivial_representation,
    "sign": sign_representation,
}


class CommandFailed(Exception):
    """命令算完了，但结构检查不通过；输出照常写出，退出码为 3"""

    def __init__(self, output: str, reason: str):
        super().__init__(reason)
        self.output = output


class _Parser(argparse.ArgumentParser):
    """参数错误抛 InputValidationError 而不是直接退出"""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise InputValidationError(message, field="argv")


# ---------------------------------------------------------------------------
# 输入解析
# ---------------------------------------------------------------------------

def read_document(value: str, name: str) -> Any:
    """内联 JSON（以 { 或 [ 开头）或文件路径"""
    text = value.strip()
    if text.startswith(("{", "[")):
        return ser.loads(text)
    path = Path(value)
    if not path.is_file():
        raise InputValidationError(f"no such file {value!r}", field=name)
    return ser.loads(path.read_text(encoding="utf-8"))


def parse_field(args: argparse.Namespace) -> FieldSpec:
    if args.char is not None:
        return FieldSpec.parse(str(args.char))
    return FieldSpec.parse(args.field)


def parse_window(args: argparse.Namespace) -> Window:
    guards = get_settings().guards
    if args.max_arity > guards.max_arity:
        raise InputValidationError(f"maxArity {args.max_arity} exceeds the limit {guards.max_arity}", field="maxArity")
    try:
        window = Window(max_arity=args.max_arity, min_deg=args.min_deg, max_deg=args.max_deg)
    except ValidationError as exc:
        raise InputValidationError(str(exc.errors()[0]["msg"]), field="window") from exc
    if window.degree_span > guards.max_degree_span:
        raise InputValidationError(
            f"degree span {window.degree_span} exceeds the limit {guards.max_degree_span}", field="minDeg")
    return window


def parse_gens(text: str, field: FieldSpec) -> Tuple[GradedSpace, Dict[str, int]]:
    """
    "deg:count[:parity]" 逗号分隔，例如 "1:2,2:1:1"

    Returns:
        (生成元空间, 标签 -> 奇偶性)
    """
    basis: Dict[int, List[str]] = {}
    parities: Dict[str, int] = {}
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        parts = chunk.split(":")
        try:
            degree, count = int(parts[0]), int(parts[1])
            parity = int(parts[2]) if len(parts) > 2 else 0
        except (IndexError, ValueError):
            raise InputValidationError(f"cannot parse generator spec {chunk!r}", field="gens") from None
        if len(parts) > 3 or count < 0 or parity not in (0, 1):
            raise InputValidationError(f"cannot parse generator spec {chunk!r}", field="gens")
        labels = basis.setdefault(degree, [])
        for _ in range(count):
            label = f"g{degree}_{len(labels)}"
            labels.append(label)
            parities[label] = parity
    if not parities:
        raise InputValidationError("no generators given", field="gens")
    return GradedSpace(field, basis), parities


def load_operad(args: argparse.Namespace, option: str = "operad") -> Operad:
    """--operad 取内置名，--presentation 取内置表现名、内联 JSON 或文件"""
    window = parse_window(args)
    presentation = getattr(args, "presentation", None)
    name = getattr(args, option, None)
    if presentation:
        if presentation in PRESENTATIONS:
            P = PRESENTATIONS[presentation](parse_field(args))
        else:
            P = ser.decode_operad_presentation(read_document(presentation, "presentation"))
            explicit = args.char is not None or args.field_given
            if explicit and parse_field(args) != P.field_spec:
                raise FieldMismatchError(
                    f"presentation is over {P.field_spec.label}, job over {parse_field(args).label}", field="field")
        return presented_operad(P, window, name=f"presented:{presentation if presentation in PRESENTATIONS else 'json'}")
    if not name:
        raise InputValidationError(f"--{option} is required", field=option)
    return builtin(name, parse_field(args), window)


def load_lie(args: argparse.Namespace, field: FieldSpec) -> LiePresentation:
    kind = args.lie
    if kind == "heisenberg":
        return LiePresentation.heisenberg(field)
    if kind in ("abelian", "free"):
        V, parities = parse_gens(args.gens or "", field)
        if kind == "abelian":
            return LiePresentation.abelian(V, parities)
        return free_lie_presentation(V, args.max_degree, parities)
    L = ser.decode_lie_presentation(read_document(kind, "lie"))
    if (args.char is not None or args.field_given) and L.field != field:
        raise FieldMismatchError(f"Lie algebra is over {L.field.label}, job over {field.label}", field="field")
    return L


# ---------------------------------------------------------------------------
# 子命令
# ---------------------------------------------------------------------------

def cmd_dual(args: argparse.Namespace) -> str:
    O = load_operad(args)
    result = koszul_dual(O, with_structure=args.structure)
    rows = ser.arity_rows({n: dims for n, dims in result.dims.items() if n >= 2})
    document = {
        "operad": O.name,
        "field": O.field.to_json(),
        "dims": ser.encode_dims(result.dims),
        "concentrated": {str(n): d for n, d in result.concentrated.items()},
    }
    return ser.render_rows(ser.ARITY_HEADER, rows, args.format, document)


def cmd_compose(args: argparse.Namespace) -> str:
    window = parse_window(args)
    F = parse_field(args)
    left = builtin(args.left, F, window).underlying
    right = builtin(args.right, F, window).underlying
    composite = compose(left, right, window)
    table = composite.dims()
    if args.format == "json":
        return ser.dumps(ser.encode_symseq(composite) if args.full else {
            "left": args.left, "right": args.right, "field": F.to_json(), "dims": ser.encode_dims(table),
        })
    return ser.render_rows(ser.ARITY_HEADER, ser.arity_rows(table), args.format)


def cmd_tower(args: argparse.Namespace) -> str:
    O = load_operad(args)
    report = truncation_tower(O, max_stage=args.stages)
    if args.format == "json":
        document = report.model_dump()
        document["lesConsistent"] = report.les_consistent
        document["concentration"] = report.concentration_report()
        return ser.dumps(document)
    stage = args.stage or report.stages[-1].stage
    chosen = [s for s in report.stages if s.stage == stage]
    if not chosen:
        raise InputValidationError(f"stage {stage} not computed", field="stage")
    output = ser.render_rows(ser.ARITY_HEADER, ser.arity_rows(chosen[0].dims), args.format)
    if not report.les_consistent:
        raise CommandFailed(output, "long exact sequence check failed")
    return output


def cmd_primitives(args: argparse.Namespace) -> str:
    F = parse_field(args)
    V, parities = parse_gens(args.gens, F)
    H = tensor_hopf(V, args.max_degree, parities)
    dims = primitive_dims(H)
    document = {"field": F.to_json(), "gens": args.gens, "maxDegree": args.max_degree,
                "primitives": {str(n): d for n, d in dims.items()}}
    return ser.render_rows(ser.DEGREE_HEADER, ser.degree_rows(dims), args.format, document)


def cmd_envelope(args: argparse.Namespace) -> str:
    F = parse_field(args)
    L = load_lie(args, F)
    U = enveloping(L, args.max_degree)
    dims = U.dims()
    if args.check_axioms:
        report = hopf_axioms(U)
        if not report.valid:
            raise CommandFailed(ser.dumps(report.model_dump()), "Hopf axioms fail")
    document = {"field": L.field.to_json(), "lie": ser.encode_lie_presentation(L),
                "dims": {str(n): d for n, d in dims.items()}}
    return ser.render_rows(ser.DEGREE_HEADER, ser.degree_rows(dims), args.format, document)


def cmd_mm_check(args: argparse.Namespace) -> str:
    F = parse_field(args)
    L = load_lie(args, F)
    report = milnor_moore_check(L, args.max_degree)
    if args.format == "json":
        document = report.model_dump()
        document["iso"] = report.iso
        document["primitivelyGenerated"] = report.primitively_generated
        return ser.dumps(document)
    header = ("degree", "lie", "primitives", "unit_rank", "iso")
    rows = [(r.degree, r.lie_dim, r.primitive_dim, r.unit_rank, str(r.unit_iso).lower()) for r in report.rows]
    return ser.render_rows(header, rows, args.format)


def cmd_norm(args: argparse.Namespace) -> str:
    F = parse_field(args)
    if args.symseq:
        X = ser.decode_symseq(read_document(args.symseq, "symseq"))
        targets = [(n, comp) for n, comp in X.items() if n >= 2]
    else:
        if args.arity < 1:
            raise InputValidationError("arity must be >= 1", field="arity")
        targets = [(args.arity, REPRESENTATIONS[args.rep](F, args.arity))]
    header = ("arity", "coinvariants", "invariants", "is_iso")
    rows = []
    for n, comp in targets:
        result = norm_map(comp)
        rows.append((n, result.coinvariant_dim, result.invariant_dim, str(result.is_iso).lower()))
    document = [dict(zip(header, (n, c, i, flag == "true"))) for n, c, i, flag in rows]
    return ser.render_rows(header, rows, args.format, document)


def cmd_double_dual(args: argparse.Namespace) -> str:
    O = load_operad(args)
    report = double_dual_check(O)
    if args.format == "json":
        document = report.model_dump()
        document["valid"] = report.valid
        output = ser.dumps(document)
    else:
        header = ("arity", "expected", "actual", "characters")
        rows = [
            (a.arity, _dims_text(a.expected), _dims_text(a.actual), str(a.characters_match).lower())
            for a in report.arities
        ]
        output = ser.render_rows(header, rows, args.format)
    if not report.valid:
        raise CommandFailed(output, "double dual differs from the operad")
    return output


def cmd_check(args: argparse.Namespace) -> str:
    O = load_operad(args)
    report = check_operad(O)
    document = report.model_dump()
    document["valid"] = report.valid
    output = ser.dumps(document) if args.format == "json" else f"{O.name}: {report.summary()}\n"
    if not report.valid:
        raise CommandFailed(output, "operad axioms fail")
    return output


def _dims_text(dims: Dict[int, int]) -> str:
    return " ".join(f"{d}:{v}" for d, v in sorted(dims.items())) or "0"


COMMANDS: Dict[str, Callable[[argparse.Namespace], str]] = {
    "dual": cmd_dual,
    "compose": cmd_compose,
    "tower": cmd_tower,
    "primitives": cmd_primitives,
    "envelope": cmd_envelope,
    "mm-check": cmd_mm_check,
    "norm": cmd_norm,
    "double-dual": cmd_double_dual,
    "check": cmd_check,
}


# ---------------------------------------------------------------------------
# 参数定义
# ---------------------------------------------------------------------------

class _FieldAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.field_given = True


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--field", default="q", action=_FieldAction, help="q | p | Fp | GF(p)")
    parser.add_argument("--char", type=int, default=None, help="素域特征，等价于 --field p")
    parser.add_argument("--max-arity", type=int, default=5)
    parser.add_argument("--min-deg", type=int, default=-16)
    parser.add_argument("--max-deg", type=int, default=16)
    parser.add_argument("--format", choices=("json", "csv", "table"), default="table")
    parser.set_defaults(field_given=False)


def _operad_inputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--operad", help=f"内置算子 {', '.join(BUILTIN_NAMES)}")
    parser.add_argument("--presentation", help=f"内置表现 {', '.join(PRESENTATIONS)}，或 JSON / 文件")


def _lie_inputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lie", default="heisenberg", help="heisenberg | abelian | free | JSON / 文件")
    parser.add_argument("--gens", help='abelian / free 的生成元 "deg:count[:parity]"')
    parser.add_argument("--max-degree", type=int, default=5)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="py-operad", description="精确算术的算子、Koszul 对偶与 Hopf 代数计算")
    parser.add_argument("--seed-corpus", metavar="DIR", help="运行目录中的黄金表用例")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("dual", help="Koszul 对偶 triv ∘_O triv 的维数")
    _common(p)
    _operad_inputs(p)
    p.add_argument("--no-structure", dest="structure", action="store_false", help="只算维数")

    p = sub.add_parser("compose", help="复合积的维数")
    _common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--full", action="store_true", help="json 时输出完整的对称序列")

    p = sub.add_parser("tower", help="截断塔 τ_m(O) ∘_O triv")
    _common(p)
    _operad_inputs(p)
    p.add_argument("--stages", type=int, default=2)
    p.add_argument("--stage", type=int, default=None, help="csv / table 输出的层")

    p = sub.add_parser("primitives", help="张量代数 T(V) 的本原元维数")
    _common(p)
    p.add_argument("--gens", required=True, help='"deg:count[:parity]"，逗号分隔')
    p.add_argument("--max-degree", type=int, required=True)

    p = sub.add_parser("envelope", help="泛包络代数的维数")
    _common(p)
    _lie_inputs(p)
    p.add_argument("--check-axioms", action="store_true")

    p = sub.add_parser("mm-check", help="Milnor–Moore 检查")
    _common(p)
    _lie_inputs(p)

    p = sub.add_parser("norm", help="范数映射是否可逆")
    _common(p)
    p.add_argument("--rep", choices=tuple(REPRESENTATIONS), default="regular")
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--symseq", help="对称序列 JSON / 文件；对每个元数 ≥ 2 计算")

    p = sub.add_parser("double-dual", help="双重对偶检查")
    _common(p)
    _operad_inputs(p)

    p = sub.add_parser("check", help="验证算子公理")
    _common(p)
    _operad_inputs(p)
    return parser


# ---------------------------------------------------------------------------
# 执行
# ---------------------------------------------------------------------------

def execute(argv: Sequence[str]) -> Tuple[int, str]:
    """
    执行一次命令，返回 (退出码, stdout 内容)；诊断写到 stderr
    """
    try:
        args = build_parser().parse_args(list(argv))
        if args.seed_corpus:
            return run_corpus(Path(args.seed_corpus))
        if not args.command:
            raise InputValidationError("a command is required", field="command")
        return EXIT_OK, COMMANDS[args.command](args)
    except CommandFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AXIOM, exc.output
    except AxiomViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AXIOM, ""
    except InputValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT, ""
    except EngineError as exc:
        logger.exception("计算失败", error=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AXIOM, ""


def run_corpus(directory: Path) -> Tuple[int, str]:
    """
    黄金表：目录中每个 *.json 为 {"name", "argv", "exit"(缺省 0), "stdout" 或 "rows"}

    rows 与 csv 输出逐行比较（不含表头）。
    """
    if not directory.is_dir():
        raise InputValidationError(f"no such directory {str(directory)!r}", field="seed-corpus")
    lines = []
    failed = 0
    for path in sorted(directory.glob("*.json")):
        case = ser.loads(path.read_text(encoding="utf-8"))
        name = case.get("name", path.stem)
        code, output = execute(case["argv"])
        ok = code == case.get("exit", EXIT_OK)
        if "stdout" in case:
            ok = ok and output == case["stdout"]
        if "rows" in case:
            got = [line for line in output.splitlines()[1:] if line]
            ok = ok and got == [",".join(str(x) for x in row) for row in case["rows"]]
        failed += not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}")
        logger.info("黄金表用例", case=name, ok=ok)
    lines.append(f"{len(lines) - failed}/{len(lines)} passed")
    return (EXIT_OK if not failed else EXIT_AXIOM), "\n".join(lines) + "\n"


def run(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    init_logging(settings.log_level, settings.log_file)
    code, output = execute(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(output)
    sys.stdout.flush()
    return code


def main() -> None:
    sys.exit(run())
