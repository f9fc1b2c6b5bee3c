# -*- coding: utf-8 -*-
"""
命令行测试
"""

import json
from pathlib import Path

import pytest

from py_operad import FieldSpec, InputValidationError
from py_operad.cli import EXIT_AXIOM, EXIT_INPUT, EXIT_OK, execute, parse_gens

GOLDEN = Path(__file__).parent / "golden"

F2 = FieldSpec.prime(2)


class TestCommands:
    """子命令输出测试"""

    def test_dual_csv(self):
        """测试 Comm 的 Koszul 对偶维数表"""
        code, out = execute(["dual", "--operad", "comm-nu", "--max-arity", "4", "--field", "q", "--format", "csv"])
        assert code == EXIT_OK
        assert out == "arity,degree,dim\n2,1,1\n3,2,2\n4,3,6\n"

    def test_dual_json(self):
        """测试 JSON 输出可解析，且包含元数 1"""
        code, out = execute(["dual", "--operad", "comm", "--max-arity", "3", "--format", "json"])
        assert code == EXIT_OK
        document = json.loads(out)
        assert document["field"] == "Q"
        assert document["dims"] == {"1": {"0": 1}, "2": {"1": 1}, "3": {"2": 2}}
        assert document["concentrated"] == {"1": 0, "2": 1, "3": 2}

    def test_deterministic(self):
        """测试两次运行输出逐字节相同"""
        argv = ["dual", "--operad", "lie", "--max-arity", "4", "--format", "json"]
        assert execute(argv) == execute(argv)

    def test_compose_bell(self):
        """测试 Comm ∘ Comm 的维数为 Bell 数"""
        code, out = execute(["compose", "--left", "comm-nu", "--right", "comm-nu", "--max-arity", "4", "--format", "csv"])
        assert code == EXIT_OK
        assert out.splitlines()[1:] == ["1,0,1", "2,0,2", "3,0,5", "4,0,15"]

    def test_compose_full_json(self):
        """测试 --full 输出完整的对称序列"""
        code, out = execute(["compose", "--left", "comm", "--right", "ass", "--max-arity", "3",
                             "--format", "json", "--full"])
        assert code == EXIT_OK
        assert set(json.loads(out)["arities"]) == {"1", "2", "3"}

    def test_primitives_mod_two(self):
        """测试 𝔽₂ 上一个生成元的本原元维数，零也输出"""
        code, out = execute(["primitives", "--char", "2", "--gens", "1:1", "--max-degree", "8", "--format", "csv"])
        assert code == EXIT_OK
        assert out == "degree,dim\n1,1\n2,1\n3,0\n4,1\n5,0\n6,0\n7,0\n8,1\n"

    def test_primitives_json(self):
        """测试 JSON 输出记录域与生成元"""
        code, out = execute(["primitives", "--field", "F3", "--gens", "1:1", "--max-degree", "3", "--format", "json"])
        assert code == EXIT_OK
        document = json.loads(out)
        assert document["field"] == {"Fp": 3}
        assert document["primitives"] == {"1": 1, "2": 0, "3": 1}

    def test_envelope_heisenberg(self):
        """测试 Heisenberg 包络代数的维数并检查 Hopf 公理"""
        code, out = execute(["envelope", "--lie", "heisenberg", "--max-degree", "3", "--check-axioms", "--format", "csv"])
        assert code == EXIT_OK
        assert out == "degree,dim\n0,1\n1,2\n2,4\n3,6\n"

    def test_mm_check_mod_two(self):
        """测试 𝔽₂ 上交换李代数在 2 度多出本原元"""
        code, out = execute(["mm-check", "--char", "2", "--lie", "abelian", "--gens", "1:1",
                             "--max-degree", "4", "--format", "csv"])
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "degree,lie,primitives,unit_rank,iso"
        assert any(line.startswith("2,0,1,") and line.endswith(",false") for line in lines)

    def test_mm_check_rational(self):
        """测试 ℚ 上 JSON 报告给出同构"""
        code, out = execute(["mm-check", "--lie", "heisenberg", "--max-degree", "3", "--format", "json"])
        assert code == EXIT_OK
        document = json.loads(out)
        assert document["iso"] is True
        assert document["primitivelyGenerated"] is True

    @pytest.mark.parametrize("argv,row", [
        (["--char", "2", "--rep", "trivial", "--arity", "2"], "2,1,1,false"),
        (["--rep", "regular", "--arity", "3"], "3,1,1,true"),
        (["--char", "3", "--rep", "regular", "--arity", "3"], "3,1,1,true"),
    ])
    def test_norm(self, argv, row):
        """测试范数映射的可逆性"""
        code, out = execute(["norm", *argv, "--format", "csv"])
        assert code == EXIT_OK
        assert out.splitlines() == ["arity,coinvariants,invariants,is_iso", row]

    def test_tower(self):
        """测试截断塔输出最后一层，JSON 给出长正合列结果"""
        code, out = execute(["tower", "--operad", "comm", "--max-arity", "4", "--format", "csv"])
        assert code == EXIT_OK
        assert out.startswith("arity,degree,dim\n")
        code, out = execute(["tower", "--operad", "comm", "--max-arity", "4", "--format", "json"])
        assert code == EXIT_OK
        assert json.loads(out)["lesConsistent"] is True

    def test_double_dual(self):
        """测试双重对偶检查通过"""
        code, out = execute(["double-dual", "--operad", "comm", "--max-arity", "4", "--format", "json"])
        assert code == EXIT_OK
        assert json.loads(out)["valid"] is True

    def test_check(self):
        """测试公理检查的文本输出"""
        assert execute(["check", "--operad", "ass"]) == (EXIT_OK, "ass_nu: valid\n")
        assert execute(["check", "--presentation", "lie", "--max-arity", "4"]) == (EXIT_OK, "presented:lie: valid\n")

    def test_check_presentation_json(self):
        """测试内联 JSON 表现"""
        presentation = json.dumps({
            "generators": [{"label": "m", "arity": 2, "symmetry": "symmetric"}],
            "relations": [[
                {"tree": [[1, 2], 3], "vertexLabels": ["m", "m"]},
                {"tree": [1, [2, 3]], "vertexLabels": ["m", "m"], "coeff": -1},
            ]],
        })
        code, out = execute(["dual", "--presentation", presentation, "--max-arity", "4", "--format", "csv"])
        assert code == EXIT_OK
        assert out == "arity,degree,dim\n2,1,1\n3,2,2\n4,3,6\n"

    def test_presentation_without_field(self):
        """测试不写 field 的表现文档按 ℚ 计算"""
        presentation = json.dumps({"generators": [{"label": "m", "arity": 2, "symmetry": "symmetric"}]})
        code, out = execute(["check", "--presentation", presentation, "--max-arity", "3"])
        assert (code, out) == (EXIT_OK, "presented:json: valid\n")

    def test_primitives_two_generators_mod_two(self):
        """测试 𝔽₂ 上两个 1 度生成元：本原元维数为限制 Witt 数 2, 3, 2, 6"""
        code, out = execute(["primitives", "--char", "2", "--gens", "1:2", "--max-degree", "4", "--format", "csv"])
        assert code == EXIT_OK
        assert out == "degree,dim\n1,2\n2,3\n3,2\n4,6\n"


class TestErrors:
    """退出码与诊断测试"""

    @pytest.mark.parametrize("argv,field", [
        (["dual", "--operad", "comm", "--max-arity", "8"], "maxArity"),
        (["dual", "--operad", "poisson"], "operad"),
        (["dual", "--operad", "comm", "--min-deg", "-20", "--max-deg", "20"], "minDeg"),
        (["dual", "--operad", "comm", "--min-deg", "3", "--max-deg", "1"], "window"),
        (["dual"], "operad"),
        (["dual", "--presentation", "{not json"], "json"),
        (["primitives", "--gens", "1", "--max-degree", "3"], "gens"),
        (["primitives", "--gens", "1:1:2", "--max-degree", "3"], "gens"),
        (["frobnicate"], "argv"),
        ([], "command"),
        (["--seed-corpus", "/nonexistent/corpus"], "seed-corpus"),
    ])
    def test_input_errors(self, argv, field, capsys):
        """测试输入错误退出码为 2，stdout 为空，stderr 给出一行带字段名的诊断"""
        code, out = execute(argv)
        assert code == EXIT_INPUT
        assert out == ""
        err = capsys.readouterr().err
        assert err.startswith(f"error: {field}: ")
        assert err.count("\n") == 1

    def test_field_mismatch(self, capsys):
        """测试显式指定的域与表现文档不符"""
        presentation = json.dumps({"field": {"Fp": 3}, "generators": [{"label": "m", "arity": 2}]})
        code, _ = execute(["check", "--presentation", presentation, "--field", "q", "--max-arity", "3"])
        assert code == EXIT_INPUT
        assert "field" in capsys.readouterr().err

    @pytest.mark.parametrize("relation", [
        [{"tree": [[1, 2], 4], "vertexLabels": ["m", "m"]}],
        [{"tree": [[1, 2], 3], "vertexLabels": ["m", "m"]}, {"tree": [1, 2], "vertexLabels": ["m"]}],
    ])
    def test_bad_relations(self, relation, capsys):
        """测试关系不一致时退出码为 3"""
        presentation = json.dumps({"generators": [{"label": "m", "arity": 2}], "relations": [relation]})
        code, out = execute(["check", "--presentation", presentation, "--max-arity", "4"])
        assert code == EXIT_AXIOM
        assert out == ""
        assert capsys.readouterr().err.startswith("error: relation 0")


class TestParseGens:
    """生成元描述解析测试"""

    def test_labels_and_parities(self):
        """测试标签按度数编号，奇偶性缺省为 0"""
        V, parities = parse_gens("1:2, 2:1:1", F2)
        assert {n: list(V.basis(n)) for n in V.degrees} == {1: ["g1_0", "g1_1"], 2: ["g2_0"]}
        assert parities == {"g1_0": 0, "g1_1": 0, "g2_0": 1}

    @pytest.mark.parametrize("text", ["", "x:1", "1:-1", "1:1:0:0"])
    def test_invalid(self, text):
        """测试非法描述"""
        with pytest.raises(InputValidationError):
            parse_gens(text, F2)


class TestSeedCorpus:
    """黄金表测试"""

    def test_repository_corpus(self):
        """测试仓库自带的黄金表全部通过"""
        code, out = execute(["--seed-corpus", str(GOLDEN)])
        cases = len(list(GOLDEN.glob("*.json")))
        assert code == EXIT_OK, out
        assert out.splitlines()[-1] == f"{cases}/{cases} passed"

    def test_failing_case(self, tmp_path):
        """测试期望不符时报告 FAIL 且退出码为 3"""
        (tmp_path / "a.json").write_text(json.dumps({
            "name": "wrong-bell",
            "argv": ["compose", "--left", "comm", "--right", "comm", "--max-arity", "3", "--format", "csv"],
            "rows": [[1, 0, 1], [2, 0, 2], [3, 0, 6]],
        }), encoding="utf-8")
        (tmp_path / "b.json").write_text(json.dumps({
            "argv": ["check", "--operad", "comm"],
            "stdout": "comm_nu: valid\n",
        }), encoding="utf-8")
        code, out = execute(["--seed-corpus", str(tmp_path)])
        assert code == EXIT_AXIOM
        assert out.splitlines() == ["FAIL wrong-bell", "PASS b", "1/2 passed"]


if __name__ == "__main__":
    pytest.main([__file__])
