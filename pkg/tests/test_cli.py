import json
import os

import pytest

from polycirc.cli import parse_arguments, run
from polycirc.utils import load_args


@pytest.fixture
def circuit_file(tmp_path):
    def write(text, name="f.dsl"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def last_json_line(text):
    return json.loads(text.strip().splitlines()[-1])


def test_eval(circuit_file, capsys):
    path = circuit_file("let f = copy ; add\n")
    assert run(["eval", "--semiring", "zmod:2", "--circuit", path, "--input", "1"]) == 0
    assert capsys.readouterr().out == "0\n"


def test_eval_pretty_and_several_inputs(circuit_file, capsys):
    path = circuit_file("let f = mul\n")
    assert run(["eval", "--semiring", "zmod:5", "--circuit", path, "--input", "2,3", "--input", "4,4", "--pretty"]) == 0
    assert capsys.readouterr().out == "(2, 3) -> (1)\n(4, 4) -> (1)\n"


def test_rdiff_then_eval(circuit_file, tmp_path, capsys):
    path = circuit_file("let f = mul\n")
    out = str(tmp_path / "r.dsl")
    assert run(["rdiff", "--semiring", "zmod:5", "--circuit", path, "--format", "dsl", "--output", out]) == 0
    assert open(out).read().startswith("let f_reverse = ")
    assert run(["eval", "--semiring", "zmod:5", "--circuit", out, "--input", "2,3,1"]) == 0
    assert capsys.readouterr().out == "3,2\n"


def test_synth_round_trip(tmp_path, capsys):
    table = tmp_path / "xor.csv"
    table.write_text("x0,x1,y0\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n")
    synthesized = str(tmp_path / "xor.json")
    assert run(["synth", "--semiring", "zmod:2", "--table", str(table), "--output", synthesized]) == 0
    assert run(["table", "--semiring", "zmod:2", "--circuit", synthesized]) == 0
    assert capsys.readouterr().out.splitlines() == table.read_text().splitlines()


def test_normalize(circuit_file, capsys):
    path = circuit_file("let f = copy ; mul\n")
    assert run(["normalize", "--semiring", "zmod:3", "--circuit", path, "--pretty"]) == 0
    assert capsys.readouterr().out == "y0 = x0^2\n"


def test_verify_axioms(circuit_file, tmp_path, capsys):
    path = circuit_file("let f = (copy ; mul) * id ; add\n")
    output_dir = str(tmp_path / "run")
    assert run(["verify", "axioms", "--semiring", "zmod:3", "--circuit", path, "--output_dir", output_dir]) == 0
    report = json.loads(capsys.readouterr().out)
    assert {r["status"] for r in report.values()} == {"pass"}
    assert json.load(open(os.path.join(output_dir, "report.json"))) == report


def test_verify_extension_failure_is_reported(capsys):
    assert run(["verify", "extension", "--semiring", "zmod:3", "--extension", "square-change"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["additivity"] == {
        "status": "fail",
        "cases": 27,
        "counterexample": [0, 1, 1],
        "detail": "[1] != [2]",
    }


def test_verify_preservation_random(capsys):
    args = ["verify", "preservation", "--semiring", "zmod:2", "--random_pairs", "5", "--max_size", "6", "--quiet"]
    assert run(args) == 0
    assert json.loads(capsys.readouterr().out)["preservation"]["status"] == "pass"


def test_domain_error_exits_with_one(circuit_file, capsys):
    path = circuit_file("let f = const(7)\n")
    assert run(["eval", "--semiring", "zmod:3", "--circuit", path]) == 1
    error = last_json_line(capsys.readouterr().err)
    assert error["error"] == "ConstOutOfRange"


def test_unknown_semiring(circuit_file, capsys):
    path = circuit_file("let f = id\n")
    assert run(["eval", "--semiring", "zmod:1", "--circuit", path, "--input", "0"]) == 1
    assert last_json_line(capsys.readouterr().err)["error"] == "BadModulus"


def test_malformed_circuit_file(circuit_file, capsys):
    path = circuit_file('{"semiring": "zmod:2", "circuits": {"f": "add"}}', name="f.json")
    assert run(["check", "--circuit", path]) == 1
    assert last_json_line(capsys.readouterr().err)["error"] == "ValueError"


def test_large_modulus_is_a_domain_error(circuit_file, capsys):
    path = circuit_file("let f = id\n")
    assert run(["eval", "--semiring", "zmod:40000", "--circuit", path, "--input", "0"]) == 1
    assert last_json_line(capsys.readouterr().err)["error"] == "BadModulus"


def test_usage_errors_exit_with_two(circuit_file):
    path = circuit_file("let f = id\n")
    with pytest.raises(SystemExit) as err:
        parse_arguments(["eval", "--circuit", path])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        parse_arguments(["verify", "preservation", "--semiring", "zmod:2"])
    assert err.value.code == 2


def test_demo(capsys):
    assert run(["demo", "wrap-around", "--semiring", "zmod:3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert (report["sub_gradients"], report["update"]) == ([1, 1], 2)


def test_check(circuit_file, capsys):
    path = circuit_file("let sq = copy ; mul\nlet f = sq * id ; mul\n")
    assert run(["check", "--circuit", path]) == 0
    assert json.loads(capsys.readouterr().out) == {"sq": "1->1", "f": "2->1"}


def test_train(circuit_file, tmp_path, capsys):
    path = circuit_file("let f = mul\n")
    dataset = tmp_path / "data.csv"
    dataset.write_text("x0,y0\n1,1\n0,0\n")
    output_dir = str(tmp_path / "run")
    args = [
        "train", "--semiring", "zmod:2", "--circuit", path, "--dataset", str(dataset),
        "--params", "1", "--epochs", "2", "--param_init", "0", "--output_dir", output_dir,
    ]
    assert run(args) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["params"] == [1]
    assert payload["history"][-1]["accuracy"] == 1.0
    for name in ["loginfo.log", "args.json", "report.json"]:
        assert os.path.exists(os.path.join(output_dir, name))
    saved = load_args(os.path.join(output_dir, "args.json"))
    assert (saved.command, saved.semiring, saved.params) == ("train", "zmod:2", 1)
