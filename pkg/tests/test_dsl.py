import json

import pytest
from hypothesis import given, strategies as st

from polycirc.circuit import ADD, COPY, IDENTITY, MUL, Par, Seq, const
from polycirc.dsl import (
    decode_file,
    decode_json,
    dump_circuits,
    encode_file,
    encode_json,
    load_circuits,
    parse_dsl,
    render_dsl,
)
from polycirc.errors import ConstOutOfRange, DslSyntaxError, ShapeMismatch, UnknownName
from polycirc.semiring import make_semiring
from polycirc.verify import builtin_extension

from conftest import circuits, finite_semirings


def test_parse_sequence_and_tensor():
    assert parse_dsl("let f = copy ; add")["f"] == Seq(COPY, ADD)
    assert parse_dsl("let f = id * id ; add")["f"] == Seq(Par(IDENTITY, IDENTITY), ADD)
    assert parse_dsl("let f = (copy ; mul) * const(2) ; add")["f"] == Seq(Par(Seq(COPY, MUL), const(2)), ADD)


def test_parse_references_and_comments():
    program = """
    # square, then multiply
    let sq = copy ; mul
    let f = sq * id ; mul   # x^2 * y
    """
    defs = parse_dsl(program)
    assert list(defs) == ["sq", "f"]
    assert defs["f"] == Seq(Par(Seq(COPY, MUL), IDENTITY), MUL)


@pytest.mark.parametrize(
    "program",
    ["", "let f = copy ; ;", "let f = (copy", "let add = id", "f = id", "let f = id $", "let f = id let f = id"],
)
def test_syntax_errors(program):
    with pytest.raises(DslSyntaxError):
        parse_dsl(program)


def test_syntax_error_position():
    with pytest.raises(DslSyntaxError) as err:
        parse_dsl("let f = copy ; ;")
    assert err.value.position == 15


def test_unknown_name():
    with pytest.raises(UnknownName):
        parse_dsl("let f = g ; add")


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        parse_dsl("let f = add ; add")


def test_constant_range():
    assert parse_dsl("let f = const(3)")["f"] == const(3)
    with pytest.raises(ConstOutOfRange):
        parse_dsl("let f = const(3)", make_semiring("zmod:3"))


def test_render():
    assert render_dsl(Seq(Par(IDENTITY, const(2)), MUL)) == "(id * const(2)) ; mul"
    assert render_dsl(Seq(Seq(COPY, MUL), COPY)) == "(copy ; mul) ; copy"


@given(finite_semirings.flatmap(lambda d: circuits(d, max_arity=3, max_gens=10, allow_compare=True)))
def test_render_reparses_to_same_circuit(c):
    assert parse_dsl(f"let f = {render_dsl(c)}")["f"] == c


@given(finite_semirings.flatmap(lambda d: circuits(d, max_arity=3, max_gens=10, allow_compare=True)))
def test_json_reparses_to_same_circuit(c):
    data = encode_json(c)
    assert decode_json(data) == c
    assert encode_json(decode_json(data)) == data


def test_json_nodes():
    node = json.loads(encode_json(Seq(const(1), COPY)))
    assert node == {"node": "seq", "f": {"node": "gen", "tag": "const", "value": 1}, "g": {"node": "gen", "tag": "copy"}}
    with pytest.raises(ValueError):
        decode_json(b'{"node": "gen", "tag": "frobnicate"}')


def test_circuit_file():
    data = encode_file("zmod:3", {"f": Seq(COPY, ADD), "g": MUL})
    semiring, defs = decode_file(data)
    assert semiring == "zmod:3"
    assert defs == {"f": Seq(COPY, ADD), "g": MUL}


def test_extension_generators_are_not_serializable():
    g = builtin_extension("square-change", make_semiring("zmod:3")).generator
    with pytest.raises(ValueError):
        render_dsl(g)
    with pytest.raises(ValueError):
        encode_json(g)


def test_load_circuits(tmp_path):
    dsl_path = tmp_path / "f.dsl"
    dsl_path.write_text("let f = copy ; add\n")
    json_path = tmp_path / "f.json"
    json_path.write_bytes(dump_circuits("zmod:2", load_circuits(str(dsl_path))))
    assert load_circuits(str(json_path)) == {"f": Seq(COPY, ADD)}
    assert load_circuits(str(json_path), fmt="json") == load_circuits(str(dsl_path), fmt="dsl")


@pytest.mark.parametrize("node", ['"add"', "[1, 2]", "null"])
def test_non_object_nodes(node):
    with pytest.raises(ValueError):
        decode_json(node.encode())
    with pytest.raises(ValueError):
        decode_file(('{"semiring": "zmod:2", "circuits": {"f": %s}}' % node).encode())
