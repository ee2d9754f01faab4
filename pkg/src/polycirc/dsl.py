""" Textual DSL and JSON encoding of circuits.

Grammar (";" is sequential composition, "*" is tensor, "*" binds tighter):

    program := def+            def := "let" NAME "=" expr
    expr    := term (";" term)*
    term    := factor ("*" factor)*
    factor  := NAME | GEN | "(" expr ")"
    GEN     := add | zero | mul | one | copy | discard | id | swap | eq | neg | const(UINT)

A "#" starts a comment running to the end of the line.
"""
import json
import logging
import os
import re
from typing import Dict, List, Optional, Tuple

from .circuit import Circuit, Gen, Par, Seq, Tag, compose, const, tensor
from .errors import ConstOutOfRange, DslSyntaxError, ShapeMismatch, UnknownName
from .semiring import SemiringDesc

logger = logging.getLogger(__name__)

_TOKEN = re.compile(
    r"(?P<skip>\s+|#[^\n]*)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[=;*()])"
)
_KEYWORD_TAGS = {tag.value: tag for tag in Tag if tag not in (Tag.CONST, Tag.EXT)}
RESERVED = set(_KEYWORD_TAGS) | {"let", "const"}


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise DslSyntaxError(position, f"unexpected character {text[position]!r}")
        kind = match.lastgroup
        if kind != "skip":
            tokens.append((kind, match.group(kind), position))
        position = match.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, desc: Optional[SemiringDesc]):
        self.tokens = _tokenize(text)
        self.index = 0
        self.desc = desc
        self.definitions: Dict[str, Circuit] = {}

    @property
    def current(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind: str, value: str = None):
        token_kind, token_value, position = self.current
        if token_kind != kind or (value is not None and token_value != value):
            wanted = value if value is not None else kind
            found = token_value or "end of input"
            raise DslSyntaxError(position, f"expected {wanted!r}, found {found!r}")
        return self.advance()

    def program(self) -> Dict[str, Circuit]:
        if self.current[0] == "eof":
            raise DslSyntaxError(0, "a program needs at least one definition")
        while self.current[0] != "eof":
            self.expect("name", "let")
            _, name, position = self.expect("name")
            if name in RESERVED:
                raise DslSyntaxError(position, f"{name!r} is reserved")
            if name in self.definitions:
                raise DslSyntaxError(position, f"{name!r} is already defined")
            self.expect("sym", "=")
            self.definitions[name] = self.expr()
        return self.definitions

    def expr(self) -> Circuit:
        circuit = self.term()
        while self.current[:2] == ("sym", ";"):
            position = self.advance()[2]
            right = self.term()
            try:
                circuit = compose(circuit, right)
            except ShapeMismatch as err:
                raise ShapeMismatch(f"position {position}: {err}", err.left, err.right)
        return circuit

    def term(self) -> Circuit:
        circuit = self.factor()
        while self.current[:2] == ("sym", "*"):
            self.advance()
            circuit = tensor(circuit, self.factor())
        return circuit

    def factor(self) -> Circuit:
        kind, value, position = self.current
        if (kind, value) == ("sym", "("):
            self.advance()
            circuit = self.expr()
            self.expect("sym", ")")
            return circuit
        if kind != "name":
            raise DslSyntaxError(position, f"expected a circuit, found {value or 'end of input'!r}")
        self.advance()
        if value == "const":
            self.expect("sym", "(")
            _, number, number_position = self.expect("num")
            self.expect("sym", ")")
            if self.desc is not None:
                try:
                    self.desc.check_element(int(number))
                except ConstOutOfRange as err:
                    raise ConstOutOfRange(f"position {number_position}: {err}")
            return const(int(number))
        if value in _KEYWORD_TAGS:
            return Gen(_KEYWORD_TAGS[value])
        if value == "let":
            raise DslSyntaxError(position, "unexpected 'let' inside an expression")
        if value not in self.definitions:
            raise UnknownName(f"position {position}: {value!r} is not defined")
        return self.definitions[value]


def parse_dsl(text: str, desc: SemiringDesc = None) -> Dict[str, Circuit]:
    """Parses a DSL program into named circuits, in definition order.

    Args:
        text (str): Program text.
        desc (SemiringDesc): If given, constants are range-checked against it.

    Returns:
        Dict[str, Circuit]: Definitions by name.
    """
    return _Parser(text, desc).program()


def render_dsl(circuit: Circuit, top: bool = True) -> str:
    """Renders a circuit as a DSL expression that reparses to an equal circuit."""
    if isinstance(circuit, Gen):
        if circuit.tag == Tag.EXT:
            raise ValueError(f"Extension generator {circuit.ext.name!r} has no DSL form.")
        if circuit.tag == Tag.CONST:
            return f"const({circuit.value})"
        return circuit.tag.value
    symbol = ";" if isinstance(circuit, Seq) else "*"
    text = f"{render_dsl(circuit.f, False)} {symbol} {render_dsl(circuit.g, False)}"
    return text if top else f"({text})"


def render_program(circuits: Dict[str, Circuit]) -> str:
    return "".join(f"let {name} = {render_dsl(c)}\n" for name, c in circuits.items())


def to_node(circuit: Circuit) -> dict:
    if isinstance(circuit, Gen):
        if circuit.tag == Tag.EXT:
            raise ValueError(f"Extension generator {circuit.ext.name!r} has no JSON form.")
        node = {"node": "gen", "tag": circuit.tag.value}
        if circuit.tag == Tag.CONST:
            node["value"] = circuit.value
        return node
    kind = "seq" if isinstance(circuit, Seq) else "par"
    return {"node": kind, "f": to_node(circuit.f), "g": to_node(circuit.g)}


def from_node(node: dict, desc: SemiringDesc = None) -> Circuit:
    if not isinstance(node, dict):
        raise ValueError(f"A circuit node must be a JSON object, got {type(node).__name__}.")
    kind = node.get("node")
    if kind == "gen":
        tag = node.get("tag")
        if tag == Tag.CONST.value:
            value = node.get("value")
            if not isinstance(value, int):
                raise ValueError("A const node needs an integer 'value'.")
            if desc is not None:
                desc.check_element(value)
            return const(value)
        if tag not in _KEYWORD_TAGS:
            raise ValueError(f"Unknown generator tag {tag!r}.")
        return Gen(_KEYWORD_TAGS[tag])
    if kind == "seq":
        return compose(from_node(node["f"], desc), from_node(node["g"], desc))
    if kind == "par":
        return tensor(from_node(node["f"], desc), from_node(node["g"], desc))
    raise ValueError(f"Unknown node kind {kind!r}.")


def encode_json(circuit: Circuit) -> bytes:
    return json.dumps(to_node(circuit), sort_keys=True).encode("utf-8")


def decode_json(data: bytes, desc: SemiringDesc = None) -> Circuit:
    return from_node(json.loads(data), desc)


def encode_file(semiring_id: str, circuits: Dict[str, Circuit]) -> bytes:
    """Circuit file: {"semiring": id, "circuits": {name: node}}."""
    payload = {
        "semiring": semiring_id,
        "circuits": {name: to_node(c) for name, c in circuits.items()},
    }
    return json.dumps(payload, indent=2).encode("utf-8")


def decode_file(data: bytes, desc: SemiringDesc = None) -> Tuple[str, Dict[str, Circuit]]:
    payload = json.loads(data)
    if "circuits" not in payload or "semiring" not in payload:
        raise ValueError("A circuit file needs 'semiring' and 'circuits' keys.")
    circuits = {name: from_node(node, desc) for name, node in payload["circuits"].items()}
    return payload["semiring"], circuits


def detect_format(path: str, fmt: str = None) -> str:
    if fmt is not None:
        return fmt
    return "json" if os.path.splitext(path)[1].lower() == ".json" else "dsl"


def load_circuits(path: str, desc: SemiringDesc = None, fmt: str = None) -> Dict[str, Circuit]:
    """Loads named circuits from a .dsl or .json file."""
    fmt = detect_format(path, fmt)
    with open(path, "rb") as f:
        data = f.read()
    if fmt == "json":
        semiring_id, circuits = decode_file(data, desc)
        if desc is not None and semiring_id != desc.id:
            logger.warning(f"{path} was written for {semiring_id}, evaluating under {desc.id}")
    else:
        circuits = parse_dsl(data.decode("utf-8"), desc)
    logger.info(f"loaded {len(circuits)} circuit(s) from {path}")
    return circuits


def dump_circuits(semiring_id: str, circuits: Dict[str, Circuit], fmt: str = "json") -> bytes:
    if fmt == "json":
        return encode_file(semiring_id, circuits)
    return render_program(circuits).encode("utf-8")
