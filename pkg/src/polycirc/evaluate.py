""" Semantics of circuits as functions on tuples of semiring elements."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .circuit import Circuit, Gen, Par, Seq, Tag
from .config import get_budget
from .errors import BudgetExceeded, ShapeMismatch, UnsupportedGenerator
from .semiring import Element, SemiringDesc

logger = logging.getLogger(__name__)

Columns = List[np.ndarray]


def _eval_gen(desc: SemiringDesc, gen: Gen, columns: Columns, n_rows: int) -> Columns:
    tag = gen.tag
    if tag == Tag.IDENTITY:
        return columns
    if tag == Tag.ADD:
        return [desc.vadd(columns[0], columns[1])]
    if tag == Tag.MUL:
        return [desc.vmul(columns[0], columns[1])]
    if tag == Tag.ZERO:
        return [desc.full(n_rows, desc.zero)]
    if tag == Tag.ONE:
        return [desc.full(n_rows, desc.one)]
    if tag == Tag.CONST:
        return [desc.full(n_rows, desc.check_element(gen.value))]
    if tag == Tag.COPY:
        return [columns[0], columns[0]]
    if tag == Tag.DISCARD:
        return []
    if tag == Tag.TWIST:
        return [columns[1], columns[0]]
    if tag == Tag.COMPARE:
        return [desc.vcompare(columns[0], columns[1])]
    if tag == Tag.NEGATE:
        if not desc.has_neg:
            raise UnsupportedGenerator(f"neg is not available over {desc.id}, which has no negation.")
        return [desc.vneg(columns[0])]
    if tag == Tag.EXT:
        return gen.ext.apply_batch(desc, columns, n_rows)
    raise UnsupportedGenerator(f"Unknown generator {tag!r}.")


def eval_columns(desc: SemiringDesc, circuit: Circuit, columns: Columns, n_rows: int) -> Columns:
    """Evaluates a circuit on wire columns; each column holds one wire for every row."""
    if isinstance(circuit, Gen):
        return _eval_gen(desc, circuit, columns, n_rows)
    if isinstance(circuit, Seq):
        return eval_columns(desc, circuit.g, eval_columns(desc, circuit.f, columns, n_rows), n_rows)
    split = circuit.f.arity
    return eval_columns(desc, circuit.f, columns[:split], n_rows) + eval_columns(
        desc, circuit.g, columns[split:], n_rows
    )


def evaluate_batch(desc: SemiringDesc, circuit: Circuit, inputs: np.ndarray) -> np.ndarray:
    """Evaluates a circuit on every row of an (N, arity) array of element codes.

    Args:
        desc (SemiringDesc): Semiring giving the generator semantics.
        circuit (Circuit): Circuit to run.
        inputs (np.ndarray): One input tuple per row.

    Returns:
        np.ndarray: (N, coarity) array of outputs, row-aligned with inputs.
    """
    inputs = np.asarray(inputs, dtype=desc.dtype)
    if inputs.ndim != 2 or inputs.shape[1] != circuit.arity:
        raise ShapeMismatch(
            f"Expected inputs of width {circuit.arity}, got array of shape {inputs.shape}."
        )
    n_rows = inputs.shape[0]
    columns = [inputs[:, i] for i in range(circuit.arity)]
    outputs = eval_columns(desc, circuit, columns, n_rows)
    if not outputs:
        return np.zeros((n_rows, 0), dtype=desc.dtype)
    return np.stack([np.asarray(col, dtype=desc.dtype) for col in outputs], axis=1)


def evaluate(desc: SemiringDesc, circuit: Circuit, x: Sequence[Element]) -> Tuple[Element, ...]:
    if len(x) != circuit.arity:
        raise ShapeMismatch(f"Circuit of shape {circuit.shape} applied to {len(x)} inputs.")
    row = [desc.check_element(v) for v in x]
    outputs = evaluate_batch(desc, circuit, np.array([row], dtype=desc.dtype).reshape(1, len(row)))
    return tuple(int(v) for v in outputs[0])


def all_inputs(desc: SemiringDesc, arity: int, budget: int = None) -> np.ndarray:
    """All tuples of carrier elements in lexicographic order of codes, as an (k^arity, arity) array."""
    desc.require_finite()
    budget = get_budget(budget)
    n_rows = desc.size ** arity
    if n_rows > budget:
        raise BudgetExceeded(
            f"{desc.size}^{arity} = {n_rows} input tuples exceed the budget of {budget}."
        )
    codes = np.arange(n_rows, dtype=np.int64)
    rows = np.empty((n_rows, arity), dtype=np.int64)
    for i in reversed(range(arity)):
        codes, rows[:, i] = np.divmod(codes, desc.size)
    return rows


@dataclass
class FunctionTable:
    """The graph of a finite function S^arity -> S^coarity, rows in lexicographic input order."""

    arity: int
    coarity: int
    semiring_id: str
    inputs: np.ndarray
    outputs: np.ndarray

    def __len__(self):
        return self.inputs.shape[0]

    def rows(self) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        return [
            (tuple(int(v) for v in x), tuple(int(v) for v in y))
            for x, y in zip(self.inputs, self.outputs)
        ]

    def to_frame(self) -> pd.DataFrame:
        data = {f"x{i}": self.inputs[:, i] for i in range(self.arity)}
        data.update({f"y{j}": self.outputs[:, j] for j in range(self.coarity)})
        return pd.DataFrame(data, index=range(len(self)))

    def to_csv(self, path_or_buf=None):
        return self.to_frame().to_csv(path_or_buf, index=False)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, semiring_id: str) -> "FunctionTable":
        x_cols = [c for c in frame.columns if c.startswith("x")]
        y_cols = [c for c in frame.columns if c.startswith("y")]
        expected = [f"x{i}" for i in range(len(x_cols))] + [f"y{j}" for j in range(len(y_cols))]
        if list(frame.columns) != expected:
            raise ValueError(f"Function table header must be {expected}, got {list(frame.columns)}.")
        return cls(
            arity=len(x_cols),
            coarity=len(y_cols),
            semiring_id=semiring_id,
            inputs=frame[x_cols].to_numpy(dtype=np.int64).reshape(len(frame), len(x_cols)),
            outputs=frame[y_cols].to_numpy(dtype=np.int64).reshape(len(frame), len(y_cols)),
        )

    @classmethod
    def read_csv(cls, path_or_buf, semiring_id: str) -> "FunctionTable":
        return cls.from_frame(pd.read_csv(path_or_buf, dtype=np.int64), semiring_id)


def function_table(desc: SemiringDesc, circuit: Circuit, budget: int = None) -> FunctionTable:
    inputs = all_inputs(desc, circuit.arity, budget)
    outputs = evaluate_batch(desc, circuit, inputs)
    logger.debug(f"tabulated {circuit.shape} circuit over {desc.id}: {len(inputs)} rows")
    return FunctionTable(circuit.arity, circuit.coarity, desc.id, inputs, outputs.astype(np.int64))


@dataclass
class Equality:
    """Outcome of an extensional comparison; truthy when the circuits agree everywhere."""

    equal: bool
    cases: int
    counterexample: Optional[Tuple[int, ...]] = None
    lhs: Optional[Tuple[int, ...]] = None
    rhs: Optional[Tuple[int, ...]] = None

    def __bool__(self):
        return self.equal


def compare_on(desc: SemiringDesc, c1: Circuit, c2: Circuit, inputs: np.ndarray) -> Equality:
    """Compares two circuits on the given rows and reports the first differing one."""
    if c1.shape != c2.shape:
        raise ShapeMismatch(f"Cannot compare {c1.shape} with {c2.shape}.", c1.shape, c2.shape)
    out1 = evaluate_batch(desc, c1, inputs)
    out2 = evaluate_batch(desc, c2, inputs)
    bad = np.nonzero((out1 != out2).any(axis=1))[0] if out1.shape[1] else np.array([], dtype=int)
    if bad.size == 0:
        return Equality(True, len(inputs))
    i = int(bad[0])
    as_tuple = lambda row: tuple(int(v) for v in row)
    return Equality(False, len(inputs), as_tuple(inputs[i]), as_tuple(out1[i]), as_tuple(out2[i]))


def extensionally_equal(desc: SemiringDesc, c1: Circuit, c2: Circuit, budget: int = None) -> Equality:
    if c1.shape != c2.shape:
        raise ShapeMismatch(f"Cannot compare {c1.shape} with {c2.shape}.", c1.shape, c2.shape)
    return compare_on(desc, c1, c2, all_inputs(desc, c1.arity, budget))
