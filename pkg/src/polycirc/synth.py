""" Circuits for arbitrary finite functions, built from the comparator or from Fermat's little theorem."""
import logging

import numpy as np
from tqdm import tqdm

from .circuit import (
    ADD,
    COMPARE,
    IDENTITY,
    MUL,
    ONE,
    ZERO,
    Circuit,
    Par,
    Seq,
    add_n,
    add_tree,
    const,
    const_tuple,
    copy_n,
    copy_tree,
    discard_n,
    id_n,
    mul_tree,
    par_all,
    power,
    seq_all,
    zero_n,
)
from .errors import IncompleteTable, NotPrime
from .evaluate import FunctionTable, all_inputs
from .semiring import SemiringDesc, is_prime

logger = logging.getLogger(__name__)


def copy_blocks(m: int, k: int) -> Circuit:
    """m -> k*m, k side-by-side copies of the whole input tuple."""
    if k == 0:
        return discard_n(m)
    if k == 1:
        return id_n(m)
    return seq_all([copy_n(m), Par(copy_blocks(m, (k + 1) // 2), copy_blocks(m, k // 2))])


def sum_blocks(n: int, k: int) -> Circuit:
    """k*n -> n, componentwise sum of k tuples of width n."""
    if k == 0:
        return zero_n(n)
    if k == 1:
        return id_n(n)
    return seq_all([Par(sum_blocks(n, (k + 1) // 2), sum_blocks(n, k // 2)), add_n(n)])


def equals_const(value: int) -> Circuit:
    """1 -> 1, x |-> 1 if x == value else 0."""
    return Seq(Par(const(value), IDENTITY), COMPARE)


def scale_by(value: int) -> Circuit:
    """1 -> 1, x |-> x * value."""
    return Seq(Par(IDENTITY, const(value)), MUL)


def _row_circuit(row, outputs) -> Circuit:
    indicator = seq_all([par_all([equals_const(int(s)) for s in row]), mul_tree(len(row))])
    return seq_all([indicator, copy_tree(len(outputs)), par_all([scale_by(int(v)) for v in outputs])])


def synth_from_table(desc: SemiringDesc, table: FunctionTable, budget: int = None, quiet: bool = True) -> Circuit:
    """Compiles a complete function table into sum_s eq(s, x) * f(s).

    Args:
        desc (SemiringDesc): Finite carrier the table is written over.
        table (FunctionTable): One row per input tuple, in lexicographic order.
        budget (int): Maximum number of rows.
        quiet (bool): Hide the progress bar.

    Returns:
        Circuit: arity -> coarity circuit whose function table is exactly `table`.
    """
    expected = all_inputs(desc, table.arity, budget)
    if table.inputs.shape != expected.shape or not np.array_equal(table.inputs, expected):
        raise IncompleteTable(
            f"A table of arity {table.arity} over {desc.id} needs all {len(expected)} input rows "
            f"in lexicographic order, got {len(table)} rows."
        )
    for value in np.unique(table.outputs):
        desc.check_element(int(value))

    m, n = table.arity, table.coarity
    if m == 0:
        return const_tuple([int(v) for v in table.outputs[0]])
    if n == 0:
        return discard_n(m)

    rows = [
        _row_circuit(x, y)
        for x, y in tqdm(zip(table.inputs, table.outputs), total=len(table), desc="synth", disable=quiet)
    ]
    logger.info(f"synthesized {m}->{n} circuit from {len(rows)} rows over {desc.id}")
    return seq_all([copy_blocks(m, len(rows)), par_all(rows), sum_blocks(n, len(rows))])


def fermat_delta(p: int) -> Circuit:
    """1 -> 1, a |-> (p-1) * a^(p-1) + 1, which is 1 at 0 and 0 elsewhere over zp:p."""
    if not is_prime(p):
        raise NotPrime(f"The Fermat construction needs a prime, got {p}.")
    return seq_all([power(p - 1), scale_by(p - 1), Par(IDENTITY, ONE), ADD])


def fermat_compare(p: int) -> Circuit:
    """2 -> 1 comparator without eq: sum over s of delta(x1 + s) * delta(x2 + s)."""
    delta = fermat_delta(p)
    terms = []
    for s in range(p):
        shift = IDENTITY if s == 0 else Seq(Par(IDENTITY, const(s)), ADD)
        branch = seq_all([shift, delta])
        terms.append(Seq(Par(branch, branch), MUL))
    return seq_all([copy_blocks(2, p), par_all(terms), add_tree(p)])


def delta_circuit() -> Circuit:
    """1 -> 1, eq with one input capped by zero."""
    return Seq(Par(ZERO, IDENTITY), COMPARE)
