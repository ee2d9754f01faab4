""" Reverse differential combinator as a circuit-to-circuit pass, and the derivatives built on it.

For c : m -> n, reverse(c) : m + n -> m takes the base point x on its first m
wires and the output change on the last n, and returns the input change.
"""
import logging

from .circuit import (
    ADD,
    COPY,
    DISCARD,
    IDENTITY,
    MUL,
    NEGATE,
    TWIST,
    ZERO,
    Circuit,
    Gen,
    Par,
    Seq,
    Tag,
    copy_n,
    discard_n,
    id_n,
    par_all,
    permute,
    seq_all,
    swap_block,
    zero_n,
)
from .errors import SplitOutOfRange
from .evaluate import Equality, extensionally_equal
from .semiring import SemiringDesc

logger = logging.getLogger(__name__)

# (x1, x2, d) -> (x2 * d, x1 * d)
_REVERSE_MUL = seq_all([par_all([id_n(2), COPY]), permute([1, 2, 0, 3]), Par(MUL, MUL)])

_GENERATOR_RULES = {
    Tag.IDENTITY: Par(DISCARD, IDENTITY),
    Tag.TWIST: Par(discard_n(2), TWIST),
    Tag.COPY: Par(DISCARD, ADD),
    Tag.DISCARD: Seq(DISCARD, ZERO),
    Tag.ADD: Par(discard_n(2), COPY),
    Tag.ZERO: DISCARD,
    Tag.MUL: _REVERSE_MUL,
    Tag.ONE: DISCARD,
    Tag.CONST: DISCARD,
    # Straight-through: the comparator passes changes back like addition does.
    Tag.COMPARE: Par(discard_n(2), COPY),
    Tag.NEGATE: Par(DISCARD, NEGATE),
}


def _reverse_gen(gen: Gen) -> Circuit:
    if gen.tag == Tag.EXT:
        return gen.ext.reverse
    return _GENERATOR_RULES[gen.tag]


def reverse(circuit: Circuit) -> Circuit:
    """Builds R[c] by structural recursion.

    Args:
        circuit (Circuit): c of shape m -> n.

    Returns:
        Circuit: R[c] of shape m + n -> m.
    """
    if isinstance(circuit, Gen):
        return _reverse_gen(circuit)
    if isinstance(circuit, Seq):
        f, g = circuit.f, circuit.g
        m, n = f.arity, g.coarity
        # (x, d) -> (x, x, d) -> (x, f(x), d) -> (x, R[g](f(x), d)) -> R[f](x, R[g](f(x), d))
        return seq_all([
            par_all([copy_n(m), id_n(n)]),
            par_all([id_n(m), f, id_n(n)]),
            par_all([id_n(m), reverse(g)]),
            reverse(f),
        ])
    f, g = circuit.f, circuit.g
    # (x1, x2, d1, d2) -> (x1, d1, x2, d2)
    regroup = par_all([id_n(f.arity), swap_block(g.arity, f.coarity), id_n(g.coarity)])
    return seq_all([regroup, Par(reverse(f), reverse(g))])


def forward(circuit: Circuit) -> Circuit:
    """Forward derivative D[c] : 2m -> n, read off the change block of R[R[c]] at zero output change."""
    m, n = circuit.arity, circuit.coarity
    return seq_all([
        par_all([id_n(m), zero_n(n), id_n(m)]),
        reverse(reverse(circuit)),
        par_all([discard_n(m), id_n(n)]),
    ])


def partial(circuit: Circuit, split: int) -> Circuit:
    """Partial derivative in the inputs after `split`: ((x_A, x_B), db) -> D[c]((x_A, x_B), (0, db))."""
    if split < 0 or split > circuit.arity:
        raise SplitOutOfRange(f"Split {split} is outside 0..{circuit.arity}.")
    b = circuit.arity - split
    pad = par_all([id_n(circuit.arity), zero_n(split), id_n(b)])
    return seq_all([pad, forward(circuit)])


def is_linear(desc: SemiringDesc, circuit: Circuit, budget: int = None) -> Equality:
    """D[c](x, dx) == c(dx) everywhere. The result is truthy and carries a counterexample when false."""
    m = circuit.arity
    rhs = seq_all([par_all([discard_n(m), id_n(m)]), circuit])
    return extensionally_equal(desc, forward(circuit), rhs, budget)


def is_linear_in(desc: SemiringDesc, circuit: Circuit, split: int, budget: int = None) -> Equality:
    """D_B[c]((x_A, x_B), db) == c(x_A, db) everywhere, with B the inputs after `split`."""
    lhs = partial(circuit, split)
    b = circuit.arity - split
    rhs = seq_all([par_all([id_n(split), discard_n(b), id_n(b)]), circuit])
    return extensionally_equal(desc, lhs, rhs, budget)
