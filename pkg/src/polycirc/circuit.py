""" Shape-checked term IR for polynomial circuits.

A circuit is an immutable tree whose leaves are generators and whose inner
nodes are sequential composition (Seq, left-to-right diagram order) and
parallel composition (Par, top-to-bottom). Shapes are computed once at
construction, so an ill-typed composite can never exist.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator, List, Optional, Sequence

import numpy as np

from .errors import ShapeMismatch


class Tag(str, Enum):
    ADD = "add"
    ZERO = "zero"
    MUL = "mul"
    ONE = "one"
    COPY = "copy"
    DISCARD = "discard"
    IDENTITY = "id"
    TWIST = "swap"
    CONST = "const"
    COMPARE = "eq"
    NEGATE = "neg"
    # Generator added through verify.GeneratorExtension; never serialized.
    EXT = "ext"


GEN_SHAPES = {
    Tag.ADD: (2, 1),
    Tag.ZERO: (0, 1),
    Tag.MUL: (2, 1),
    Tag.ONE: (0, 1),
    Tag.COPY: (1, 2),
    Tag.DISCARD: (1, 0),
    Tag.IDENTITY: (1, 1),
    Tag.TWIST: (2, 2),
    Tag.CONST: (0, 1),
    Tag.COMPARE: (2, 1),
    Tag.NEGATE: (1, 1),
}


@dataclass(frozen=True)
class Shape:
    arity: int
    coarity: int

    def __post_init__(self):
        if self.arity < 0 or self.coarity < 0:
            raise ValueError(f"Negative shape {self.arity} -> {self.coarity}.")

    def __str__(self):
        return f"{self.arity}->{self.coarity}"


class Circuit:
    """Common interface of Gen, Seq and Par."""

    shape: Shape

    @property
    def arity(self) -> int:
        return self.shape.arity

    @property
    def coarity(self) -> int:
        return self.shape.coarity

    def __rshift__(self, other: "Circuit") -> "Circuit":
        return compose(self, other)

    def __matmul__(self, other: "Circuit") -> "Circuit":
        return tensor(self, other)

    def generators(self) -> Iterator["Gen"]:
        """Yields generator leaves in left-to-right order."""
        stack = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, Gen):
                yield node
            else:
                stack.append(node.g)
                stack.append(node.f)

    def uses(self, tag: Tag) -> bool:
        return any(gen.tag == tag for gen in self.generators())

    def size(self) -> int:
        return sum(1 for _ in self.generators())


@dataclass(frozen=True)
class Gen(Circuit):
    tag: Tag
    value: Optional[int] = None
    ext: Optional[Any] = None
    shape: Shape = field(init=False, repr=False, compare=False)
    is_identity: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tag = Tag(self.tag)
        object.__setattr__(self, "tag", tag)
        if tag == Tag.CONST:
            if self.value is None or int(self.value) < 0:
                raise ValueError("A const generator needs a non-negative element code.")
            object.__setattr__(self, "value", int(self.value))
        elif self.value is not None:
            raise ValueError(f"Generator {tag.value} takes no value.")
        if tag == Tag.EXT:
            if self.ext is None:
                raise ValueError("An ext generator needs its extension.")
            shape = Shape(self.ext.arity, self.ext.coarity)
        else:
            shape = Shape(*GEN_SHAPES[tag])
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "is_identity", tag == Tag.IDENTITY)


@dataclass(frozen=True)
class Seq(Circuit):
    f: Circuit
    g: Circuit
    shape: Shape = field(init=False, repr=False, compare=False)
    is_identity: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.f.shape.coarity != self.g.shape.arity:
            raise ShapeMismatch(
                f"Cannot compose {self.f.shape} with {self.g.shape}: "
                f"{self.f.shape.coarity} != {self.g.shape.arity}.",
                self.f.shape,
                self.g.shape,
            )
        object.__setattr__(self, "shape", Shape(self.f.shape.arity, self.g.shape.coarity))
        object.__setattr__(self, "is_identity", self.f.is_identity and self.g.is_identity)


@dataclass(frozen=True)
class Par(Circuit):
    f: Circuit
    g: Circuit
    shape: Shape = field(init=False, repr=False, compare=False)
    is_identity: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "shape",
            Shape(self.f.shape.arity + self.g.shape.arity, self.f.shape.coarity + self.g.shape.coarity),
        )
        object.__setattr__(self, "is_identity", self.f.is_identity and self.g.is_identity)


ADD = Gen(Tag.ADD)
ZERO = Gen(Tag.ZERO)
MUL = Gen(Tag.MUL)
ONE = Gen(Tag.ONE)
COPY = Gen(Tag.COPY)
DISCARD = Gen(Tag.DISCARD)
IDENTITY = Gen(Tag.IDENTITY)
TWIST = Gen(Tag.TWIST)
COMPARE = Gen(Tag.COMPARE)
NEGATE = Gen(Tag.NEGATE)

# Identity on zero wires.
EMPTY = Seq(ZERO, DISCARD)


def const(value: int) -> Gen:
    return Gen(Tag.CONST, value)


def compose(f: Circuit, g: Circuit) -> Circuit:
    """Sequential composition f ; g. Raises ShapeMismatch when coarity(f) != arity(g)."""
    return Seq(f, g)


def tensor(f: Circuit, g: Circuit) -> Circuit:
    """Parallel composition, f on the first arity(f) wires."""
    return Par(f, g)


def _balanced(parts: List[Circuit], node) -> Circuit:
    if len(parts) == 1:
        return parts[0]
    middle = len(parts) // 2
    return node(_balanced(parts[:middle], node), _balanced(parts[middle:], node))


def seq_all(parts: Sequence[Circuit]) -> Circuit:
    """Composes a chain of circuits as a balanced tree, skipping identities."""
    if not parts:
        raise ValueError("seq_all needs at least one circuit.")
    kept = [p for p in parts if not (p.is_identity or p == EMPTY)]
    if not kept:
        return parts[0]
    # Shapes of the dropped identities must still line up with their neighbours.
    for left, right in zip(parts, parts[1:]):
        if left.shape.coarity != right.shape.arity:
            raise ShapeMismatch(
                f"Cannot compose {left.shape} with {right.shape}.", left.shape, right.shape
            )
    return _balanced(kept, Seq)


def par_all(parts: Sequence[Circuit]) -> Circuit:
    """Tensors circuits as a balanced tree, skipping the empty circuit."""
    kept = [p for p in parts if p != EMPTY]
    if not kept:
        return EMPTY
    return _balanced(kept, Par)


def id_n(n: int) -> Circuit:
    if n == 0:
        return EMPTY
    return par_all([IDENTITY] * n)


def zero_n(n: int) -> Circuit:
    return par_all([ZERO] * n)


def discard_n(n: int) -> Circuit:
    return par_all([DISCARD] * n)


def const_tuple(elements: Sequence[int]) -> Circuit:
    return par_all([const(e) for e in elements])


def permute(perm: Sequence[int]) -> Circuit:
    """Wire permutation whose i-th output is input perm[i].

    Built deterministically as a bubble sort of adjacent twists.
    """
    width = len(perm)
    if sorted(perm) != list(range(width)):
        raise ValueError(f"{list(perm)} is not a permutation of {width} wires.")
    target = {label: position for position, label in enumerate(perm)}
    current = list(range(width))
    layers = []
    for done in range(width):
        for i in range(width - 1 - done):
            if target[current[i]] > target[current[i + 1]]:
                current[i], current[i + 1] = current[i + 1], current[i]
                layers.append(par_all([id_n(i), TWIST, id_n(width - i - 2)]))
    if not layers:
        return id_n(width)
    return seq_all(layers)


def swap_block(m: int, n: int) -> Circuit:
    """m+n -> n+m, moving the first m wires after the next n."""
    return permute([m + i for i in range(n)] + list(range(m)))


def copy_n(n: int) -> Circuit:
    """n -> 2n, (x) |-> (x, x)."""
    if n == 0:
        return EMPTY
    interleaved = par_all([COPY] * n)
    return seq_all([interleaved, permute([2 * i for i in range(n)] + [2 * i + 1 for i in range(n)])])


def add_n(n: int) -> Circuit:
    """2n -> n, (x, y) |-> x + y componentwise."""
    if n == 0:
        return EMPTY
    interleave = permute([j for i in range(n) for j in (i, n + i)])
    return seq_all([interleave, par_all([ADD] * n)])


def proj_first(m: int, n: int) -> Circuit:
    return par_all([id_n(m), discard_n(n)])


def proj_second(m: int, n: int) -> Circuit:
    return par_all([discard_n(m), id_n(n)])


def copy_tree(k: int) -> Circuit:
    """1 -> k copies of one wire."""
    if k == 0:
        return DISCARD
    if k == 1:
        return IDENTITY
    return Seq(COPY, Par(copy_tree((k + 1) // 2), copy_tree(k // 2)))


def _fold_tree(k: int, op: Gen, unit: Gen) -> Circuit:
    if k == 0:
        return unit
    if k == 1:
        return IDENTITY
    return Seq(Par(_fold_tree((k + 1) // 2, op, unit), _fold_tree(k // 2, op, unit)), op)


def add_tree(k: int) -> Circuit:
    """k -> 1 balanced sum; k = 0 gives zero."""
    return _fold_tree(k, ADD, ZERO)


def mul_tree(k: int) -> Circuit:
    """k -> 1 balanced product; k = 0 gives one."""
    return _fold_tree(k, MUL, ONE)


def power(e: int) -> Circuit:
    """1 -> 1, x |-> x^e by repeated squaring."""
    if e == 0:
        return Seq(DISCARD, ONE)
    if e == 1:
        return IDENTITY
    if e % 2 == 0:
        return seq_all([power(e // 2), COPY, MUL])
    return seq_all([COPY, Par(power(e - 1), IDENTITY), MUL])


def natural_multiple(n: int) -> Circuit:
    """1 -> 1, x |-> x + ... + x (n times)."""
    return seq_all([copy_tree(n), add_tree(n)])


_RANDOM_POOL = [Tag.ADD, Tag.ZERO, Tag.MUL, Tag.ONE, Tag.COPY, Tag.DISCARD, Tag.IDENTITY, Tag.TWIST, Tag.CONST]


def random_circuit(
    rng: np.random.Generator,
    arity: int,
    n_gens: int,
    carrier_size: int,
    allow_compare: bool = False,
    allow_negate: bool = False,
    max_width: int = 3,
) -> Circuit:
    """Draws a circuit as a chain of n_gens layers, each one generator padded with identities.

    Args:
        rng (np.random.Generator): Source of randomness; equal seeds give equal circuits.
        arity (int): Number of input wires.
        n_gens (int): Number of generator layers.
        carrier_size (int): Constants are drawn from codes below it.
        allow_compare (bool): Include the comparator.
        allow_negate (bool): Include negation (only meaningful over rings).
        max_width (int): Upper bound on the number of wires between layers.

    Returns:
        Circuit: Circuit of the given arity and coarity at most max(arity, max_width).
    """
    pool = list(_RANDOM_POOL)
    if allow_compare:
        pool.append(Tag.COMPARE)
    if allow_negate:
        pool.append(Tag.NEGATE)

    wires = arity
    layers = []
    for _ in range(n_gens):
        candidates = [
            tag for tag in pool
            if GEN_SHAPES[tag][0] <= wires
            and wires - GEN_SHAPES[tag][0] + GEN_SHAPES[tag][1] <= max(max_width, arity)
        ]
        tag = candidates[int(rng.integers(len(candidates)))]
        gen = const(int(rng.integers(carrier_size))) if tag == Tag.CONST else Gen(tag)
        n_in, n_out = GEN_SHAPES[tag]
        position = int(rng.integers(wires - n_in + 1))
        layers.append(par_all([id_n(position), gen, id_n(wires - position - n_in)]))
        wires += n_out - n_in
    if not layers:
        return id_n(arity)
    return seq_all(layers)
