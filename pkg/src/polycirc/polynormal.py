""" Polynomial normal form of compare-free circuits and the Jacobian-transpose oracle.

Exponents are formal: x^2 and x stay distinct even over zmod:2, so formal
equality (poly_equal) is finer than extensional equality on finite carriers.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .circuit import (
    IDENTITY,
    MUL,
    Circuit,
    Gen,
    Par,
    Seq,
    Tag,
    add_tree,
    const,
    copy_tree,
    mul_tree,
    par_all,
    permute,
    seq_all,
)
from .errors import IndexOutOfRange, NonPolynomialGenerator, ShapeMismatch, UnsupportedGenerator
from .semiring import Element, SemiringDesc

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def graded_lex_key(monomial: Monomial):
    return (-sum(monomial), tuple(-e for e in monomial))


@dataclass(eq=False)
class Polynomial:
    """Sparse polynomial in `arity` indeterminates with coefficients in desc; zero coefficients are never stored."""

    desc: SemiringDesc
    arity: int
    terms: Dict[Monomial, Element] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {
            tuple(mono): coeff for mono, coeff in self.terms.items() if coeff != self.desc.zero
        }
        for mono in self.terms:
            if len(mono) != self.arity or any(e < 0 for e in mono):
                raise ValueError(f"Monomial {mono} does not fit arity {self.arity}.")

    @classmethod
    def constant(cls, desc: SemiringDesc, arity: int, value: Element) -> "Polynomial":
        return cls(desc, arity, {(0,) * arity: value})

    @classmethod
    def variable(cls, desc: SemiringDesc, arity: int, index: int) -> "Polynomial":
        mono = tuple(1 if i == index else 0 for i in range(arity))
        return cls(desc, arity, {mono: desc.one})

    def _check(self, other: "Polynomial"):
        if self.arity != other.arity:
            raise ShapeMismatch(f"Polynomials in {self.arity} and {other.arity} indeterminates.")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = self.desc.add(terms.get(mono, self.desc.zero), coeff)
        return Polynomial(self.desc, self.arity, terms)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms: Dict[Monomial, Element] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                terms[mono] = self.desc.add(terms.get(mono, self.desc.zero), self.desc.mul(c1, c2))
        return Polynomial(self.desc, self.arity, terms)

    def scale(self, value: Element) -> "Polynomial":
        return Polynomial(
            self.desc, self.arity, {mono: self.desc.mul(value, c) for mono, c in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def sorted_terms(self) -> List[Tuple[Monomial, Element]]:
        return sorted(self.terms.items(), key=lambda item: graded_lex_key(item[0]))

    def degree(self) -> int:
        return max((sum(mono) for mono in self.terms), default=0)

    def evaluate(self, x: Sequence[Element]) -> Element:
        if len(x) != self.arity:
            raise ShapeMismatch(f"Polynomial in {self.arity} indeterminates applied to {len(x)} values.")
        total = self.desc.zero
        for mono, coeff in self.sorted_terms():
            term = coeff
            for value, e in zip(x, mono):
                term = self.desc.mul(term, self.desc.power(value, e))
            total = self.desc.add(total, term)
        return total

    def evaluate_batch(self, columns: List[np.ndarray], n_rows: int) -> np.ndarray:
        desc = self.desc
        powers: Dict[Tuple[int, int], np.ndarray] = {}

        def column_power(i: int, e: int) -> np.ndarray:
            if (i, e) not in powers:
                powers[(i, e)] = (
                    desc.full(n_rows, desc.one) if e == 0 else desc.vmul(column_power(i, e - 1), columns[i])
                )
            return powers[(i, e)]

        total = desc.full(n_rows, desc.zero)
        for mono, coeff in self.sorted_terms():
            term = desc.full(n_rows, coeff)
            for i, e in enumerate(mono):
                if e:
                    term = desc.vmul(term, column_power(i, e))
            total = desc.vadd(total, term)
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.sorted_terms():
            factors = [f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(mono) if e]
            if coeff != self.desc.one or not factors:
                factors.insert(0, str(coeff))
            parts.append("·".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self.render()!r} over {self.desc.id})"


@dataclass(eq=False)
class PolyMap:
    """Tuple of polynomials <p_0, ..., p_{n-1}> : arity -> n."""

    desc: SemiringDesc
    arity: int
    polys: List[Polynomial]

    def __post_init__(self):
        for poly in self.polys:
            if poly.arity != self.arity:
                raise ShapeMismatch(f"Polynomial of arity {poly.arity} in a map of arity {self.arity}.")

    @property
    def coarity(self) -> int:
        return len(self.polys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return poly_equal(self, other)

    def evaluate(self, x: Sequence[Element]) -> Tuple[Element, ...]:
        return tuple(p.evaluate(x) for p in self.polys)

    def evaluate_batch(self, inputs: np.ndarray) -> np.ndarray:
        inputs = np.asarray(inputs, dtype=self.desc.dtype)
        n_rows = inputs.shape[0]
        columns = [inputs[:, i] for i in range(self.arity)]
        if not self.polys:
            return np.zeros((n_rows, 0), dtype=self.desc.dtype)
        return np.stack([p.evaluate_batch(columns, n_rows) for p in self.polys], axis=1)

    def render(self) -> str:
        return "\n".join(f"y{j} = {p.render()}" for j, p in enumerate(self.polys))

    def to_dict(self) -> dict:
        return {
            "semiring": self.desc.id,
            "arity": self.arity,
            "polys": [
                [{"exponents": list(mono), "coeff": int(c)} for mono, c in p.sorted_terms()]
                for p in self.polys
            ],
        }


def _poly_gen(desc: SemiringDesc, gen: Gen, inputs: List[Polynomial], arity: int) -> List[Polynomial]:
    tag = gen.tag
    if tag == Tag.IDENTITY:
        return inputs
    if tag == Tag.ADD:
        return [inputs[0] + inputs[1]]
    if tag == Tag.MUL:
        return [inputs[0] * inputs[1]]
    if tag == Tag.ZERO:
        return [Polynomial(desc, arity)]
    if tag == Tag.ONE:
        return [Polynomial.constant(desc, arity, desc.one)]
    if tag == Tag.CONST:
        return [Polynomial.constant(desc, arity, desc.check_element(gen.value))]
    if tag == Tag.COPY:
        return [inputs[0], inputs[0]]
    if tag == Tag.DISCARD:
        return []
    if tag == Tag.TWIST:
        return [inputs[1], inputs[0]]
    if tag == Tag.NEGATE:
        if not desc.has_neg:
            raise UnsupportedGenerator(f"neg is not available over {desc.id}, which has no negation.")
        return [inputs[0].scale(desc.neg(desc.one))]
    if tag == Tag.COMPARE:
        raise NonPolynomialGenerator("eq is not a polynomial operation.")
    raise NonPolynomialGenerator(f"Extension generator {gen.ext.name!r} has no polynomial form.")


def _poly_circuit(desc: SemiringDesc, circuit: Circuit, inputs: List[Polynomial], arity: int) -> List[Polynomial]:
    if isinstance(circuit, Gen):
        return _poly_gen(desc, circuit, inputs, arity)
    if isinstance(circuit, Seq):
        return _poly_circuit(desc, circuit.g, _poly_circuit(desc, circuit.f, inputs, arity), arity)
    split = circuit.f.arity
    return _poly_circuit(desc, circuit.f, inputs[:split], arity) + _poly_circuit(
        desc, circuit.g, inputs[split:], arity
    )


def to_poly(desc: SemiringDesc, circuit: Circuit) -> PolyMap:
    """Normalizes a compare-free circuit into the tuple of polynomials it denotes.

    Args:
        desc (SemiringDesc): Coefficient semiring; constants are folded with its operations.
        circuit (Circuit): Circuit without eq (and without neg unless desc has negation).

    Returns:
        PolyMap: One polynomial per output wire.
    """
    m = circuit.arity
    variables = [Polynomial.variable(desc, m, i) for i in range(m)]
    return PolyMap(desc, m, _poly_circuit(desc, circuit, variables, m))


def formal_partial(p: Polynomial, i: int) -> Polynomial:
    """d p / d x_i, with the exponent brought down as a natural multiple of the coefficient."""
    if i < 0 or i >= p.arity:
        raise IndexOutOfRange(f"Index {i} is outside 0..{p.arity - 1}.")
    terms: Dict[Monomial, Element] = {}
    for mono, coeff in p.terms.items():
        if mono[i] == 0:
            continue
        lowered = mono[:i] + (mono[i] - 1,) + mono[i + 1:]
        terms[lowered] = p.desc.add(terms.get(lowered, p.desc.zero), p.desc.natural_multiple(mono[i], coeff))
    return Polynomial(p.desc, p.arity, terms)


def jacobian(pm: PolyMap) -> List[List[Polynomial]]:
    """jacobian(pm)[j][i] = d p_j / d x_i."""
    return [[formal_partial(p, i) for i in range(pm.arity)] for p in pm.polys]


def jt_apply(pm: PolyMap, x: Sequence[Element], delta: Sequence[Element]) -> Tuple[Element, ...]:
    """Jacobian-transpose action: entry i is sum_j delta_j * (d p_j / d x_i)(x)."""
    if len(x) != pm.arity or len(delta) != pm.coarity:
        raise ShapeMismatch(
            f"Map {pm.arity}->{pm.coarity} applied to x of length {len(x)} and change of length {len(delta)}."
        )
    desc = pm.desc
    jac = jacobian(pm)
    return tuple(
        desc.sum(desc.mul(delta[j], jac[j][i].evaluate(x)) for j in range(pm.coarity))
        for i in range(pm.arity)
    )


def jt_apply_batch(pm: PolyMap, inputs: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """Row-wise jt_apply over (N, m) base points and (N, n) changes."""
    desc = pm.desc
    inputs = np.asarray(inputs, dtype=desc.dtype)
    deltas = np.asarray(deltas, dtype=desc.dtype)
    n_rows = inputs.shape[0]
    if inputs.shape[1:] != (pm.arity,) or deltas.shape != (n_rows, pm.coarity):
        raise ShapeMismatch(f"Batch shapes {inputs.shape} and {deltas.shape} do not fit {pm.arity}->{pm.coarity}.")
    columns = [inputs[:, i] for i in range(pm.arity)]
    jac = jacobian(pm)
    result = []
    for i in range(pm.arity):
        total = desc.full(n_rows, desc.zero)
        for j in range(pm.coarity):
            total = desc.vadd(total, desc.vmul(deltas[:, j], jac[j][i].evaluate_batch(columns, n_rows)))
        result.append(total)
    if not result:
        return np.zeros((n_rows, 0), dtype=desc.dtype)
    return np.stack(result, axis=1)


def poly_equal(pm1: PolyMap, pm2: PolyMap) -> bool:
    """Coefficient-wise equality. Formally different maps may still agree as functions on a finite carrier."""
    if pm1.arity != pm2.arity or pm1.coarity != pm2.coarity:
        raise ShapeMismatch(
            f"Cannot compare maps {pm1.arity}->{pm1.coarity} and {pm2.arity}->{pm2.coarity}."
        )
    return all(p == q for p, q in zip(pm1.polys, pm2.polys))


def from_poly(pm: PolyMap) -> Circuit:
    """Builds a compare-free circuit denoting pm.

    Each input is copied once per occurrence, the copies are routed to their
    monomials, each monomial is a product tree scaled by its coefficient, and
    the terms of each output are summed by a balanced add tree.
    """
    desc = pm.desc
    uses = [0] * pm.arity
    occurrences: List[int] = []
    term_circuits: List[List[Circuit]] = []
    for poly in pm.polys:
        circuits = []
        for mono, coeff in poly.sorted_terms():
            for i, e in enumerate(mono):
                occurrences.extend([i] * e)
                uses[i] += e
            degree = sum(mono)
            if degree == 0:
                circuits.append(const(coeff))
            elif coeff == desc.one:
                circuits.append(mul_tree(degree))
            else:
                circuits.append(seq_all([mul_tree(degree), Par(const(coeff), IDENTITY), MUL]))
        term_circuits.append(circuits)

    offsets = np.concatenate([[0], np.cumsum(uses)]).astype(int).tolist()
    taken = [0] * pm.arity
    perm = []
    for i in occurrences:
        perm.append(offsets[i] + taken[i])
        taken[i] += 1

    outputs = [seq_all([par_all(circuits), add_tree(len(circuits))]) for circuits in term_circuits]
    return seq_all([
        par_all([copy_tree(u) for u in uses]),
        permute(perm),
        par_all(outputs),
    ])
