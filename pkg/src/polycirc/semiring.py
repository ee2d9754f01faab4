""" Commutative semirings carried by circuit wires, and their exhaustive self-check."""
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from .config import MAX_CARRIER_SIZE, NAT_MAX
from .errors import (
    BadModulus,
    ConstOutOfRange,
    InfiniteCarrier,
    NotPrime,
    SemiringOverflow,
    UnknownSemiring,
)
from .report import FAIL, PASS, SKIPPED, AxiomReport, LawResult

logger = logging.getLogger(__name__)

# Carrier values are canonical codes 0..k-1 (any natural for "nat").
Element = int

_SPEC_PATTERN = re.compile(r"^(zmod|zp|sat):(\d+)$")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True, eq=False)
class SemiringDesc:
    """A commutative semiring on canonical element codes.

    Finite carriers store their operations as k x k numpy tables so that whole
    columns of wire values can be combined by fancy indexing. The machine-natural
    carrier ("nat", size None) computes on Python ints and raises on overflow.
    """

    id: str
    size: Optional[int]
    zero: Element
    one: Element
    add_table: Optional[np.ndarray] = None
    mul_table: Optional[np.ndarray] = None
    neg_table: Optional[np.ndarray] = None

    @classmethod
    def from_tables(
        cls,
        id: str,
        add_table,
        mul_table,
        zero: Element = 0,
        one: Element = 1,
        neg_table=None,
    ) -> "SemiringDesc":
        """Builds a finite desc from explicit operation tables (no law checking)."""
        add_table = np.asarray(add_table, dtype=np.int64)
        mul_table = np.asarray(mul_table, dtype=np.int64)
        size = add_table.shape[0]
        if add_table.shape != (size, size) or mul_table.shape != (size, size):
            raise ValueError("Operation tables must both be square with the same size.")
        if neg_table is not None:
            neg_table = np.asarray(neg_table, dtype=np.int64)
        return cls(id, size, zero, one, add_table, mul_table, neg_table)

    def __repr__(self):
        return f"SemiringDesc({self.id!r})"

    @property
    def is_finite(self) -> bool:
        return self.size is not None

    @property
    def has_neg(self) -> bool:
        return self.neg_table is not None

    @property
    def dtype(self):
        return np.int64 if self.is_finite else object

    def elements(self) -> range:
        if not self.is_finite:
            raise InfiniteCarrier(f"The carrier of {self.id} is not finite.")
        return range(self.size)

    def require_finite(self):
        if not self.is_finite:
            raise InfiniteCarrier(f"The carrier of {self.id} is not finite.")

    def check_element(self, code: int) -> Element:
        code = int(code)
        if code < 0 or (self.is_finite and code >= self.size):
            raise ConstOutOfRange(f"Element code {code} is out of range for {self.id}.")
        if not self.is_finite and code > NAT_MAX:
            raise ConstOutOfRange(f"Element code {code} exceeds the machine natural range.")
        return code

    # Scalar operations.
    def add(self, a: Element, b: Element) -> Element:
        if self.is_finite:
            return int(self.add_table[a, b])
        return self._checked(int(a) + int(b), "addition")

    def mul(self, a: Element, b: Element) -> Element:
        if self.is_finite:
            return int(self.mul_table[a, b])
        return self._checked(int(a) * int(b), "multiplication")

    def neg(self, a: Element) -> Element:
        if not self.has_neg:
            raise ValueError(f"{self.id} has no negation.")
        return int(self.neg_table[a])

    def sum(self, values: Iterable[Element]) -> Element:
        total = self.zero
        for value in values:
            total = self.add(total, value)
        return total

    def natural_multiple(self, k: int, a: Element) -> Element:
        """k copies of a summed in the semiring (double-and-add)."""
        result, base = self.zero, a
        while k > 0:
            if k & 1:
                result = self.add(result, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return result

    def power(self, a: Element, e: int) -> Element:
        result = self.one
        for _ in range(e):
            result = self.mul(result, a)
        return result

    # Vectorized operations on columns of codes.
    def array(self, values) -> np.ndarray:
        return np.asarray(values, dtype=self.dtype)

    def full(self, n: int, value: Element) -> np.ndarray:
        return np.full(n, value, dtype=self.dtype)

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.is_finite:
            return self.add_table[a, b]
        return self._vchecked(a + b, "addition")

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.is_finite:
            return self.mul_table[a, b]
        return self._vchecked(a * b, "multiplication")

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if not self.has_neg:
            raise ValueError(f"{self.id} has no negation.")
        return self.neg_table[a]

    def vcompare(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.where(a == b, self.one, self.zero).astype(self.dtype)

    def _checked(self, value: int, what: str) -> int:
        if value > NAT_MAX:
            raise SemiringOverflow(f"Natural {what} overflowed {NAT_MAX}.")
        return value

    def _vchecked(self, values: np.ndarray, what: str) -> np.ndarray:
        if values.size and (values > NAT_MAX).any():
            raise SemiringOverflow(f"Natural {what} overflowed {NAT_MAX}.")
        return values

    def same_tables(self, other: "SemiringDesc") -> bool:
        """Operation-table equality of two finite semirings."""
        if not (self.is_finite and other.is_finite) or self.size != other.size:
            return False
        same_neg = (self.neg_table is None) == (other.neg_table is None) and (
            self.neg_table is None or np.array_equal(self.neg_table, other.neg_table)
        )
        return (
            self.zero == other.zero
            and self.one == other.one
            and np.array_equal(self.add_table, other.add_table)
            and np.array_equal(self.mul_table, other.mul_table)
            and same_neg
        )


def _tabulate(size: int, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> np.ndarray:
    a, b = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    return fn(a, b).astype(np.int64)


def _zmod(n: int, id: str) -> SemiringDesc:
    add = _tabulate(n, lambda a, b: (a + b) % n)
    mul = _tabulate(n, lambda a, b: (a * b) % n)
    neg = (-np.arange(n)) % n
    return SemiringDesc(id, n, 0, 1 % n, add, mul, neg.astype(np.int64))


def _sat(n: int) -> SemiringDesc:
    add = _tabulate(n, lambda a, b: np.minimum(n - 1, a + b))
    mul = _tabulate(n, lambda a, b: np.minimum(n - 1, a * b))
    return SemiringDesc(f"sat:{n}", n, 0, 1, add, mul, None)


@lru_cache(maxsize=None)
def make_semiring(spec: str) -> SemiringDesc:
    """Parses a semiring id (zmod:n | zp:p | sat:n | nat | bool) into a SemiringDesc.

    Args:
        spec (str): Semiring identifier.

    Returns:
        SemiringDesc: Immutable description; "bool" returns sat:2.
    """
    spec = spec.strip()
    if spec == "nat":
        return SemiringDesc("nat", None, 0, 1)
    if spec == "bool":
        return make_semiring("sat:2")

    match = _SPEC_PATTERN.match(spec)
    if match is None:
        raise UnknownSemiring(f"Unknown semiring {spec!r}; expected zmod:<n>, zp:<p>, sat:<n>, nat or bool.")
    kind, n = match.group(1), int(match.group(2))
    if n < 2:
        raise BadModulus(f"{kind} needs a modulus of at least 2, got {n}.")
    if n > MAX_CARRIER_SIZE:
        raise BadModulus(f"{kind}:{n} exceeds the largest tabulated carrier size {MAX_CARRIER_SIZE}.")
    if kind == "zp":
        if not is_prime(n):
            raise NotPrime(f"zp:{n} requires a prime, and {n} is composite.")
        return _zmod(n, f"zp:{n}")
    if kind == "zmod":
        return _zmod(n, f"zmod:{n}")
    return _sat(n)


def _first_failure(lhs: np.ndarray, rhs: np.ndarray, points: Tuple[np.ndarray, ...]) -> LawResult:
    bad = np.nonzero(lhs != rhs)[0]
    cases = int(lhs.size)
    if bad.size == 0:
        return LawResult(PASS, cases)
    i = int(bad[0])
    counterexample = tuple(int(p[i]) for p in points)
    return LawResult(FAIL, cases, counterexample, f"{int(lhs[i])} != {int(rhs[i])}")


def check_semiring_axioms(desc: SemiringDesc) -> AxiomReport:
    """Exhaustively checks the commutative-semiring laws of a finite carrier.

    Every law is checked on all tuples of carrier elements in lexicographic
    order, so a reported counterexample is the least failing tuple.
    """
    if not desc.is_finite:
        raise InfiniteCarrier(f"Cannot exhaustively check the laws of {desc.id}.")
    report = AxiomReport()
    k = desc.size
    codes = np.arange(k)

    closed = all(
        t.min() >= 0 and t.max() < k for t in (desc.add_table, desc.mul_table)
    ) and 0 <= desc.zero < k and 0 <= desc.one < k
    if desc.has_neg:
        closed = closed and desc.neg_table.min() >= 0 and desc.neg_table.max() < k
    report.add("closure", LawResult(PASS if closed else FAIL, 2 * k * k))
    laws = [
        "add_assoc", "add_comm", "add_unit", "mul_assoc", "mul_comm",
        "mul_unit", "distributivity", "annihilation",
    ]
    if not closed:
        for name in laws + (["neg_inverse"] if desc.has_neg else []):
            report.add(name, LawResult(SKIPPED, detail="operations are not closed"))
        return report

    add, mul = desc.add_table, desc.mul_table
    a1 = codes
    a2, b2 = (g.ravel() for g in np.meshgrid(codes, codes, indexing="ij"))
    a3, b3, c3 = (g.ravel() for g in np.meshgrid(codes, codes, codes, indexing="ij"))

    report.add("add_assoc", _first_failure(add[add[a3, b3], c3], add[a3, add[b3, c3]], (a3, b3, c3)))
    report.add("add_comm", _first_failure(add[a2, b2], add[b2, a2], (a2, b2)))
    report.add("add_unit", _first_failure(add[a1, desc.zero], a1, (a1,)))
    report.add("mul_assoc", _first_failure(mul[mul[a3, b3], c3], mul[a3, mul[b3, c3]], (a3, b3, c3)))
    report.add("mul_comm", _first_failure(mul[a2, b2], mul[b2, a2], (a2, b2)))
    report.add("mul_unit", _first_failure(mul[a1, desc.one], a1, (a1,)))
    report.add(
        "distributivity",
        _first_failure(mul[a3, add[b3, c3]], add[mul[a3, b3], mul[a3, c3]], (a3, b3, c3)),
    )
    report.add("annihilation", _first_failure(mul[a1, desc.zero], np.full(k, desc.zero), (a1,)))
    if desc.has_neg:
        report.add(
            "neg_inverse",
            _first_failure(add[a1, desc.neg_table[a1]], np.full(k, desc.zero), (a1,)),
        )

    logger.debug(f"semiring {desc.id}: {'pass' if report.passed else report.failures}")
    return report
