""" Executable checks of the reverse-derivative axioms, generator extensions and presentation equations.

Every check compares two circuits extensionally. Inputs are enumerated
exhaustively up to config.EXHAUSTIVE_LIMIT cases, otherwise a seeded sample of
config.RANDOM_CASES rows is drawn. Rows are visited in lexicographic order, so
a failure reports the least counterexample found.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from .circuit import (
    ADD,
    COMPARE,
    COPY,
    DISCARD,
    IDENTITY,
    MUL,
    NEGATE,
    ONE,
    TWIST,
    ZERO,
    Circuit,
    Gen,
    Par,
    Seq,
    Tag,
    add_n,
    const,
    copy_n,
    discard_n,
    id_n,
    natural_multiple,
    par_all,
    random_circuit,
    seq_all,
    swap_block,
    zero_n,
)
from .config import DEFAULT_SEED, EXHAUSTIVE_LIMIT, RANDOM_CASES
from .errors import ShapeMismatch, UnsupportedGenerator
from .evaluate import FunctionTable, all_inputs, compare_on
from .rdiff import forward, partial, reverse
from .report import FAIL, PASS, SKIPPED, AxiomReport, LawResult
from .semiring import SemiringDesc

logger = logging.getLogger(__name__)

Equation = Tuple[Circuit, Circuit]


def sample_inputs(desc: SemiringDesc, arity: int, seed: int = DEFAULT_SEED) -> Tuple[np.ndarray, bool]:
    """Rows to check an equation of the given arity on, and whether they are exhaustive."""
    desc.require_finite()
    if desc.size ** arity <= EXHAUSTIVE_LIMIT:
        return all_inputs(desc, arity, EXHAUSTIVE_LIMIT), True
    rng = np.random.default_rng(seed)
    rows = rng.integers(desc.size, size=(RANDOM_CASES, arity), dtype=np.int64)
    rows = rows[np.lexsort(rows.T[::-1])]
    return rows, False


def check_equal(desc: SemiringDesc, lhs: Circuit, rhs: Circuit, seed: int = DEFAULT_SEED) -> LawResult:
    if lhs.shape != rhs.shape:
        raise ShapeMismatch(f"Equation sides have shapes {lhs.shape} and {rhs.shape}.", lhs.shape, rhs.shape)
    rows, exhaustive = sample_inputs(desc, lhs.arity, seed)
    outcome = compare_on(desc, lhs, rhs, rows)
    note = None if exhaustive else f"random sample, seed {seed}"
    if outcome.equal:
        return LawResult(PASS, outcome.cases, detail=note)
    detail = f"{list(outcome.lhs)} != {list(outcome.rhs)}"
    return LawResult(FAIL, outcome.cases, outcome.counterexample, detail if note is None else f"{detail} ({note})")


def _check_family(desc: SemiringDesc, members: Sequence[Tuple[str, Equation]], seed: int) -> LawResult:
    """One verdict for a family of equations; a failure names the first failing member."""
    cases = 0
    for label, (lhs, rhs) in members:
        result = check_equal(desc, lhs, rhs, seed)
        cases += result.cases
        if result.status == FAIL:
            return LawResult(FAIL, cases, result.counterexample, f"{label}: {result.detail}")
    return LawResult(PASS, cases)


def additivity_equation(circuit: Circuit) -> Equation:
    """R[c](x, d1 + d2) against R[c](x, d1) + R[c](x, d2), both of shape m + 2n -> m."""
    m, n = circuit.arity, circuit.coarity
    rc = reverse(circuit)
    lhs = seq_all([par_all([id_n(m), add_n(n)]), rc])
    rhs = seq_all([
        par_all([copy_n(m), id_n(2 * n)]),
        par_all([id_n(m), swap_block(m, n), id_n(n)]),
        Par(rc, rc),
        add_n(m),
    ])
    return lhs, rhs


def additivity_zero_equation(circuit: Circuit) -> Equation:
    m, n = circuit.arity, circuit.coarity
    lhs = seq_all([par_all([id_n(m), zero_n(n)]), reverse(circuit)])
    rhs = seq_all([discard_n(m), zero_n(m)])
    return lhs, rhs


def linearity_of_change_equation(circuit: Circuit) -> Equation:
    """D_B[R[c]]((x, d), e) against R[c](x, e), B being the change block."""
    m, n = circuit.arity, circuit.coarity
    rc = reverse(circuit)
    lhs = partial(rc, m)
    rhs = seq_all([par_all([id_n(m), discard_n(n), id_n(n)]), rc])
    return lhs, rhs


def symmetry_of_partials_equation(circuit: Circuit) -> Equation:
    """D[D[c]]((a, b), (c, d)) against D[D[c]]((a, c), (b, d))."""
    m = circuit.arity
    d2 = forward(forward(circuit))
    return d2, seq_all([par_all([id_n(m), swap_block(m, m), id_n(m)]), d2])


def check_rdc_axioms(desc: SemiringDesc, circuit: Circuit, seed: int = DEFAULT_SEED) -> AxiomReport:
    """Checks additivity of change, linearity of change and symmetry of partials for R[c].

    Args:
        desc (SemiringDesc): Finite carrier.
        circuit (Circuit): Circuit whose reverse derivative is checked.
        seed (int): Seed of the random sample used above the exhaustive limit.

    Returns:
        AxiomReport: additivity, additivity_zero, linearity_of_change, symmetry_of_partials.
    """
    desc.require_finite()
    report = AxiomReport()
    report.add("additivity", check_equal(desc, *additivity_equation(circuit), seed=seed))
    report.add("additivity_zero", check_equal(desc, *additivity_zero_equation(circuit), seed=seed))
    report.add("linearity_of_change", check_equal(desc, *linearity_of_change_equation(circuit), seed=seed))
    report.add("symmetry_of_partials", check_equal(desc, *symmetry_of_partials_equation(circuit), seed=seed))
    logger.debug(f"axioms of {circuit.shape} circuit over {desc.id}: {report.failures or 'pass'}")
    return report


Semantics = Union[FunctionTable, Callable[..., Sequence[np.ndarray]]]


@dataclass(eq=False)
class GeneratorExtension:
    """A new generator kind with its semantics and a proposed reverse derivative.

    Args:
        name (str): Display name.
        arity (int): Number of inputs.
        coarity (int): Number of outputs.
        semantics: Either a FunctionTable or a callable (desc, *columns) -> output columns.
        reverse_rule: Circuit of shape arity + coarity -> arity, or a callable building it
            from the new generator so the rule may use the generator itself.
        equations_rule: Defining equations, as a list of (lhs, rhs) circuits or a callable
            building that list from the new generator.
    """

    name: str
    arity: int
    coarity: int
    semantics: Semantics
    reverse_rule: Union[Circuit, Callable[[Gen], Circuit]]
    equations_rule: Union[List[Equation], Callable[[Gen], List[Equation]]] = field(default_factory=list)

    def __post_init__(self):
        self.generator = Gen(Tag.EXT, ext=self)
        rule = self.reverse_rule
        self.reverse = rule(self.generator) if callable(rule) else rule
        if self.reverse.shape.arity != self.arity + self.coarity or self.reverse.coarity != self.arity:
            raise ShapeMismatch(
                f"Proposed reverse of {self.name} has shape {self.reverse.shape}, "
                f"expected {self.arity + self.coarity}->{self.arity}."
            )
        rule = self.equations_rule
        self.equations = list(rule(self.generator) if callable(rule) else rule)
        for lhs, rhs in self.equations:
            if lhs.shape != rhs.shape:
                raise ShapeMismatch(f"Equation of {self.name} relates {lhs.shape} to {rhs.shape}.")

    def apply_batch(self, desc: SemiringDesc, columns: List[np.ndarray], n_rows: int) -> List[np.ndarray]:
        if isinstance(self.semantics, FunctionTable):
            index = np.zeros(n_rows, dtype=np.int64)
            for column in columns:
                index = index * desc.size + np.asarray(column, dtype=np.int64)
            return [self.semantics.outputs[index, j] for j in range(self.coarity)]
        outputs = self.semantics(desc, *columns)
        return [np.broadcast_to(np.asarray(col, dtype=desc.dtype), (n_rows,)) for col in outputs]


def check_extension(desc: SemiringDesc, ext: GeneratorExtension, seed: int = DEFAULT_SEED) -> AxiomReport:
    """Axioms of the proposed reverse, and well-definedness against every defining equation."""
    report = check_rdc_axioms(desc, ext.generator, seed)
    for i, (lhs, rhs) in enumerate(ext.equations):
        report.add(f"equation_{i}", check_equal(desc, lhs, rhs, seed))
        report.add(f"equation_{i}_reverse", check_equal(desc, reverse(lhs), reverse(rhs), seed))
    logger.info(f"extension {ext.name} over {desc.id}: {'pass' if report.passed else report.failures}")
    return report


def check_preservation(desc: SemiringDesc, f: Circuit, g: Circuit, seed: int = DEFAULT_SEED) -> AxiomReport:
    """If the axioms hold for f and g, they hold for f ; g (when composable) and f * g."""
    report = AxiomReport()
    premise = AxiomReport()
    premise.merge(check_rdc_axioms(desc, f, seed), "f.")
    premise.merge(check_rdc_axioms(desc, g, seed), "g.")
    if not premise.passed:
        report.add("premise", LawResult(SKIPPED, detail=f"components fail: {premise.failures}"))
        return report
    report.add("premise", LawResult(PASS, sum(r.cases for r in premise.results.values())))
    if f.coarity == g.arity:
        report.merge(check_rdc_axioms(desc, Seq(f, g), seed), "seq.")
    else:
        report.add("seq", LawResult(SKIPPED, detail=f"{f.shape} and {g.shape} do not compose"))
    report.merge(check_rdc_axioms(desc, Par(f, g), seed), "par.")
    return report


def random_preservation_suite(
    desc: SemiringDesc,
    pairs: int = 500,
    seed: int = DEFAULT_SEED,
    max_arity: int = 2,
    max_size: int = 12,
    quiet: bool = True,
) -> AxiomReport:
    """Runs check_preservation on seeded random composable pairs.

    Returns:
        AxiomReport: a single "preservation" verdict; on failure its detail names the pair
            and the failing law, and its counterexample replays on that composite.
    """
    desc.require_finite()
    rng = np.random.default_rng(seed)
    checked = 0
    vacuous = 0
    for i in tqdm(range(pairs), desc="preservation", disable=quiet):
        arity = int(rng.integers(max_arity + 1))
        f = random_circuit(rng, arity, int(rng.integers(1, max_size // 2 + 1)), desc.size, max_width=max_arity)
        g = random_circuit(rng, f.coarity, int(rng.integers(1, max_size // 2 + 1)), desc.size, max_width=max_arity)
        result = check_preservation(desc, f, g, seed)
        if result["premise"].status == SKIPPED:
            vacuous += 1
            continue
        checked += 1
        if not result.passed:
            law = result.failures[0]
            failure = result[law]
            report = AxiomReport()
            report.add(
                "preservation",
                LawResult(FAIL, checked, failure.counterexample, f"pair {i}, {law}: {failure.detail}"),
            )
            return report
    report = AxiomReport()
    detail = f"{vacuous} pairs with failing components" if vacuous else None
    report.add("preservation", LawResult(PASS, checked, detail=detail))
    logger.info(f"preservation over {desc.id}: {checked} pairs checked, seed {seed}")
    return report


def _const_pair(s: int, t: int) -> Circuit:
    return Par(const(s), const(t))


def characteristic(desc: SemiringDesc) -> Optional[int]:
    """Least n > 0 with n * 1 = 0, if any."""
    total = desc.zero
    for n in range(1, desc.size + 1):
        total = desc.add(total, desc.one)
        if total == desc.zero:
            return n
    return None


def presentation_equations(desc: SemiringDesc) -> List[Tuple[str, List[Tuple[str, Equation]]]]:
    """Families of presented equations that hold over desc, each member labelled."""
    elements = list(desc.elements())
    gens = [ADD, MUL, ZERO, ONE, COPY, DISCARD, TWIST, IDENTITY, COMPARE] + [const(s) for s in elements]
    if desc.has_neg:
        gens.append(NEGATE)
    label = lambda g: g.tag.value if g.tag != Tag.CONST else f"const({g.value})"
    vanish = Seq(DISCARD, ZERO)

    families = [
        ("copy_coassoc", [("", (Seq(COPY, Par(COPY, IDENTITY)), Seq(COPY, Par(IDENTITY, COPY))))]),
        ("copy_comm", [("", (Seq(COPY, TWIST), COPY))]),
        ("copy_counit", [("", (Seq(COPY, Par(DISCARD, IDENTITY)), IDENTITY))]),
        ("copy_natural", [
            (label(g), (seq_all([g, copy_n(g.coarity)]), seq_all([copy_n(g.arity), Par(g, g)])))
            for g in gens
        ]),
        ("discard_natural", [
            (label(g), (seq_all([g, discard_n(g.coarity)]), discard_n(g.arity)))
            for g in gens if g.arity + g.coarity > 0
        ]),
        ("add_assoc", [("", (Seq(Par(ADD, IDENTITY), ADD), Seq(Par(IDENTITY, ADD), ADD)))]),
        ("add_comm", [("", (Seq(TWIST, ADD), ADD))]),
        ("add_unit", [("", (Seq(Par(ZERO, IDENTITY), ADD), IDENTITY))]),
        ("mul_assoc", [("", (Seq(Par(MUL, IDENTITY), MUL), Seq(Par(IDENTITY, MUL), MUL)))]),
        ("mul_comm", [("", (Seq(TWIST, MUL), MUL))]),
        ("mul_unit", [("", (Seq(Par(ONE, IDENTITY), MUL), IDENTITY))]),
        ("distributivity", [("", (
            Seq(Par(IDENTITY, ADD), MUL),
            seq_all([par_all([COPY, id_n(2)]), par_all([IDENTITY, TWIST, IDENTITY]), Par(MUL, MUL), ADD]),
        ))]),
        ("annihilation", [("", (Seq(Par(IDENTITY, ZERO), MUL), vanish))]),
        ("const_add", [
            (f"{s},{t}", (Seq(_const_pair(s, t), ADD), const(desc.add(s, t))))
            for s in elements for t in elements
        ]),
        ("const_mul", [
            (f"{s},{t}", (Seq(_const_pair(s, t), MUL), const(desc.mul(s, t))))
            for s in elements for t in elements
        ]),
        ("const_units", [("zero", (const(desc.zero), ZERO)), ("one", (const(desc.one), ONE))]),
        ("compare", [
            (f"{s},{t}", (Seq(_const_pair(s, t), COMPARE), ONE if s == t else ZERO))
            for s in elements for t in elements
        ]),
    ]
    if desc.has_neg:
        families.append(("negate_inverse", [("", (seq_all([COPY, Par(IDENTITY, NEGATE), ADD]), vanish))]))
    n = characteristic(desc)
    if n is not None:
        families.append(("characteristic", [(f"{n}x", (natural_multiple(n), vanish))]))
    return families


def check_presentation(desc: SemiringDesc, seed: int = DEFAULT_SEED) -> AxiomReport:
    """Every presented equation of the active category, checked extensionally."""
    desc.require_finite()
    report = AxiomReport()
    for name, members in presentation_equations(desc):
        report.add(name, _check_family(desc, members, seed))
    logger.info(f"presentation over {desc.id}: {'pass' if report.passed else report.failures}")
    return report


def _negate_extension(desc: SemiringDesc) -> GeneratorExtension:
    if not desc.has_neg:
        raise UnsupportedGenerator(f"{desc.id} has no negation to extend with.")
    return GeneratorExtension(
        "negate", 1, 1,
        semantics=lambda d, x: [d.vneg(x)],
        reverse_rule=lambda g: Par(DISCARD, g),
        equations_rule=lambda g: [
            (seq_all([COPY, Par(IDENTITY, g), ADD]), Seq(DISCARD, ZERO)),
            (Seq(ZERO, g), ZERO),
        ],
    )


def _compare_extension(desc: SemiringDesc) -> GeneratorExtension:
    elements = list(desc.elements())
    return GeneratorExtension(
        "compare", 2, 1,
        semantics=lambda d, x, y: [d.vcompare(x, y)],
        reverse_rule=Par(discard_n(2), COPY),
        equations_rule=lambda g: [
            (Seq(_const_pair(s, t), g), ONE if s == t else ZERO) for s in elements for t in elements
        ],
    )


def _square_change_extension(desc: SemiringDesc) -> GeneratorExtension:
    # Proposed reverse (x, d) -> d * d is not additive in d.
    return GeneratorExtension(
        "square-change", 1, 1,
        semantics=lambda d, x: [x],
        reverse_rule=Par(DISCARD, Seq(COPY, MUL)),
    )


def _zero_discard_extension(desc: SemiringDesc) -> GeneratorExtension:
    # Defined equal to the zero map, but with an identity-like proposed reverse.
    return GeneratorExtension(
        "zero-discard", 1, 1,
        semantics=lambda d, x: [d.full(len(x), d.zero)],
        reverse_rule=Par(DISCARD, IDENTITY),
        equations_rule=lambda g: [(g, Seq(DISCARD, ZERO))],
    )


BUILTIN_EXTENSIONS = {
    "negate": _negate_extension,
    "compare": _compare_extension,
    "square-change": _square_change_extension,
    "zero-discard": _zero_discard_extension,
}


def builtin_extension(name: str, desc: SemiringDesc) -> GeneratorExtension:
    if name not in BUILTIN_EXTENSIONS:
        raise ValueError(f"Unknown extension {name!r}; choose from {sorted(BUILTIN_EXTENSIONS)}.")
    return BUILTIN_EXTENSIONS[name](desc)
