import numpy as np
import pytest

from polycirc.circuit import (
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
    Par,
    Seq,
    const,
)
from polycirc.config import RANDOM_CASES, SHIPPED_FINITE
from polycirc.errors import InfiniteCarrier, ShapeMismatch, UnsupportedGenerator
from polycirc.evaluate import FunctionTable, all_inputs, evaluate
from polycirc.report import FAIL, PASS, SKIPPED
from polycirc.semiring import make_semiring
from polycirc.verify import (
    GeneratorExtension,
    additivity_equation,
    builtin_extension,
    characteristic,
    check_equal,
    check_extension,
    check_preservation,
    check_presentation,
    check_rdc_axioms,
    random_preservation_suite,
    sample_inputs,
)

Z2 = make_semiring("zmod:2")
Z3 = make_semiring("zmod:3")
AXIOMS = ["additivity", "additivity_zero", "linearity_of_change", "symmetry_of_partials"]


@pytest.mark.parametrize("spec", SHIPPED_FINITE)
def test_generators_satisfy_axioms(spec):
    desc = make_semiring(spec)
    gens = [ADD, MUL, ZERO, ONE, COPY, DISCARD, IDENTITY, TWIST, COMPARE, const(desc.size - 1)]
    if desc.has_neg:
        gens.append(NEGATE)
    for g in gens:
        report = check_rdc_axioms(desc, g)
        assert list(report.results) == AXIOMS
        assert report.passed, (g, report.failures)


def test_composite_satisfies_axioms():
    assert check_rdc_axioms(Z3, Seq(Par(Seq(COPY, MUL), IDENTITY), MUL)).passed


def test_square_change_fails_additivity():
    ext = builtin_extension("square-change", Z3)
    report = check_rdc_axioms(Z3, ext.generator)
    result = report["additivity"]
    assert result.status == FAIL
    assert result.counterexample == (0, 1, 1)
    lhs, rhs = additivity_equation(ext.generator)
    assert evaluate(Z3, lhs, result.counterexample) != evaluate(Z3, rhs, result.counterexample)


def test_square_change_is_additive_in_characteristic_two():
    assert check_rdc_axioms(Z2, builtin_extension("square-change", Z2).generator)["additivity"].passed


@pytest.mark.parametrize("name", ["negate", "compare"])
def test_sound_extensions(name):
    report = check_extension(Z3, builtin_extension(name, Z3))
    assert report.passed, report.failures
    assert "equation_0_reverse" in report


def test_negate_needs_a_ring():
    with pytest.raises(UnsupportedGenerator):
        builtin_extension("negate", make_semiring("sat:3"))


def test_zero_discard_breaks_well_definedness():
    report = check_extension(Z3, builtin_extension("zero-discard", Z3))
    assert report["equation_0"].passed
    assert report["additivity"].passed
    assert report.failures == ["equation_0_reverse"]
    assert report["equation_0_reverse"].counterexample == (0, 1)


def test_unknown_extension():
    with pytest.raises(ValueError):
        builtin_extension("frobnicate", Z3)


def test_extension_with_table_semantics():
    successor = FunctionTable(1, 1, "zmod:3", all_inputs(Z3, 1), np.array([[1], [2], [0]]))
    ext = GeneratorExtension("successor", 1, 1, semantics=successor, reverse_rule=Par(DISCARD, IDENTITY))
    assert evaluate(Z3, ext.generator, (2,)) == (0,)
    assert check_extension(Z3, ext).passed


def test_extension_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        GeneratorExtension("bad", 1, 1, semantics=lambda d, x: [x], reverse_rule=IDENTITY)
    with pytest.raises(ShapeMismatch):
        GeneratorExtension(
            "bad", 1, 1, semantics=lambda d, x: [x], reverse_rule=Par(DISCARD, IDENTITY),
            equations_rule=lambda g: [(g, ADD)],
        )


def test_check_equal():
    assert check_equal(Z2, Seq(COPY, MUL), IDENTITY).passed
    result = check_equal(Z3, Seq(COPY, MUL), IDENTITY)
    assert (result.status, result.counterexample) == (FAIL, (2,))
    with pytest.raises(ShapeMismatch):
        check_equal(Z3, ADD, IDENTITY)


def test_sample_inputs_above_exhaustive_limit():
    z5 = make_semiring("zmod:5")
    rows, exhaustive = sample_inputs(z5, 7, seed=3)
    assert not exhaustive
    assert rows.shape == (RANDOM_CASES, 7)
    assert np.array_equal(rows, sample_inputs(z5, 7, seed=3)[0])
    assert [tuple(r) for r in rows] == sorted(tuple(r) for r in rows)
    rows, exhaustive = sample_inputs(z5, 2)
    assert exhaustive and len(rows) == 25
    assert np.array_equal(rows, all_inputs(z5, 2))
    rows, exhaustive = sample_inputs(make_semiring("zmod:4"), 8)
    assert exhaustive and len(rows) == 4**8


def test_preservation():
    report = check_preservation(Z3, MUL, COPY)
    assert report.passed
    assert report["premise"].status == PASS
    assert "seq.additivity" in report and "par.symmetry_of_partials" in report

    report = check_preservation(Z3, ADD, MUL)
    assert report["seq"].status == SKIPPED
    assert "par.additivity" in report


def test_preservation_with_failing_component():
    report = check_preservation(Z3, builtin_extension("square-change", Z3).generator, IDENTITY)
    assert report["premise"].status == SKIPPED
    assert report.passed


def test_random_preservation_suite():
    report = random_preservation_suite(Z2, pairs=10, seed=5, max_size=6)
    assert list(report.results) == ["preservation"]
    assert report.passed
    assert report["preservation"].cases == 10


def test_characteristic():
    assert characteristic(Z2) == 2
    assert characteristic(make_semiring("zmod:5")) == 5
    assert characteristic(make_semiring("sat:3")) is None


def test_presentation():
    report = check_presentation(Z2)
    assert report.passed, report.failures
    assert "characteristic" in report and "negate_inverse" in report
    assert check_presentation(make_semiring("zmod:5"))["const_add"].cases == 25

    sat3 = check_presentation(make_semiring("sat:3"))
    assert sat3.passed, sat3.failures
    assert sat3["distributivity"].cases == 27
    assert "negate_inverse" not in sat3 and "characteristic" not in sat3


def test_presentation_needs_finite_carrier():
    with pytest.raises(InfiniteCarrier):
        check_presentation(make_semiring("nat"))
