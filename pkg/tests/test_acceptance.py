"""End-to-end checks at desk scale. Run with: pytest -m slow"""
import itertools

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
    const,
    random_circuit,
)
from polycirc.config import SHIPPED_FINITE
from polycirc.evaluate import FunctionTable, all_inputs, evaluate_batch, extensionally_equal, function_table
from polycirc.polynormal import jt_apply_batch, to_poly
from polycirc.rdiff import reverse
from polycirc.semiring import make_semiring
from polycirc.synth import delta_circuit, fermat_compare, synth_from_table
from polycirc.train import Dataset, Model, TrainConfig, train, wrap_around_demo
from polycirc.verify import (
    builtin_extension,
    check_extension,
    check_presentation,
    check_rdc_axioms,
    random_preservation_suite,
)

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("spec", ["zmod:2", "zmod:3", "zmod:5", "sat:4"])
def test_reverse_agrees_with_jacobian_transpose(spec):
    desc = make_semiring(spec)
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        c = random_circuit(rng, int(rng.integers(4)), int(rng.integers(1, 21)), desc.size)
        m = c.arity
        rows = all_inputs(desc, m + c.coarity)
        expected = jt_apply_batch(to_poly(desc, c), rows[:, :m], rows[:, m:])
        assert np.array_equal(evaluate_batch(desc, reverse(c), rows), expected), c


@pytest.mark.parametrize("spec", ["zmod:2", "zmod:3", "sat:2", "sat:3"])
def test_axioms_for_generators_and_random_circuits(spec):
    desc = make_semiring(spec)
    gens = [ADD, MUL, ZERO, ONE, COPY, DISCARD, IDENTITY, TWIST, COMPARE] + [const(s) for s in desc.elements()]
    if desc.has_neg:
        gens.append(NEGATE)
    for g in gens:
        assert check_rdc_axioms(desc, g).passed, g
    rng = np.random.default_rng(7)
    for _ in range(200):
        c = random_circuit(rng, int(rng.integers(3)), int(rng.integers(1, 9)), desc.size, allow_compare=True, max_width=2)
        report = check_rdc_axioms(desc, c)
        assert report.passed, (c, report.failures)


def test_extensions():
    for n in (2, 3, 5):
        desc = make_semiring(f"zmod:{n}")
        assert check_extension(desc, builtin_extension("negate", desc)).passed
    for spec in SHIPPED_FINITE:
        desc = make_semiring(spec)
        assert check_extension(desc, builtin_extension("compare", desc)).passed
    z3 = make_semiring("zmod:3")
    result = check_extension(z3, builtin_extension("square-change", z3))["additivity"]
    assert result.counterexample == (0, 1, 1)


def test_preservation_on_random_pairs():
    report = random_preservation_suite(make_semiring("zmod:2"), pairs=500, seed=42)
    assert report.passed, report["preservation"].detail


def test_functional_completeness():
    z2 = make_semiring("zmod:2")
    for outputs in itertools.product(range(2), repeat=4):
        table = FunctionTable(2, 1, z2.id, all_inputs(z2, 2), np.array(outputs).reshape(-1, 1))
        assert np.array_equal(function_table(z2, synth_from_table(z2, table)).outputs, table.outputs)
    z3 = make_semiring("zmod:3")
    rng = np.random.default_rng(3)
    for _ in range(100):
        table = FunctionTable(2, 1, z3.id, all_inputs(z3, 2), rng.integers(3, size=(9, 1)))
        assert np.array_equal(function_table(z3, synth_from_table(z3, table)).outputs, table.outputs)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_fermat_comparator(p):
    assert extensionally_equal(make_semiring(f"zp:{p}"), fermat_compare(p), COMPARE)


def test_presentation_equations():
    for n in range(2, 7):
        report = check_presentation(make_semiring(f"zmod:{n}"))
        assert report.passed, (n, report.failures)
        assert report["characteristic"].passed
    assert check_presentation(make_semiring("zmod:5"))["const_add"].cases == 25
    for n in range(2, 9):
        report = check_presentation(make_semiring(f"sat:{n}"))
        assert report.passed, (n, report.failures)


@pytest.mark.parametrize("spec", ["zmod:2", "zmod:3", "sat:3"])
def test_straight_through(spec):
    desc = make_semiring(spec)
    assert extensionally_equal(desc, reverse(delta_circuit()), reverse(IDENTITY))


def test_wrap_around_numbers():
    assert wrap_around_demo(make_semiring("zmod:2"))["update"] == 0
    assert wrap_around_demo(make_semiring("sat:2"))["update"] == 1


def test_training_sanity():
    z2 = make_semiring("zmod:2")
    model = Model(ADD, param_arity=1, input_arity=1)
    dataset = Dataset.from_pairs([((0,), (1,)), ((1,), (0,))])
    results = [train(z2, model, dataset, TrainConfig(epochs=1, seed=9)) for _ in range(2)]
    assert results[0].params == (1,)
    assert results[0].accuracy == 1.0
    assert results[0].to_dict() == results[1].to_dict()
