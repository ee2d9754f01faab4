""" Differentiable polynomial circuits over commutative semirings."""
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
    Shape,
    Tag,
    compose,
    const,
    tensor,
)
from .dsl import decode_json, encode_json, parse_dsl, render_dsl
from .evaluate import FunctionTable, evaluate, extensionally_equal, function_table
from .polynormal import PolyMap, Polynomial, formal_partial, from_poly, jt_apply, poly_equal, to_poly
from .rdiff import forward, is_linear, is_linear_in, partial, reverse
from .semiring import SemiringDesc, check_semiring_axioms, make_semiring
from .synth import delta_circuit, fermat_compare, synth_from_table
from .train import Dataset, Model, TrainConfig, rda_step, train, wrap_around_demo
from .verify import (
    GeneratorExtension,
    check_extension,
    check_preservation,
    check_presentation,
    check_rdc_axioms,
)

__version__ = "0.1.0"
