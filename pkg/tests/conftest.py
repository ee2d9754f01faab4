import numpy as np
from hypothesis import strategies as st

from polycirc.circuit import random_circuit
from polycirc.config import RING_SEMIRINGS, SHIPPED_FINITE
from polycirc.semiring import make_semiring

finite_semirings = st.sampled_from(SHIPPED_FINITE).map(make_semiring)
ring_semirings = st.sampled_from(RING_SEMIRINGS).map(make_semiring)


@st.composite
def circuits(draw, desc, max_arity=2, max_gens=8, allow_compare=False, allow_negate=False, arity=None):
    """Seeded random circuits whose constants fit desc."""
    seed = draw(st.integers(0, 2**32 - 1))
    if arity is None:
        arity = draw(st.integers(0, max_arity))
    n_gens = draw(st.integers(1, max_gens))
    return random_circuit(
        np.random.default_rng(seed),
        arity,
        n_gens,
        desc.size,
        allow_compare=allow_compare,
        allow_negate=allow_negate and desc.has_neg,
    )
