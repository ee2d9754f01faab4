import os

# Evaluation budget (rows of |S|^m) for tables and extensional equality.
DEFAULT_BUDGET = 2**20
BUDGET_ENV_VAR = "POLYCIRC_BUDGET"

# Axiom checks enumerate every case up to this many, then fall back to seeded sampling.
EXHAUSTIVE_LIMIT = 2**16
RANDOM_CASES = 10**4

# Machine-natural carrier of "nat".
NAT_MAX = 2**64 - 1

# Finite carriers are tabulated as k x k int64 arrays; larger moduli are rejected.
MAX_CARRIER_SIZE = 4096

DEFAULT_SEED = 42

SHIPPED_FINITE = ["zmod:2", "zmod:3", "zmod:5", "sat:2", "sat:3", "sat:4"]
RING_SEMIRINGS = ["zmod:2", "zmod:3", "zmod:5"]


def get_budget(override: int = None) -> int:
    """Returns the evaluation budget: explicit override, then $POLYCIRC_BUDGET, then the default."""
    if override is not None:
        return int(override)
    value = os.environ.get(BUDGET_ENV_VAR)
    if value is None or value == "":
        return DEFAULT_BUDGET
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV_VAR} must be an integer, got {value!r}.")
