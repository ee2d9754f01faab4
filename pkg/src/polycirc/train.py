""" Reverse-derivative ascent over discrete semirings, and the weight-sharing wrap-around demo."""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import yaml
from tqdm import tqdm

from .circuit import ADD, COPY, MUL, Circuit, Par, add_n, id_n, permute, seq_all
from .config import DEFAULT_SEED
from .dsl import parse_dsl
from .errors import InvalidErrorMap, ShapeMismatch
from .evaluate import FunctionTable, all_inputs, evaluate, evaluate_batch
from .rdiff import reverse
from .semiring import Element, SemiringDesc

logger = logging.getLogger(__name__)

Params = Tuple[Element, ...]


@dataclass
class Model:
    """A circuit f : p + a -> b whose first p inputs are trainable parameters."""

    circuit: Circuit
    param_arity: int
    input_arity: int

    def __post_init__(self):
        if self.param_arity < 0 or self.input_arity < 0:
            raise ValueError("Parameter and input arities must be non-negative.")
        if self.param_arity + self.input_arity != self.circuit.arity:
            raise ShapeMismatch(
                f"Model with {self.param_arity} params and {self.input_arity} inputs "
                f"does not fit a circuit of shape {self.circuit.shape}."
            )

    @property
    def output_arity(self) -> int:
        return self.circuit.coarity

    @cached_property
    def reverse(self) -> Circuit:
        return reverse(self.circuit)

    def predict(self, desc: SemiringDesc, params: Sequence[Element], inputs: np.ndarray) -> np.ndarray:
        inputs = np.asarray(inputs, dtype=np.int64).reshape(-1, self.input_arity)
        tiled = np.tile(np.asarray(params, dtype=np.int64), (inputs.shape[0], 1))
        return evaluate_batch(desc, self.circuit, np.hstack([tiled, inputs]))


@dataclass
class Dataset:
    """Samples (x, y) over the active semiring, one per row."""

    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=np.int64)
        self.targets = np.asarray(self.targets, dtype=np.int64)
        if self.inputs.ndim != 2 or self.targets.ndim != 2 or len(self.inputs) != len(self.targets):
            raise ShapeMismatch("Inputs and targets must be 2-d arrays with the same number of rows.")

    def __len__(self):
        return len(self.inputs)

    def check(self, desc: SemiringDesc, model: Model):
        if self.inputs.shape[1] != model.input_arity or self.targets.shape[1] != model.output_arity:
            raise ShapeMismatch(
                f"Dataset rows {self.inputs.shape[1]}->{self.targets.shape[1]} do not fit "
                f"a model {model.input_arity}->{model.output_arity}."
            )
        for value in np.unique(np.concatenate([self.inputs.ravel(), self.targets.ravel()])):
            desc.check_element(int(value))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[Sequence[int], Sequence[int]]]) -> "Dataset":
        inputs = [list(x) for x, _ in pairs]
        targets = [list(y) for _, y in pairs]
        a = len(inputs[0]) if inputs else 0
        b = len(targets[0]) if targets else 0
        return cls(np.array(inputs, dtype=np.int64).reshape(-1, a), np.array(targets, dtype=np.int64).reshape(-1, b))

    @classmethod
    def read_csv(cls, path_or_buf) -> "Dataset":
        """Reads the x0..x{a-1},y0..y{b-1} CSV format shared with function tables."""
        table = FunctionTable.from_frame(pd.read_csv(path_or_buf, dtype=np.int64), semiring_id="")
        return cls(table.inputs, table.outputs)


@dataclass
class TrainConfig:
    """Training hyper-parameters.

    Args:
        epochs (int): Passes over the dataset.
        seed (int): Seeds parameter initialization and the optional shuffle.
        error_map (Circuit): 2b -> b circuit computing the output change from (prediction, target);
            defaults to componentwise addition.
        param_init (tuple): Explicit initial parameters; drawn uniformly from the carrier when None.
        shuffle (bool): Visit samples in a seeded random order each epoch instead of dataset order.
        strict_error_map (bool): Reject error maps that are nonzero on (y, y); otherwise only warn.
    """

    epochs: int = 1
    seed: int = DEFAULT_SEED
    error_map: Optional[Circuit] = None
    param_init: Optional[Tuple[int, ...]] = None
    shuffle: bool = False
    strict_error_map: bool = True

    @classmethod
    def from_yaml(cls, path: str, **overrides) -> "TrainConfig":
        """Reads a YAML config; keyword overrides that are not None win over file values."""
        with open(path) as f:
            values = yaml.safe_load(f) or {}
        unknown = set(values) - {"epochs", "seed", "error_map", "param_init", "shuffle", "strict_error_map"}
        if unknown:
            raise ValueError(f"Unknown training config keys: {sorted(unknown)}.")
        values.update({k: v for k, v in overrides.items() if v is not None})
        if isinstance(values.get("error_map"), str):
            values["error_map"] = parse_dsl(f"let error_map = {values['error_map']}")["error_map"]
        if values.get("param_init") is not None:
            values["param_init"] = tuple(int(v) for v in values["param_init"])
        return cls(**values)


@dataclass
class TrainResult:
    params: Params
    history: List[Dict] = field(default_factory=list)

    @property
    def accuracy(self) -> float:
        return self.history[-1]["accuracy"] if self.history else 0.0

    def to_dict(self) -> dict:
        return {"params": list(self.params), "history": self.history}


def check_error_map(desc: SemiringDesc, error_map: Circuit, width: int, strict: bool = True):
    """Shape-checks an error map and requires error_map(y, y) = 0 for every y."""
    if error_map.arity != 2 * width or error_map.coarity != width:
        raise ShapeMismatch(f"Error map must have shape {2 * width}->{width}, got {error_map.shape}.")
    targets = all_inputs(desc, width)
    outputs = evaluate_batch(desc, error_map, np.hstack([targets, targets]))
    bad = np.nonzero((outputs != desc.zero).any(axis=1))[0]
    if len(bad):
        y = tuple(int(v) for v in targets[bad[0]])
        message = f"Error map is nonzero on equal prediction and target {y} over {desc.id}."
        if strict:
            raise InvalidErrorMap(message)
        logger.warning(message)


def rda_step(
    desc: SemiringDesc,
    model: Model,
    params: Sequence[Element],
    x: Sequence[Element],
    y: Sequence[Element],
    error_map: Circuit = None,
) -> Params:
    """One reverse-derivative ascent update: params + first block of R[f]((params, x), error(f(params, x), y))."""
    if len(params) != model.param_arity or len(x) != model.input_arity or len(y) != model.output_arity:
        raise ShapeMismatch(
            f"Step with {len(params)} params, {len(x)} inputs and {len(y)} targets "
            f"on a model {model.param_arity}+{model.input_arity}->{model.output_arity}."
        )
    if error_map is None:
        error_map = add_n(model.output_arity)
    point = tuple(params) + tuple(x)
    prediction = evaluate(desc, model.circuit, point)
    change = evaluate(desc, error_map, prediction + tuple(y))
    grads = evaluate(desc, model.reverse, point + change)
    return tuple(desc.add(p, d) for p, d in zip(params, grads[: model.param_arity]))


def accuracy(desc: SemiringDesc, model: Model, params: Sequence[Element], dataset: Dataset) -> float:
    """Fraction of samples predicted exactly."""
    if len(dataset) == 0:
        return 0.0
    predictions = model.predict(desc, params, dataset.inputs)
    return float((predictions == dataset.targets).all(axis=1).mean())


def train(
    desc: SemiringDesc, model: Model, dataset: Dataset, cfg: TrainConfig, quiet: bool = True
) -> TrainResult:
    """Applies rda_step to every sample, epoch after epoch.

    Args:
        desc (SemiringDesc): Finite semiring.
        model (Model): Model to train.
        dataset (Dataset): Samples in the order they are visited.
        cfg (TrainConfig): Hyper-parameters.
        quiet (bool): Hide the progress bar.

    Returns:
        TrainResult: Final params and one history entry per epoch.
    """
    desc.require_finite()
    dataset.check(desc, model)
    error_map = cfg.error_map if cfg.error_map is not None else add_n(model.output_arity)
    check_error_map(desc, error_map, model.output_arity, cfg.strict_error_map)

    rng = np.random.default_rng(cfg.seed)
    if cfg.param_init is not None:
        if len(cfg.param_init) != model.param_arity:
            raise ShapeMismatch(f"Expected {model.param_arity} initial params, got {len(cfg.param_init)}.")
        params = tuple(desc.check_element(v) for v in cfg.param_init)
    else:
        params = tuple(int(v) for v in rng.integers(desc.size, size=model.param_arity))
    logger.info(f"training {model.circuit.shape} model over {desc.id}, initial params: {list(params)}")

    result = TrainResult(params)
    progress_bar = tqdm(range(cfg.epochs * len(dataset)), disable=quiet)
    for epoch in range(cfg.epochs):
        order = rng.permutation(len(dataset)) if cfg.shuffle else range(len(dataset))
        for i in order:
            params = rda_step(desc, model, params, dataset.inputs[i], dataset.targets[i], error_map)
            progress_bar.update(1)
        acc = accuracy(desc, model, params, dataset)
        result.history.append({"epoch": epoch, "accuracy": acc, "params": list(params)})
        logger.info(f"epoch {epoch}: accuracy: {acc} params: {list(params)}")
    progress_bar.close()
    result.params = params
    return result


def wrap_around_circuit() -> Circuit:
    """(p, x1, x2) |-> p * x1 + p * x2, the parameter shared by two sub-models through a copy."""
    return seq_all([Par(COPY, id_n(2)), permute([0, 2, 1, 3]), Par(MUL, MUL), ADD])


def wrap_around_demo(desc: SemiringDesc) -> dict:
    """Both sub-models ask for a parameter change of 1; reports what the shared parameter receives."""
    param, x1, x2, change = desc.zero, desc.one, desc.one, desc.one
    model = Model(wrap_around_circuit(), 1, 2)
    update = evaluate(desc, model.reverse, (param, x1, x2, change))[0]
    sub_model = reverse(MUL)
    sub_gradients = [
        evaluate(desc, sub_model, (param, x, change))[0] for x in (x1, x2)
    ]
    report = {
        "semiring": desc.id,
        "param": param,
        "inputs": [x1, x2],
        "change": change,
        "sub_gradients": sub_gradients,
        "update": update,
        "param_after": desc.add(param, update),
        "update_is_sum": update == desc.sum(sub_gradients),
    }
    logger.info(f"wrap-around over {desc.id}: sub-gradients {sub_gradients} give update {update}")
    return report
