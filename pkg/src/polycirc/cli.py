""" Command-line driver: polycirc <command> [options]."""
import argparse
import json
import logging
import os
import sys
from typing import Dict, List

from .circuit import Circuit
from .config import DEFAULT_SEED
from .dsl import dump_circuits, load_circuits, parse_dsl
from .errors import PolyCircError, UnknownName
from .evaluate import FunctionTable, evaluate, function_table
from .polynormal import to_poly
from .rdiff import forward, partial, reverse
from .semiring import check_semiring_axioms, make_semiring
from .synth import synth_from_table
from .train import Dataset, Model, TrainConfig, train, wrap_around_demo
from .utils import parse_tuple, save_args, set_seed
from .verify import (
    BUILTIN_EXTENSIONS,
    builtin_extension,
    check_extension,
    check_preservation,
    check_presentation,
    check_rdc_axioms,
    random_preservation_suite,
)

logger = logging.getLogger(__name__)


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "--semiring", type=str, default=None, help="Semiring id: zmod:<n>, zp:<p>, sat:<n>, nat or bool."
    )
    parser.add_argument(
        "--budget", type=int, default=None, help="Maximum number of evaluated rows, overrides $POLYCIRC_BUDGET."
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for every randomized step.")
    parser.add_argument("--output", type=str, default=None, help="Write the result here instead of stdout.")
    parser.add_argument(
        "--format", type=str, default="json", choices=["json", "dsl"], help="Format of circuit outputs."
    )
    parser.add_argument(
        "--input_format",
        type=str,
        default=None,
        choices=["json", "dsl"],
        help="Format of circuit inputs, detected from the file extension by default.",
    )
    parser.add_argument("--pretty", action="store_true", help="Human-readable output instead of JSON/CSV.")
    parser.add_argument(
        "--output_dir", type=str, default=None, help="Directory for loginfo.log, args.json and reports."
    )
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level.")
    parser.add_argument("--quiet", action="store_true", help="Hide progress bars.")
    return parser


def _circuit_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--circuit", type=str, required=True, help="A .dsl or .json circuit file.")
    parser.add_argument(
        "--name", type=str, default=None, help="Definition to use, defaults to the last one in the file."
    )


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="polycirc", description="Differentiable polynomial circuits over commutative semirings"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("eval", parents=[common], help="Evaluate a circuit on input tuples.")
    _circuit_arguments(p)
    p.add_argument(
        "--input", type=str, action="append", default=None, help="Comma separated input codes, repeatable."
    )

    p = commands.add_parser("table", parents=[common], help="Print the full function table as CSV.")
    _circuit_arguments(p)

    p = commands.add_parser("rdiff", parents=[common], help="Emit the reverse derivative circuit.")
    _circuit_arguments(p)

    p = commands.add_parser("forward", parents=[common], help="Emit the forward (or partial) derivative circuit.")
    _circuit_arguments(p)
    p.add_argument(
        "--split", type=int, default=None, help="Differentiate only in the inputs after this index."
    )

    p = commands.add_parser("normalize", parents=[common], help="Print the polynomial normal form.")
    _circuit_arguments(p)

    p = commands.add_parser("synth", parents=[common], help="Compile a function table CSV into a circuit.")
    p.add_argument("--table", type=str, required=True, help="CSV with header x0..,y0.. in lexicographic order.")
    p.add_argument("--name", type=str, default="synth", help="Name of the emitted definition.")

    p = commands.add_parser("verify", help="Check axioms and equations.")
    checks = p.add_subparsers(dest="check", required=True)
    v = checks.add_parser("axioms", parents=[common], help="Reverse-derivative axioms of one circuit.")
    _circuit_arguments(v)
    v = checks.add_parser("extension", parents=[common], help="A built-in generator extension.")
    v.add_argument("--extension", type=str, required=True, choices=sorted(BUILTIN_EXTENSIONS))
    checks.add_parser("presentation", parents=[common], help="Presented equations of the semiring.")
    v = checks.add_parser("preservation", parents=[common], help="Preservation under ; and *.")
    v.add_argument("--circuit", type=str, default=None, help="File holding the two circuits.")
    v.add_argument("--f", type=str, default=None, help="First circuit name.")
    v.add_argument("--g", type=str, default=None, help="Second circuit name.")
    v.add_argument("--random_pairs", type=int, default=None, help="Check this many seeded random pairs instead.")
    v.add_argument("--max_arity", type=int, default=2)
    v.add_argument("--max_size", type=int, default=12)
    checks.add_parser("semiring", parents=[common], help="Commutative semiring laws of the carrier.")

    p = commands.add_parser("train", parents=[common], help="Reverse-derivative ascent on a dataset.")
    _circuit_arguments(p)
    p.add_argument("--dataset", type=str, required=True, help="CSV with header x0..,y0..")
    p.add_argument("--params", type=int, required=True, help="Number of leading parameter inputs.")
    p.add_argument("--config", type=str, default=None, help="YAML training config; flags win over it.")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--error_map", type=str, default=None, help="DSL expression of shape 2b -> b.")
    p.add_argument("--param_init", type=str, default=None, help="Comma separated initial parameters.")
    p.add_argument("--shuffle", action="store_true", help="Seeded shuffle of the samples every epoch.")
    p.add_argument(
        "--allow_nonzero_error_map",
        action="store_true",
        help="Only warn when the error map is nonzero on (y, y).",
    )

    p = commands.add_parser("demo", help="Case studies.")
    demos = p.add_subparsers(dest="demo", required=True)
    demos.add_parser("wrap-around", parents=[common], help="Shared parameter with two unit sub-gradients.")

    p = commands.add_parser("check", parents=[common], help="Parse and shape-check a circuit file.")
    p.add_argument("--circuit", type=str, required=True)
    return parser


def _sanity_check(args: argparse.Namespace):
    if args.command != "check" and args.semiring is None:
        raise ValueError("--semiring is required.")
    if args.budget is not None and args.budget < 1:
        raise ValueError("--budget must be positive.")
    if args.command == "verify" and args.check == "preservation":
        if args.random_pairs is None and (args.circuit is None or args.f is None or args.g is None):
            raise ValueError("Need either --random_pairs or --circuit with --f and --g.")
    if args.command == "train" and args.params < 0:
        raise ValueError("--params must be non-negative.")


def parse_arguments(argv: List[str] = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _sanity_check(args)
    except ValueError as err:
        parser.error(str(err))
    return args


def setup_logging(args: argparse.Namespace):
    handlers = [logging.StreamHandler(sys.stderr)]
    if args.output_dir is not None:
        os.makedirs(args.output_dir, exist_ok=True)
        handlers.append(logging.FileHandler(os.path.join(args.output_dir, "loginfo.log")))
    logging.basicConfig(
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        datefmt="%m/%d/%Y %H:%M:%S",
        level=logging.DEBUG if args.verbose else logging.INFO,
        handlers=handlers,
        force=True,
    )


def _select(circuits: Dict[str, Circuit], name: str) -> Circuit:
    if name is None:
        return list(circuits.values())[-1]
    if name not in circuits:
        raise UnknownName(f"No definition named {name!r}; available: {list(circuits)}.")
    return circuits[name]


def _load(args: argparse.Namespace, desc, name: str = None) -> Circuit:
    circuits = load_circuits(args.circuit, desc, args.input_format)
    return _select(circuits, name if name is not None else args.name)


def _json(value) -> str:
    return json.dumps(value, indent=2) + "\n"


def _emit_circuit(args, desc, name: str, circuit: Circuit) -> str:
    return dump_circuits(desc.id, {name: circuit}, args.format).decode("utf-8")


def cmd_eval(args, desc) -> str:
    circuit = _load(args, desc)
    lines = []
    for text in args.input or [""]:
        x = parse_tuple(text)
        y = evaluate(desc, circuit, x)
        if args.pretty:
            lines.append(f"({', '.join(map(str, x))}) -> ({', '.join(map(str, y))})")
        else:
            lines.append(",".join(map(str, y)))
    return "\n".join(lines) + "\n"


def cmd_table(args, desc) -> str:
    table = function_table(desc, _load(args, desc), args.budget)
    if args.pretty:
        return table.to_frame().to_string(index=False) + "\n"
    return table.to_csv()


def cmd_rdiff(args, desc) -> str:
    circuit = _load(args, desc)
    name = args.name or "f"
    return _emit_circuit(args, desc, f"{name}_reverse", reverse(circuit))


def cmd_forward(args, desc) -> str:
    circuit = _load(args, desc)
    name = args.name or "f"
    if args.split is not None:
        return _emit_circuit(args, desc, f"{name}_partial_{args.split}", partial(circuit, args.split))
    return _emit_circuit(args, desc, f"{name}_forward", forward(circuit))


def cmd_normalize(args, desc) -> str:
    pm = to_poly(desc, _load(args, desc))
    if args.pretty:
        return pm.render() + "\n"
    return _json(pm.to_dict())


def cmd_synth(args, desc) -> str:
    table = FunctionTable.read_csv(args.table, desc.id)
    circuit = synth_from_table(desc, table, args.budget, quiet=args.quiet)
    return _emit_circuit(args, desc, args.name, circuit)


def _render_report(report) -> str:
    lines = []
    for name, result in report.results.items():
        line = f"{name:<32} {result.status:<8} {result.cases:>8}"
        if result.counterexample is not None:
            line += f"  counterexample {list(result.counterexample)}"
        if result.detail:
            line += f"  {result.detail}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def cmd_verify(args, desc) -> str:
    if args.check == "axioms":
        report = check_rdc_axioms(desc, _load(args, desc), args.seed)
    elif args.check == "extension":
        report = check_extension(desc, builtin_extension(args.extension, desc), args.seed)
    elif args.check == "presentation":
        report = check_presentation(desc, args.seed)
    elif args.check == "semiring":
        report = check_semiring_axioms(desc)
    elif args.random_pairs is not None:
        report = random_preservation_suite(
            desc, args.random_pairs, args.seed, args.max_arity, args.max_size, quiet=args.quiet
        )
    else:
        circuits = load_circuits(args.circuit, desc, args.input_format)
        report = check_preservation(desc, _select(circuits, args.f), _select(circuits, args.g), args.seed)
    if args.output_dir is not None:
        with open(os.path.join(args.output_dir, "report.json"), "w") as f:
            json.dump(report.to_dict(), f, indent=2)
    return _render_report(report) if args.pretty else _json(report.to_dict())


def cmd_train(args, desc) -> str:
    circuit = _load(args, desc)
    model = Model(circuit, args.params, circuit.arity - args.params)
    overrides = {
        "epochs": args.epochs,
        "seed": args.seed,
        "error_map": args.error_map,
        "param_init": parse_tuple(args.param_init) if args.param_init is not None else None,
        "shuffle": args.shuffle or None,
        "strict_error_map": False if args.allow_nonzero_error_map else None,
    }
    if args.config is not None:
        cfg = TrainConfig.from_yaml(args.config, **overrides)
    else:
        values = {k: v for k, v in overrides.items() if v is not None}
        if "error_map" in values:
            values["error_map"] = parse_dsl(f"let error_map = {values['error_map']}")["error_map"]
        cfg = TrainConfig(**values)
    dataset = Dataset.read_csv(args.dataset)
    result = train(desc, model, dataset, cfg, quiet=args.quiet)
    payload = {"semiring": desc.id, **result.to_dict()}
    if args.output_dir is not None:
        save_args(args)
        with open(os.path.join(args.output_dir, "report.json"), "w") as f:
            json.dump(payload, f, indent=2)
    if args.pretty:
        return "".join(
            f"epoch {h['epoch']}: accuracy: {h['accuracy']} params: {h['params']}\n" for h in result.history
        )
    return _json(payload)


def cmd_demo(args, desc) -> str:
    report = wrap_around_demo(desc)
    if args.pretty:
        return (
            f"{report['semiring']}: sub-gradients {report['sub_gradients']} -> "
            f"parameter update {report['update']}\n"
        )
    return _json(report)


def cmd_check(args, desc) -> str:
    circuits = load_circuits(args.circuit, desc, args.input_format)
    shapes = {name: str(c.shape) for name, c in circuits.items()}
    if args.pretty:
        return "".join(f"{name}: {shape}\n" for name, shape in shapes.items())
    return _json(shapes)


COMMANDS = {
    "eval": cmd_eval,
    "table": cmd_table,
    "rdiff": cmd_rdiff,
    "forward": cmd_forward,
    "normalize": cmd_normalize,
    "synth": cmd_synth,
    "verify": cmd_verify,
    "train": cmd_train,
    "demo": cmd_demo,
    "check": cmd_check,
}


def run(argv: List[str] = None) -> int:
    """Runs one command. Returns 0 on success, 1 on domain errors; usage errors exit with 2."""
    args = parse_arguments(argv)
    setup_logging(args)
    set_seed(args.seed)
    try:
        desc = make_semiring(args.semiring) if args.semiring is not None else None
        output = COMMANDS[args.command](args, desc)
        if args.output is not None:
            with open(args.output, "w") as f:
                f.write(output)
            logger.info(f"wrote {args.output}")
        else:
            sys.stdout.write(output)
    except (PolyCircError, ValueError, OSError, KeyError) as err:
        message = str(err.args[0]) if isinstance(err, KeyError) and err.args else str(err)
        sys.stderr.write(json.dumps({"error": type(err).__name__, "message": message}) + "\n")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
