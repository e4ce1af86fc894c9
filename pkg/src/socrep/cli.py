"""Command-line interface.

Results are printed as JSON on stdout; human diagnostics go to stderr.
Exit codes: 0 success, 1 bad input, 2 budget exhausted or result not
exhaustive, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from ._kernels import backend_name
from .core import (
    Configuration,
    InternalCheckError,
    InvalidInputError,
    SearchBudgetError,
    WeightTuple,
    bounds,
    parse_int,
)
from .exact import brute_force, count_configs, feasible, load_catalog, store_catalog
from .frontends import (
    emit_constraints,
    to_negative_power,
    to_negative_power_multi,
    to_pnorm,
    to_power,
    to_power_cone,
    to_sub_unit_wgm,
    to_wgm,
)
from .heuristics import ALGORITHMS, DEFAULT_BUDGET, run_algorithm
from .medseq import (
    build_tree,
    enumerate_successive,
    leaf_heights,
    minimum_sequence,
    pow2_trivariate,
    tree_leaf_sums,
)
from .verify import numeric_check, reconstruct

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_BUDGET = 2
EXIT_INTERNAL = 3


def _print(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _weights(values: list[str]) -> WeightTuple:
    return WeightTuple.parse([parse_int(v) for v in values])


def _load_config(path: str, weight_args: list[str] | None) -> tuple[Configuration, WeightTuple]:
    try:
        if path == "-":
            doc = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from exc
    cfg, w = Configuration.from_json(doc)
    if weight_args:
        w = _weights(weight_args)
    if w is None:
        raise InvalidInputError(
            "no weights: provide them in the document ('s') or via --weights"
        )
    return cfg, w


def _cmd_repr(args: argparse.Namespace) -> int:
    w = _weights(args.weights)
    cfg, exhaustive = run_algorithm(args.algorithm, w, budget=args.budget)
    doc = cfg.to_json(w)
    doc["algorithm"] = args.algorithm
    doc["size"] = cfg.n
    doc["exhaustive"] = exhaustive
    _print(doc)
    if not exhaustive:
        print("traversal budget exhausted; result is best-effort", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_optimal(args: argparse.Namespace) -> int:
    w = _weights(args.weights)
    res = brute_force(w, cap=args.cap)
    doc = res.config.to_json(w)
    doc["size"] = res.size
    doc["scanned"] = res.scanned
    _print(doc)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg, w = _load_config(args.config, args.weights)
    recon = reconstruct(w, cfg)
    doc = recon.to_json()
    if args.feasibility:
        res = feasible(w, cfg, strict=args.strict)
        doc["feasible"] = res.feasible
        if res.strict_feasible is not None:
            doc["strict_feasible"] = res.strict_feasible
    if args.numeric and recon.valid:
        num = numeric_check(w, cfg, trials=args.trials, seed=args.seed)
        doc["numeric_passed"] = num.passed
        doc["numeric_failures"] = list(num.failures)
    _print(doc)
    return EXIT_OK


def _cmd_bounds(args: argparse.Namespace) -> int:
    w = _weights(args.weights)
    _print(bounds(w).to_json())
    return EXIT_OK


def _cmd_medseq(args: argparse.Namespace) -> int:
    p = parse_int(args.p)
    q = parse_int(args.q)
    _print(minimum_sequence(p, q).to_json())
    return EXIT_OK


def _cmd_tree(args: argparse.Namespace) -> int:
    p = parse_int(args.p)
    q = parse_int(args.q)
    seq = minimum_sequence(p, q)
    tree = build_tree(seq)
    height, leaves = leaf_heights(tree)
    _, sum_p, sum_q = tree_leaf_sums(tree, p, q)
    _print(
        {
            "schema": "socrep-v1",
            "p": p,
            "q": q,
            "points": list(seq.points),
            "tree": tree.to_json(),
            "height": height,
            "leaves": [[label, h] for label, h in leaves],
            "weight_q": sum_p,
            "weight_p_complement": sum_q,
        }
    )
    return EXIT_OK


def _cmd_enum_successive(args: argparse.Namespace) -> int:
    p = parse_int(args.p)
    q = parse_int(args.q)
    seqs, exhaustive = enumerate_successive(p, q, limit=args.limit, max_nodes=args.max_nodes)
    _print(
        {
            "schema": "socrep-v1",
            "p": p,
            "q": q,
            "count": len(seqs),
            "exhaustive": exhaustive,
            "sequences": [list(s.points) for s in seqs],
        }
    )
    if not exhaustive:
        print("enumeration budget exhausted; listing is partial", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_enumerate(args: argparse.Namespace) -> int:
    if args.store:
        count = store_catalog(args.store, args.m, args.n)
        _print({"schema": "socrep-v1", "m": args.m, "n": args.n, "count": count, "path": args.store})
    else:
        count = count_configs(args.m, args.n)
        _print({"schema": "socrep-v1", "m": args.m, "n": args.n, "count": count})
    return EXIT_OK


def _cmd_catalog_info(args: argparse.Namespace) -> int:
    m, n, pairs = load_catalog(args.path)
    _print(
        {
            "schema": "socrep-v1",
            "path": args.path,
            "m": m,
            "n": n,
            "count": int(pairs.shape[0]),
        }
    )
    return EXIT_OK


def _cmd_pow2(args: argparse.Namespace) -> int:
    s = [parse_int(v) for v in args.weights]
    if len(s) != 3:
        raise InvalidInputError(f"expected exactly three weights, got {len(s)}")
    w = WeightTuple.parse(s)
    cfg = pow2_trivariate(*s)
    doc = cfg.to_json(w)
    doc["size"] = cfg.n
    _print(doc)
    return EXIT_OK


def _cmd_convert(args: argparse.Namespace) -> int:
    if args.family == "wgm":
        res = to_wgm(args.exponents)
    elif args.family == "sub-unit":
        res = to_sub_unit_wgm(args.exponents)
    elif args.family == "power":
        res = to_power(args.value)
    elif args.family == "neg-power":
        res = to_negative_power(args.value)
    elif args.family == "neg-multi":
        res = to_negative_power_multi(args.exponents)
    elif args.family == "pnorm":
        res = to_pnorm(args.value, args.dim)
    elif args.family == "cone":
        res = to_power_cone(args.exponents)
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidInputError(f"unknown family {args.family!r}")
    _print(res.to_json())
    return EXIT_OK


def _cmd_emit(args: argparse.Namespace) -> int:
    if args.config:
        cfg, w = _load_config(args.config, args.weights)
    else:
        if not args.weights:
            raise InvalidInputError("provide weights (and optionally --config)")
        w = _weights(args.weights)
        cfg, exhaustive = run_algorithm(args.algorithm, w, budget=DEFAULT_BUDGET)
        if not exhaustive:
            print("traversal budget exhausted; chain is best-effort", file=sys.stderr)
    names = tuple(args.names.split(",")) if args.names else None
    sys.stdout.write(emit_constraints(w, cfg, fmt=args.fmt, names=names))
    sys.stdout.write("\n")
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    from .bench import sweep, write_csv

    summary = sweep(
        s_hat=args.s_hat,
        m=args.m,
        algorithms=tuple(args.algorithms),
        budget=args.budget,
        jobs=args.jobs,
    )
    if args.csv == "-":
        write_csv(summary, sys.stdout)
        json.dump(summary.to_json(), sys.stderr, indent=2)
        sys.stderr.write("\n")
    else:
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as fh:
                write_csv(summary, fh)
        _print(summary.to_json())
    return EXIT_OK


def _add_weights_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("weights", nargs="+", help="positive integer weights (decimal strings allowed)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="socrep",
        description="Quadratic-cone representations of weighted geometric-mean inequalities.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--backend-info",
        action="store_true",
        help="print the active kernel backend and exit",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("repr", help="build a representation with a heuristic or traversal")
    _add_weights_arg(p)
    p.add_argument("--algorithm", default="traversal-power-two", choices=sorted(ALGORITHMS))
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=_cmd_repr)

    p = sub.add_parser("optimal", help="find a minimum-size representation by exhaustive search")
    _add_weights_arg(p)
    p.add_argument("--cap", type=int, default=None, help="largest chain length to try")
    p.set_defaults(func=_cmd_optimal)

    p = sub.add_parser("verify", help="validate a configuration document")
    p.add_argument("config", help="JSON file with the configuration ('-' for stdin)")
    p.add_argument("--weights", nargs="+", default=None, help="override the document weights")
    p.add_argument("--numeric", action="store_true", help="also run random numeric sampling")
    p.add_argument("--feasibility", action="store_true", help="also run the exact feasibility test")
    p.add_argument("--strict", action="store_true", help="require a strictly positive solution")
    p.add_argument("--trials", type=int, default=4)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bounds", help="lower and upper bounds on the minimum size")
    _add_weights_arg(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("medseq", help="minimum mediated sequence for coprime 0 < q < p")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(func=_cmd_medseq)

    p = sub.add_parser("tree", help="binary-tree certificate for the minimum mediated sequence")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser(
        "enum-successive", help="enumerate minimum successive mediated sequences (odd p and q)"
    )
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--limit", type=int, default=1000)
    p.add_argument("--max-nodes", type=int, default=2_000_000)
    p.set_defaults(func=_cmd_enum_successive)

    p = sub.add_parser("enumerate", help="count or store all configuration shapes for (m, n)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--store", default=None, help="write the catalog to this file")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("catalog-info", help="validate a stored catalog file")
    p.add_argument("path")
    p.set_defaults(func=_cmd_catalog_info)

    p = sub.add_parser(
        "pow2", help="size-optimal chain for three weights summing to a power of two"
    )
    _add_weights_arg(p)
    p.set_defaults(func=_cmd_pow2)

    p = sub.add_parser("convert", help="reduce a modeling primitive to geometric-mean instances")
    p.add_argument(
        "family",
        choices=["wgm", "sub-unit", "power", "neg-power", "neg-multi", "pnorm", "cone"],
    )
    p.add_argument("--exponents", nargs="+", default=None, help="rational exponents like 1/3")
    p.add_argument("--value", default=None, help="rational parameter (power / neg-power / pnorm)")
    p.add_argument("--dim", type=int, default=2, help="coordinate count for pnorm")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("emit", help="print the quadratic constraints of a chain")
    p.add_argument("--config", default=None, help="JSON configuration file ('-' for stdin)")
    p.add_argument("--weights", nargs="*", default=None)
    p.add_argument("--algorithm", default="traversal-power-two", choices=sorted(ALGORITHMS))
    p.add_argument("--fmt", default="text", choices=["text", "json"])
    p.add_argument("--names", default=None, help="comma-separated variable names")
    p.set_defaults(func=_cmd_emit)

    p = sub.add_parser("bench", help="sweep algorithms over all weight tuples of a given total")
    p.add_argument("--s-hat", type=int, default=83)
    p.add_argument("--m", type=int, default=3)
    p.add_argument(
        "--algorithms",
        nargs="+",
        default=list(("greedy-power-two", "greedy-common-one", "traversal-power-two")),
        choices=sorted(ALGORITHMS),
    )
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", default=None, help="CSV output path ('-' for stdout)")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "backend_info", False) and not getattr(args, "command", None):
        _print({"schema": "socrep-v1", "backend": backend_name(), "version": __version__})
        return EXIT_OK
    if not getattr(args, "command", None):
        parser.print_help(sys.stderr)
        return EXIT_BAD_INPUT
    try:
        return args.func(args)
    except (InvalidInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except SearchBudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalCheckError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
