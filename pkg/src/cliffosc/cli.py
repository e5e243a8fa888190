"""Command-line entry point.

Every failure writes one JSON object to standard error, e.g.
``{"error": "ConfigError", "field": "Ns", "message": "must be strictly increasing"}``,
and exits with a nonzero status: 1 for failed checks, 2 for configuration
errors, 3 for numerical errors (domain, truncation, budget, ...), 4 for I/O.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import CliffordError, ConfigError
from .harness import ExperimentConfig, emit, read_config_file, run_cauchy, run_convergence
from .verify import SUITES, run_verify

EXIT_CHECKS, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("arguments", message)


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _experiment_flags(p: argparse.ArgumentParser, settings) -> None:
    p.add_argument("--config", metavar="FILE", help="JSON file with configuration keys; flags override it")
    p.add_argument("--n", type=int, help="number of imaginary units")
    p.add_argument("--a", type=float, help="superoscillation parameter")
    p.add_argument("--Ns", type=_ints, help="comma-separated, strictly increasing")
    if settings:
        p.add_argument("--setting", choices=settings)
    p.add_argument("--radius", type=float, help="grid radius R")
    p.add_argument("--grid", type=int, help="number of grid points")
    p.add_argument("--sigma", type=float, help="exponential weight of the A1 norm")
    p.add_argument("--K", type=int, help="truncation degree")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path ('-' for standard output)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--threads", type=int, help="worker threads (default: CLIFFOSC_THREADS or all cores)")
    p.add_argument("--timing", action="store_true", default=None, help="record wall_ms (breaks byte identity)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cliffosc", description="Superoscillation and supershift experiments in Clifford algebras.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("superosc", help="convergence of F_N to exp(a x)")
    _experiment_flags(p, ("slice", "monogenic"))
    p.add_argument("--rule", choices=("binomial", "lagrange"))

    p = sub.add_parser("supershift", help="convergence of sum Z_j G(h_j x) to G(a x)")
    _experiment_flags(p, ("slice", "monogenic", "supershift-slice", "supershift-monogenic"))
    p.add_argument("--rule", choices=("binomial", "lagrange"))
    p.add_argument("--target", choices=("exp", "bessel", "taylor-file"))
    p.add_argument("--taylor-file", dest="taylor_file", metavar="FILE")
    p.add_argument("--profile", help="identity, cubic, power:P or a JSON list of n+1 coefficient lists")

    p = sub.add_parser("cauchy", help="slice Cauchy reconstruction of exp with N quadrature nodes")
    _experiment_flags(p, ())

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("suite", nargs="?", default="all", choices=SUITES + ("all",))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    return parser


_NON_CONFIG = {"command", "config", "suite"}


def _config(args, defaults: dict) -> ExperimentConfig:
    overrides = {k: v for k, v in vars(args).items() if v is not None and k not in _NON_CONFIG}
    merged = dict(defaults)
    if args.config:
        merged.update(read_config_file(args.config))
    merged.update(overrides)
    if args.command == "supershift" and merged.get("setting") in ("slice", "monogenic"):
        merged["setting"] = "supershift-" + merged["setting"]
    return ExperimentConfig.from_mapping(merged)


def _write(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"{path}: {exc.strerror}") from exc


def _run(args) -> int:
    if args.command == "verify":
        results = run_verify(args.suite, seed=args.seed)
        if args.format == "json":
            text = json.dumps([r.__dict__ for r in results], indent=1) + "\n"
        else:
            text = "".join(r.line() + "\n" for r in results)
        _write(text, args.out)
        failed = [r for r in results if not r.passed]
        if failed:
            _fail("CheckFailure", "; ".join(f"{r.suite}.{r.name}" for r in failed), field=None)
            return EXIT_CHECKS
        return 0
    if args.command == "superosc":
        config = _config(args, {})
        if config.setting not in ("slice", "monogenic"):
            raise ConfigError("setting", "superosc runs the slice or monogenic setting")
        rows = run_convergence(config)
    elif args.command == "supershift":
        config = _config(args, {"setting": "supershift-slice"})
        rows = run_convergence(config)
    else:
        config = _config(args, {"Ns": [16, 32, 64, 128], "grid": 16})
        rows = run_cauchy(config)
    emit(rows, config.format, config.out, config)
    return 0


def _fail(kind: str, message: str, field=None) -> None:
    payload = {"error": kind, "field": field, "message": message}
    sys.stderr.write(json.dumps(payload) + "\n")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _run(args)
    except ConfigError as exc:
        _fail("ConfigError", exc.message, exc.field)
        return EXIT_CONFIG
    except CliffordError as exc:
        _fail(type(exc).__name__, str(exc))
        return EXIT_NUMERIC
    except OSError as exc:
        _fail("IOError", exc.strerror or str(exc))
        return EXIT_IO
    except (ValueError, ArithmeticError) as exc:
        _fail(type(exc).__name__, str(exc))
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
