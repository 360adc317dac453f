"""Command-line entry point: ``ris-secrecy {run,sweep,validate,selftest}``."""
from __future__ import annotations

import argparse
import contextlib
import sys

from .experiments.config import ConfigError, ScenarioConfig, apply_overrides, load_config
from .experiments.selftest import selftest
from .experiments.sweep import SWEEP_VARIABLES, SweepSpec, parse_values, run_scenario, run_sweep
from .experiments.validate import validate
from .secrecy_metrics import SCHEMES

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _scenario_args(p):
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override one configuration key (repeatable)")
    p.add_argument("--trials", type=int, help="Monte-Carlo trials per cell")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--scheme", dest="schemes", action="append", choices=SCHEMES,
                   help="phase design to evaluate (repeatable)")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--workers", type=int, default=1, help="worker processes; never changes results")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ris-secrecy", description="RIS-assisted wiretap link secrecy simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _scenario_args(sub.add_parser("run", help="estimate SOP and SR for one scenario"))

    sweep = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    _scenario_args(sweep)
    sweep.add_argument("--variable", required=True, choices=SWEEP_VARIABLES)
    sweep.add_argument("--values", required=True,
                       help="comma-separated values or inclusive start:stop:step")

    val = sub.add_parser("validate", help="run the invariant suite")
    val.add_argument("--levels", type=int, default=32, help="grid-oracle phase levels")
    val.add_argument("--trials", type=int, default=500, help="realizations per check")
    val.add_argument("--seed", type=int, default=7)

    sub.add_parser("selftest", help="run the worked examples")
    return parser


def scenario_from_args(args) -> ScenarioConfig:
    scenario = ScenarioConfig()
    if args.config:
        with open(args.config) as fh:
            scenario = load_config(fh.read())
    scenario = apply_overrides(scenario, args.overrides)
    changes = {}
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.schemes:
        changes["schemes"] = tuple(dict.fromkeys(args.schemes))
    return scenario.replace(**changes) if changes else scenario


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            scenario = scenario_from_args(args)
            with _output(args.out) as out:
                run_scenario(scenario, out, workers=args.workers)
            return EXIT_OK

        if args.command == "sweep":
            scenario = scenario_from_args(args)
            spec = SweepSpec(args.variable, tuple(parse_values(args.values)), scenario)
            with _output(args.out) as out:
                summary = run_sweep(spec, out, workers=args.workers)
            print(f"{summary['rows']} rows over {summary['cells']} cells", file=sys.stderr)
            return EXIT_OK

        if args.command == "validate":
            report = validate(levels=args.levels, trials=args.trials, seed=args.seed)
            for line in report.lines():
                print(line)
            return EXIT_OK if report.passed else EXIT_FAILED

        results = selftest()
        for name, ok in results:
            print(f"{'PASS' if ok else 'FAIL'} {name}")
        failed = sum(not ok for _, ok in results)
        print(f"{len(results) - failed}/{len(results)} examples passed")
        return EXIT_OK if not failed else EXIT_FAILED
    except (ConfigError, ValueError) as exc:
        print(f"ris-secrecy: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ris-secrecy: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
