"""Entry point for the rematch command line."""

import argparse
import logging
import sys
from collections.abc import Sequence
from typing import NoReturn

from dotenv import load_dotenv
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from rematch.adversaries import GENERATORS
from rematch.algorithms import ALGORITHMS
from rematch.errors import ContractError, InvariantViolation, RematchError
from rematch.harness.checks import CHECKS
from rematch.harness.dto import RunConfig
from rematch.harness.instance import write_instance
from rematch.harness.runner import run
from rematch.harness.trace import emit_trace
from rematch.harness.verify import print_report, verify_instance

load_dotenv()

# Configure root logger
logging.basicConfig(
    level=logging.WARNING,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVARIANT = 2


class Settings(BaseSettings):
    """Application settings from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    seed: int = Field(default=0, ge=0, lt=2**64, alias="REMATCH_SEED")
    debug_algorithms: str | None = Field(default=None, alias="REMATCH_DEBUG")
    log_level: str = Field(default="WARNING", alias="REMATCH_LOG_LEVEL")

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.strip().upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level {value!r}")
        return level


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1 like every other input error."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _configure_debug_logging(algorithms_spec: str | None) -> None:
    if not algorithms_spec:
        return

    algorithms = [a.strip() for a in algorithms_spec.split(",") if a.strip()]
    if not algorithms:
        return

    unknown = sorted(set(algorithms) - set(ALGORITHMS))
    if unknown:
        logger.warning(
            f"Unknown algorithm IDs for debug logging: {unknown}. "
            f"Available algorithms: {sorted(ALGORITHMS)}"
        )

    logger.info(f"Enabling DEBUG logging for algorithms: {algorithms}")
    for name in algorithms:
        logging.getLogger(f"rematch.algorithms.{name}").setLevel(logging.DEBUG)


def _parse_params(pairs: Sequence[str] | None) -> dict[str, str]:
    params: dict[str, str] = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise ContractError(f"generator parameter {pair!r} is not of the form key=value")
        params[key.strip()] = value.strip()
    return params


def _parse_checks(spec: str) -> list[str] | str:
    if spec.strip() == "all":
        return "all"
    return [name.strip() for name in spec.split(",") if name.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="rematch",
        description="rematch - online min-cost metric matching with recourse",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
  # FarthestServer on a random line instance, all invariant checks on
  rematch run --alg farthest-server --gen random-line --param n=64 --param k=64 \\
      --seed 7 --out trace.csv

  # Permutation in batches of 4 on an instance file, JSONL trace
  rematch run --alg permutation --instance inst.txt --batch 4 --out trace.jsonl \\
      --format jsonl

  # Fully dynamic stream on a sampled tree
  rematch gen random-dynamic --seed 3 --out dyn.txt --events-out dyn.jsonl
  rematch run --alg nearest-match --instance dyn.txt --events dyn.jsonl --out dyn.csv

  # Check metric axioms and stream feasibility
  rematch verify --instance inst.txt

Exit codes:
  0  success
  1  usage, input or I/O error
  2  an invariant check failed

Environment Variables:
  REMATCH_SEED       Default seed for generators and the sampled tree (overridden by --seed)
  REMATCH_DEBUG      Comma-separated algorithm ids for DEBUG logging
  REMATCH_LOG_LEVEL  Root log level (default: WARNING)

Available algorithms:
  {", ".join(sorted(ALGORITHMS))}

Available generators:
  {", ".join(sorted(GENERATORS))}
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Replay an instance through one algorithm")
    run_parser.add_argument("--alg", required=True, choices=sorted(ALGORITHMS))
    source = run_parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--instance", type=str, help="Instance file")
    source.add_argument("--gen", type=str, choices=sorted(GENERATORS), help="Generator name")
    run_parser.add_argument("--events", type=str, help="Event stream (JSONL) for --instance")
    run_parser.add_argument(
        "--param",
        action="append",
        metavar="KEY=VALUE",
        help="Generator parameter, repeatable. Example: --param n=64",
    )
    run_parser.add_argument("--seed", type=int, help="Run seed (default: REMATCH_SEED or 0)")
    run_parser.add_argument("--d", type=int, default=2, help="BatchPerm base (default: 2)")
    run_parser.add_argument(
        "--batch", type=int, help="Feed clients to permutation in batches of this size"
    )
    run_parser.add_argument(
        "--hst-seed", type=int, help="Seed of the sampled tree (default: the run seed)"
    )
    run_parser.add_argument(
        "--checks",
        type=str,
        default="all",
        help=f"all, none or a comma-separated list of: {', '.join(CHECKS)}",
    )
    run_parser.add_argument("--out", type=str, required=True, help="Trace output path")
    run_parser.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    run_parser.add_argument(
        "--debug-algorithms",
        type=str,
        help="Comma-separated algorithm ids for DEBUG logging. "
        "Example: --debug-algorithms farthest-server",
    )

    gen_parser = commands.add_parser("gen", help="Write a generated instance to disk")
    gen_parser.add_argument("name", choices=sorted(GENERATORS))
    gen_parser.add_argument("--param", action="append", metavar="KEY=VALUE")
    gen_parser.add_argument("--seed", type=int, help="Generator seed (default: REMATCH_SEED)")
    gen_parser.add_argument("--out", type=str, required=True, help="Instance output path")
    gen_parser.add_argument(
        "--events-out", type=str, help="Event stream path, required for random-dynamic"
    )

    verify_parser = commands.add_parser("verify", help="Validate an instance file")
    verify_parser.add_argument("--instance", type=str, required=True)
    verify_parser.add_argument("--events", type=str)

    return parser


def _command_run(args: argparse.Namespace, settings: Settings) -> int:
    config = RunConfig(
        algorithm=args.alg,
        instance=args.instance,
        events=args.events,
        generator=args.gen,
        params=_parse_params(args.param),
        seed=args.seed if args.seed is not None else settings.seed,
        d=args.d,
        batch=args.batch,
        hst_seed=args.hst_seed,
        checks=_parse_checks(args.checks),
    )
    trace = run(config)
    emit_trace(trace, args.format, args.out)
    return EXIT_OK


def _command_gen(args: argparse.Namespace, settings: Settings) -> int:
    seed = args.seed if args.seed is not None else settings.seed
    if not 0 <= seed < 2**64:
        raise ContractError(f"seed {seed} outside [0, 2^64)")
    instance = GENERATORS[args.name].generate(_parse_params(args.param), seed)
    write_instance(instance, args.out, args.events_out)
    logger.info(f"Generated {instance.name} into {args.out}")
    return EXIT_OK


def _command_verify(args: argparse.Namespace) -> int:
    report = verify_instance(args.instance, args.events)
    print_report(report)
    return EXIT_OK if report.ok else EXIT_INVARIANT


def cli(argv: Sequence[str] | None = None) -> int:
    """Parse `argv`, run the command and return the process exit code."""
    args = _build_parser().parse_args(argv)

    # Load settings from environment
    try:
        settings = Settings()  # type: ignore[call-arg]
    except ValidationError as e:
        sys.exit(f"Configuration error: {e}")

    logging.getLogger().setLevel(settings.log_level)
    debug_spec = getattr(args, "debug_algorithms", None) or settings.debug_algorithms
    _configure_debug_logging(debug_spec)

    try:
        match args.command:
            case "run":
                return _command_run(args, settings)
            case "gen":
                return _command_gen(args, settings)
            case _:
                return _command_verify(args)
    except InvariantViolation as e:
        logger.error(f"Invariant violated: {e}")
        return EXIT_INVARIANT
    except ValidationError as e:
        logger.error(f"Invalid run configuration: {e}")
        return EXIT_ERROR
    except (RematchError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_ERROR


def main() -> None:
    """Main entry point for rematch."""
    try:
        code = cli()
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        code = EXIT_ERROR
    sys.exit(code)


if __name__ == "__main__":
    main()
