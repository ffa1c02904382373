from __future__ import annotations

import argparse
import concurrent.futures
import logging
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from embedkit.error import ConfigError, DomainExit, LostPositivity, NonFiniteState
from embedkit.linalg import frob_norm
from embedkit.rigidbody.sampling import max_attitude_error
from embedkit.runtime import Runtime
from embedkit.sim.certify import Certificate, certify
from embedkit.sim.closedloop import ClosedLoop
from embedkit.sim.formatter import ScenarioFormatter
from embedkit.sim.gains import gain_schedule
from embedkit.sim.plot import plot_errors
from embedkit.sim.record import RunRecord, format_float
from embedkit.sim.scenario import Scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

ATTITUDE_PAIRS = 10_000


def main(argv: Sequence[str] | None = None) -> int:
    args = parser().parse_args(argv)
    Runtime.from_env()

    try:
        if args.batch is not None:
            return run_batch(Path(args.batch), _out(args, Path(args.batch)))
        if args.command is None:
            parser().print_usage(sys.stderr)
            return EXIT_CONFIG

        return int(args.handler(args))
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainExit, LostPositivity, NonFiniteState) as e:
        print(f"aborted: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


def parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog="embedkit",
        description="Observer-based rigid-body tracking on SO(3) via embedding",
    )
    root.add_argument("--batch", metavar="DIR", help="simulate every *.toml in DIR")
    root.add_argument("--out", metavar="DIR", help="output directory for --batch")
    commands = root.add_subparsers(dest="command")

    simulate = commands.add_parser("simulate", help="run a scenario file")
    simulate.add_argument("config")
    simulate.add_argument("--out", default="out")
    simulate.set_defaults(handler=cmd_simulate)

    reproduce = commands.add_parser(
        "reproduce-paper", help="run the reference experiment with its plot"
    )
    reproduce.add_argument("--out", default="out")
    reproduce.set_defaults(handler=cmd_reproduce_paper)

    check = commands.add_parser("certify", help="numerical certificates")
    check.add_argument("config")
    check.add_argument("which", choices=[c.value for c in Certificate])
    check.add_argument("--out", default="out")
    check.set_defaults(handler=cmd_certify)

    gains = commands.add_parser("gains", help="precompute the observer gain L(t)")
    gains.add_argument("config")
    gains.add_argument("--out", default="out")
    gains.set_defaults(handler=cmd_gains)

    return root


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = ScenarioFormatter().read(Path(args.config))

    return simulate_into(scenario, _directory(args.out))


def cmd_reproduce_paper(args: argparse.Namespace) -> int:
    scenario = Scenario.paper()
    out = _directory(args.out)
    initial = initial_attitude_error(scenario)
    sampled = max_attitude_error(
        np.random.default_rng(scenario.certify.seed), ATTITUDE_PAIRS
    )
    print(f"initial_attitude_error={initial:.4f}")
    print(f"max_sampled_attitude_error={sampled:.4f}")

    record = ClosedLoop(scenario).run()
    _write_run(record, out)
    with (out / "summary.txt").open("a", encoding="utf-8") as stream:
        stream.write(f"initial_attitude_error={format_float(initial)}\n")
        stream.write(f"max_sampled_attitude_error={format_float(sampled)}\n")
    plot_errors(record, out / "errors.svg")

    return _exit_code(record)


def cmd_certify(args: argparse.Namespace) -> int:
    scenario = ScenarioFormatter().read(Path(args.config))
    report = certify(scenario, Certificate(args.which))
    path = report.write(_directory(args.out))
    print("\n".join(report.lines()))
    logger.info("certificate written to %s", path)

    return EXIT_OK if report.passed else EXIT_NUMERICAL


def cmd_gains(args: argparse.Namespace) -> int:
    scenario = ScenarioFormatter().read(Path(args.config))
    schedule = gain_schedule(scenario)
    schedule.write_csv(_directory(args.out) / "gains.csv")
    print(f"gains={len(schedule)} samples ({schedule.kind})")

    return EXIT_OK


def simulate_into(scenario: Scenario, out: Path) -> int:
    record = ClosedLoop(scenario).run()
    _write_run(record, out)

    return _exit_code(record)


def run_batch(directory: Path, out: Path) -> int:
    configs = sorted(directory.glob("*.toml"))
    if not configs:
        raise ConfigError(f"{directory}: no *.toml scenarios")

    with concurrent.futures.ThreadPoolExecutor() as executor:
        futures = {
            config: executor.submit(_batch_job, config, out / config.stem)
            for config in configs
        }
        codes = {config: future.result() for config, future in futures.items()}

    for config, code in codes.items():
        print(f"{config.name}: exit {code}")

    return max(codes.values())


def initial_attitude_error(scenario: Scenario) -> float:
    t0 = scenario.simulation.t0
    r0 = scenario.rigid_reference().r0(t0)

    return frob_norm(scenario.initial_attitude() - r0)


def _batch_job(config: Path, out: Path) -> int:
    try:
        return simulate_into(ScenarioFormatter().read(config), _directory(out))
    except ConfigError as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG


def _write_run(record: RunRecord, out: Path) -> None:
    record.write_csv(out / "trace.csv")
    record.write_summary(out / "summary.txt")
    if record.aborted:
        print(f"aborted: {record.abort_reason}", file=sys.stderr)


def _exit_code(record: RunRecord) -> int:
    return EXIT_NUMERICAL if record.aborted else EXIT_OK


def _directory(path: str | Path) -> Path:
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)

    return directory


def _out(args: argparse.Namespace, default: Path) -> Path:
    return Path(args.out) if getattr(args, "out", None) else default / "out"
