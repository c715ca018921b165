import argparse
import logging
import sys
from pathlib import Path

from ddmaxwell.ddmaxwell import DDMaxwell
from ddmaxwell.enums import CheckName, ExitCode
from ddmaxwell.exceptions import (
    DDMaxwellBlowUpError,
    DDMaxwellConfigError,
    DDMaxwellIOError,
    DDMaxwellUserError,
    DDMaxwellVerificationError,
)
from ddmaxwell.formats.config import describe_keys, override, read_config
from ddmaxwell.helpers import package_version

logger = logging.getLogger("ddmaxwell")


def parse_args(args: list[str]) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Simulate and verify the drift-diffusion-Maxwell system on the periodic square.",
        epilog="configuration keys:\n" + describe_keys(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version=f"ddmaxwell {package_version()}",
        help="Installed version of ddmaxwell",
    )
    parser.add_argument("--config", type=Path, help="key=value configuration file; defaults for missing keys")
    parser.add_argument("--seed", type=int, help="override init.seed")
    parser.add_argument(
        "--calibrate", action="store_true", help="refresh calibration constants before verifying"
    )
    parser.add_argument("--output-dir", type=Path, help="directory for relative output paths")
    parser.add_argument("--quiet", action="store_true", help="only log warnings and errors")
    subparsers = parser.add_subparsers(help="choose a command.", dest="command", required=True)
    subparsers.add_parser("simulate", help="integrate and write the time series (and snapshots)")
    verify_parser = subparsers.add_parser("verify", help="run a check suite; exit code 3 if a check fails")
    verify_parser.add_argument(
        "checks",
        nargs="*",
        help=f"checks to run ({', '.join(name.value for name in CheckName)}), defaults to verify.suite",
    )
    lp_parser = subparsers.add_parser("lp-analyze", help="write Littlewood-Paley block norms of rho")
    lp_parser.add_argument("--snapshot", type=Path, help="DDMX snapshot, defaults to the initial data")
    converge_parser = subparsers.add_parser(
        "converge", help="run the Friedrichs sequence and write pairwise distances"
    )
    converge_parser.add_argument("--radii", type=float, nargs="+", help="override converge.radii")
    subparsers.add_parser("calibrate", help="refresh the calibration constants with provenance")

    return parser.parse_args(args)


def _check_names(names: list[str]) -> list[CheckName]:
    try:
        return [CheckName(name) for name in names]
    except ValueError as error:
        raise DDMaxwellConfigError(str(error), key="verify.suite") from error


def run(args: argparse.Namespace) -> ExitCode:
    cfg = read_config(args.config)
    if args.seed is not None:
        cfg = override(cfg, init_seed=args.seed)
    if args.calibrate:
        cfg = override(cfg, verify_calibrate=True)
    runner = DDMaxwell(cfg, output_dir=args.output_dir)

    if args.command == "simulate":
        runner.run_simulation()
    elif args.command == "verify":
        runner.verify(_check_names(args.checks) or None)
    elif args.command == "lp-analyze":
        runner.lp_analyze(args.snapshot)
    elif args.command == "converge":
        runner.converge(args.radii)
    else:
        runner.recalibrate()
    return ExitCode.OK


def main() -> int:
    args = parse_args(sys.argv[1:])
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return int(run(args))
    except DDMaxwellUserError as error:
        logger.error(f"configuration error: {error}")
        return int(ExitCode.CONFIG)
    except DDMaxwellVerificationError as error:
        logger.error(str(error))
        return int(ExitCode.VERIFICATION)
    except (DDMaxwellBlowUpError, DDMaxwellIOError, OSError) as error:
        logger.error(f"run failed: {error}")
        return int(ExitCode.RUNTIME)
