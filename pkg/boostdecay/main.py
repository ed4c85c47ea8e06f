"""
boostdecay command-line entry point
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from boostdecay import __version__
from boostdecay.cli.commands import COMMANDS
from boostdecay.cli.dependencies import build
from boostdecay.core.exceptions import BoostDecayError
from boostdecay.models import GridSpec, RunConfig
from boostdecay.utils.logging import setup_logging

logger = logging.getLogger(__name__)

HELP = {
    "fit": "Prony fit of a survival curve CSV",
    "transform": "closed-form lab-frame survival probability on a grid",
    "window": "exponential-time window report",
    "phi": "time map phi_p(t) with linearity diagnostic",
    "oracle-compare": "closed form against the quadrature oracle",
    "figures": "data for the figure regimes",
}


def _common_arguments() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    files = parser.add_argument_group("files")
    files.add_argument("--model", type=Path, help="mode-set JSON")
    files.add_argument("--input", type=Path, help="survival curve CSV")
    files.add_argument("--out", type=Path, help="output file (stdout if omitted)")
    files.add_argument("--out-dir", type=Path, help="output directory")

    physics = parser.add_argument_group("model")
    physics.add_argument("--M", type=float, help="resonance mass M tau")
    physics.add_argument("--p", type=float, default=0.0, help="momentum p tau")
    physics.add_argument("--tau", type=float, default=1.0, help="time unit of the grids")
    physics.add_argument("--theta", type=float, help="stretched-exponential index")
    physics.add_argument("--modes", dest="n_modes", type=int, default=8, help="number of modes N")
    physics.add_argument("--ratio-max", type=float, help="largest admissible Gamma_N/M")

    numerics = parser.add_argument_group("numerics")
    numerics.add_argument("--grid", type=GridSpec.parse, help="min:max:n[:geom]")
    numerics.add_argument("--tol", type=float, help="fit or quadrature tolerance")
    numerics.add_argument("--seed", type=int, default=0)
    numerics.add_argument("--restarts", type=int)
    numerics.add_argument("--dominance-factor", type=float)
    numerics.add_argument("--zeta-threshold", type=float)
    numerics.add_argument("--values", choices=["modulus", "probability"], default="modulus")
    numerics.add_argument("--column", default="value")
    numerics.add_argument("--gamma-max", type=float)
    numerics.add_argument("--target-rmse", type=float)
    numerics.add_argument("--clamp", action="store_true")
    numerics.add_argument("--grid-size", type=int)
    numerics.add_argument("--truncation-mass", type=float)
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boostdecay",
        description="Rest-frame decay laws transformed to a frame with fixed momentum",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    common = _common_arguments()
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[common], help=HELP[name])
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    values: Dict[str, Any] = {k: v for k, v in vars(args).items() if k != "log_level" and v is not None}
    return build(RunConfig, **values)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and map failures to exit codes

    Returns:
        0 success, 2 input error, 3 numerical failure, 4 excluded regime,
        1 anything unexpected
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except BoostDecayError as e:
        # raised by GridSpec.parse
        setup_logging()
        return _report(e)

    setup_logging(args.log_level)
    logger.info(f"Running {args.command}")
    try:
        config = _run_config(args)
        code = COMMANDS[config.command](config)
    except BoostDecayError as e:
        return _report(e)
    except Exception as e:
        logger.exception(f"Unhandled error in {args.command}: {e}")
        print(json.dumps({"error": {"message": "Internal error", "type": "internal_error"}}), file=sys.stderr)
        return 1
    logger.info(f"Finished {args.command}")
    return code


def _report(error: BoostDecayError) -> int:
    logger.error(f"{error.error_type}: {error.message} (exit {error.exit_code})")
    print(json.dumps(error.to_dict(), default=str), file=sys.stderr)
    return error.exit_code


if __name__ == "__main__":
    sys.exit(main())
