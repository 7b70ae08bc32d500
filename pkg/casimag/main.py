# casimag/main.py
import argparse
import logging
import sys

from . import commands
from .errors import CasimagError, InputError
from .tools.config import OUTPUT_FORMATS, load_config
from .tools.sweep import resolve_threads

COMMANDS = {
    "energy": commands.cmd_energy,
    "force": commands.cmd_force,
    "compare": commands.cmd_compare,
    "detect": commands.cmd_detect,
    "validate": commands.cmd_materials_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument("--output", help="output file (default: stdout)")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="output format")
    common.add_argument("--tol", type=float, help="relative quadrature tolerance")
    common.add_argument("--threads", type=int, help="worker processes (env CASIMIR_MAG_THREADS wins)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")

    parser = argparse.ArgumentParser(
        prog="casimag",
        description="Casimir energy and magnetization-dependent Casimir interaction between mirrors")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("energy", parents=[common], help="plate-plate energies and the FM/AF difference")
    sub.add_parser("force", parents=[common], help="plate-plate forces and the FM/AF difference")
    sub.add_parser("compare", parents=[common], help="quadrature against closed-form limits")
    sub.add_parser("detect", parents=[common], help="sphere-plate detectability report")
    materials = sub.add_parser("materials", help="material checks")
    materials_sub = materials.add_subparsers(dest="action", required=True)
    materials_sub.add_parser("validate", parents=[common], help="check dielectric functions")
    return parser


def configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    name = args.action if args.command == "materials" else args.command

    try:
        config = load_config(args.config)
        threads = resolve_threads(config.threads if args.threads is None else args.threads)
        config = config.with_overrides(
            rel_tol=args.tol, output_path=args.output, output_format=args.format, threads=threads)
        return COMMANDS[name](config)
    except InputError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return commands.EXIT_CONFIG
    except OSError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return commands.EXIT_IO
    except CasimagError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return commands.EXIT_NOT_CONVERGED


if __name__ == "__main__":
    sys.exit(main())
