import argparse
import logging
import sys

from sqlalchemy.exc import SQLAlchemyError

import config
from commands import INVALID_INPUT, IO_FAILURE, OK, VERIFICATION_FAILED, CommandError
from exactsys import DimensionMismatchError, SolverError
from numeric import ReconstructionError, VerificationError
from symbols import DZVError

logger = logging.getLogger("dzv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dzv",
        description="Reduce even-weight double zeta values modulo products of zeta values.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    from commands import history, listing, reduce, table, verify

    reduce.router.mount(subparsers)
    listing.router.mount(subparsers)
    verify.router.mount(subparsers)
    table.router.mount(subparsers)
    history.router.mount(subparsers)
    return parser


def configure_logging(verbose: int) -> None:
    level = {0: config.LOG_LEVEL, 1: "INFO"}.get(verbose, "DEBUG")
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(getattr(logging, level, logging.WARNING))


def _emit(payload) -> None:
    if payload:
        sys.stdout.write(payload if payload.endswith("\n") else payload + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    try:
        _emit(args.handler(args))
        return OK
    except CommandError as e:
        _emit(e.payload)
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except (ReconstructionError, VerificationError, SolverError, DimensionMismatchError) as e:
        # valid request, but the computation could not be certified
        print(f"error: {e}", file=sys.stderr)
        return VERIFICATION_FAILED
    except DZVError as e:
        print(f"error: {e}", file=sys.stderr)
        return INVALID_INPUT
    except (OSError, SQLAlchemyError) as e:
        logger.debug("I/O failure", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return IO_FAILURE


if __name__ == "__main__":
    sys.exit(main())
