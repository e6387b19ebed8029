"""apeq: command-line driver. One JSON document on stdout, logs on stderr.

Exit codes: 0 success or equivalent, 1 well-formed negative result, 2 usage, parse or
precondition error, 3 internal verification failure. Errors raised after the arguments parse are
also reported on stdout, as a document with status "error".
"""
import argparse
import logging
import sys
from typing import List, Optional, Sequence

from ap_equivalence import __version__
from ap_equivalence.config import get_settings
from ap_equivalence.data_access.serializer import dumps, error_report
from ap_equivalence.domain.exceptions import ApEquivalenceError, InternalInvariantError, VerdictMismatch
from ap_equivalence.domain.models.workspace import JsonReport
from ap_equivalence.services.analysis_service import AnalysisService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _orders(text: str) -> List[int]:
    try:
        orders = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"orders must be comma-separated integers, got {text!r}") from e
    if not orders or any(n < 1 for n in orders):
        raise argparse.ArgumentTypeError("orders must be positive integers")
    return orders


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apeq", description="Equivalence of exponential sums and almost periodic functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    basis = commands.add_parser("basis", help="Q-basis of a sum's exponents")
    basis.add_argument("file")
    basis.add_argument("sum")

    integral = commands.add_parser("integral-basis", help="integral basis of a sum's exponents")
    integral.add_argument("file")
    integral.add_argument("sum")
    integral.add_argument("--trace", type=_positive_int, help="also report the bases of the first n exponents, n = 1..N")

    equiv = commands.add_parser("equiv", help="decide *-equivalence or finite Bohr equivalence")
    equiv.add_argument("file")
    equiv.add_argument("sum1")
    equiv.add_argument("sum2")
    equiv.add_argument("--definition", choices=["star", "bohr"], default="star")
    equiv.add_argument("--trace", type=_positive_int, help="decide every truncation n = 1..N")

    bf = commands.add_parser("bf", help="Bochner-Fejer polynomial")
    bf.add_argument("file")
    bf.add_argument("sum")
    bf.add_argument("--orders", type=_orders, required=True)
    bf.add_argument("--schedule", action="store_true", help="also measure the deviation along orders 2, 4, ..., 1024")

    mean = commands.add_parser("mean", help="mean value M{f(sigma + it) e^(-i lambda t)}")
    mean.add_argument("file")
    mean.add_argument("sum")
    mean.add_argument("--sigma", type=float, required=True)
    mean.add_argument("--lambda", dest="frequency", type=float, required=True)
    mean.add_argument("--T", dest="T", type=float, required=True)
    mean.add_argument("--step", type=float)

    periods = commands.add_parser("almost-periods", help="epsilon-almost periods on a reduced strip")
    periods.add_argument("file")
    periods.add_argument("sum")
    periods.add_argument("--eps", type=float, required=True)
    periods.add_argument("--sigma-lo", type=float, required=True)
    periods.add_argument("--sigma-hi", type=float, required=True)
    periods.add_argument("--tmax", type=float, required=True)

    values = commands.add_parser("values", help="compare the value sets of two sums on a substrip")
    values.add_argument("file")
    values.add_argument("sum1")
    values.add_argument("sum2")
    values.add_argument("--sigma-lo", type=float, required=True)
    values.add_argument("--sigma-hi", type=float, required=True)
    values.add_argument("--samples", type=_positive_int)
    values.add_argument("--seed", type=int)
    values.add_argument("--tol", type=float)
    values.add_argument("--tcap", type=float)
    values.add_argument("--substrips", type=_positive_int, help="run the overlapping-substrip experiment instead")

    corpus = commands.add_parser("corpus", help="bundled worked examples")
    corpus_commands = corpus.add_subparsers(dest="action", required=True)
    corpus_commands.add_parser("list")
    run_scenario = corpus_commands.add_parser("run")
    run_scenario.add_argument("name")
    return parser


def execute(args: argparse.Namespace, service: AnalysisService) -> JsonReport:
    if args.command == "corpus":
        return service.corpus_list() if args.action == "list" else service.run_scenario(args.name)

    workspace = service.load(args.file)
    if args.command == "basis":
        return service.basis(workspace, args.sum)
    if args.command == "integral-basis":
        return service.integral_basis(workspace, args.sum, args.trace)
    if args.command == "equiv":
        return service.equivalence(workspace, args.sum1, args.sum2, args.definition, args.trace)
    if args.command == "bf":
        return service.bochner_fejer(workspace, args.sum, args.orders, args.schedule)
    if args.command == "mean":
        return service.mean_value(workspace, args.sum, args.sigma, args.frequency, args.T, args.step)
    if args.command == "almost-periods":
        return service.almost_periods(workspace, args.sum, args.eps, args.sigma_lo, args.sigma_hi, args.tmax)
    return service.compare_values(
        workspace,
        args.sum1,
        args.sum2,
        args.sigma_lo,
        args.sigma_hi,
        args.samples,
        args.seed,
        args.tol,
        args.tcap,
        args.substrips,
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the exit code instead of exiting."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    inputs = {key: value for key, value in vars(args).items() if key != "command"}
    try:
        report = execute(args, AnalysisService())
    except (VerdictMismatch, InternalInvariantError) as e:
        logger.error(f"Internal verification failure: {str(e)}")
        print(dumps(error_report(args.command, inputs, e)))
        return EXIT_INTERNAL
    except (ApEquivalenceError, ValueError, KeyError, OSError) as e:
        print(f"apeq: error: {e}", file=sys.stderr)
        print(dumps(error_report(args.command, inputs, e)))
        return EXIT_USAGE
    except Exception as e:
        logger.exception(f"Unexpected failure in '{args.command}': {str(e)}")
        return EXIT_INTERNAL

    print(dumps(report))
    return EXIT_NEGATIVE if report.status == "negative" else EXIT_OK


def main() -> None:
    logging.basicConfig(
        level=get_settings().log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    sys.exit(run())


if __name__ == "__main__":
    main()
