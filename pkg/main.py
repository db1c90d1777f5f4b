# main.py
"""
npb: parallel NAS benchmark suite

    npb run <benchmark|all> --class S --workers 1,2,4 --reps 10 --format csv
    npb compare before.csv after.csv --key benchmark,class,workers
    npb list

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 internal error.
"""
import argparse
import logging
import sys
from typing import List, Optional

import settings
from common.params import class_params
from constants import BENCHMARKS, CSV_COLUMNS, DEFAULT_COMPARE_KEY, OUTPUT_FORMATS, SUPPORTED_CLASSES
from error_handler import EXIT_OK, ErrorHandler, UsageError, VerificationError
from utils.logging_config import log_performance, setup_logging
from validators import InputValidator

logger = logging.getLogger(__name__)


class NpbArgumentParser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad input; route it through UsageError (exit 1) instead"""

    def error(self, message):
        raise UsageError(message)


def _worker_list(value: str) -> List[int]:
    workers, error = InputValidator.parse_worker_list(value)
    if error:
        raise UsageError(error)
    return workers


def build_parser() -> argparse.ArgumentParser:
    parser = NpbArgumentParser(prog='npb', description='Parallel NAS benchmark suite')
    parser.add_argument('--log-level', default=None, help='override LOG_LEVEL')
    commands = parser.add_subparsers(dest='command', parser_class=NpbArgumentParser)
    commands.required = True

    run = commands.add_parser('run', help='run a benchmark (or all) repeatedly')
    run.add_argument('benchmark', help=f"one of {', '.join(BENCHMARKS)}, or 'all'")
    run.add_argument('--class', dest='class_tag', default='S', help=f"one of {', '.join(SUPPORTED_CLASSES)}")
    run.add_argument('--workers', default=None,
                     help='worker counts to sweep, e.g. 1,2,4 or 1-8 (default: NPB_WORKERS or cpu count)')
    run.add_argument('--reps', type=int, default=settings.NPB_REPS)
    run.add_argument('--safe-mode', action='store_true', default=settings.NPB_SAFE_MODE,
                     help='bounds-checked kernels')
    run.add_argument('--stack-reserve', type=int, default=None, help='worker thread stack size in bytes')
    run.add_argument('--format', dest='output_format', choices=OUTPUT_FORMATS, default='text')
    run.add_argument('--out', dest='output_path', default=None, help='write output here instead of stdout')
    run.add_argument('--timers', action='store_true', default=settings.NPB_TIMERS,
                     help='record per-routine timers')
    run.add_argument('--no-isolate', action='store_true', help='run repetitions in this process')

    compare = commands.add_parser('compare', help='statistically compare two result CSV files')
    compare.add_argument('csv_a')
    compare.add_argument('csv_b')
    compare.add_argument('--key', default=','.join(DEFAULT_COMPARE_KEY))
    compare.add_argument('--alpha', type=float, default=settings.NPB_ALPHA)
    compare.add_argument('--format', dest='output_format', choices=OUTPUT_FORMATS, default='text')
    compare.add_argument('--out', dest='output_path', default=None)

    commands.add_parser('list', help='show the benchmark x class matrix')
    return parser


@log_performance('npb_run')
def command_run(args) -> int:
    from common.results import report
    from harness.emitter import emit, render_results
    from harness.runner import RunSpec, execute, failed

    workers = _worker_list(args.workers) if args.workers else [settings.default_workers()]
    spec = RunSpec(
        benchmark=args.benchmark,
        class_tag=args.class_tag,
        workers=workers,
        reps=args.reps,
        safe_mode=args.safe_mode,
        stack_reserve=args.stack_reserve,
        output_format=args.output_format,
        output_path=args.output_path,
        timers=args.timers or None,
    )
    results = execute(spec, isolate=False if args.no_isolate else None)

    text = render_results(results, spec.output_format)
    if spec.output_format == 'text' and args.timers:
        text = "".join(report(r) for r in results if r.timers) + "\n" + text
    emit(text, spec.output_path)

    failures = failed(results)
    if failures:
        names = ", ".join(f"{r.benchmark.upper()}.{r.class_tag} workers={r.workers} rep={r.rep}"
                          for r in failures)
        raise VerificationError(f"{len(failures)} run(s) failed verification: {names}", results=failures)
    return EXIT_OK


def command_compare(args) -> int:
    from harness.compare import compare_records
    from harness.emitter import emit, read_csv, render_comparisons

    columns = tuple(c for c in CSV_COLUMNS if c not in ('rep', 'seconds', 'mflops'))
    keys, error = InputValidator.parse_key_columns(args.key, columns)
    if error:
        raise UsageError(error)
    reports = compare_records(read_csv(args.csv_a), read_csv(args.csv_b), keys,
                              labels=(args.csv_a, args.csv_b), alpha=args.alpha)
    emit(render_comparisons(reports, args.output_format, keys), args.output_path)
    return EXIT_OK


def command_list(args) -> int:
    print(f"{'benchmark':<10}" + "".join(f"{tag:>22}" for tag in SUPPORTED_CLASSES))
    for name in BENCHMARKS:
        cells = []
        for tag in SUPPORTED_CLASSES:
            params = class_params(name, tag)
            cells.append(f"{params.size_label + ' /' + str(params.niter):>22}")
        print(f"{name.upper():<10}" + "".join(cells))
    print("\ncells: problem size / iterations")
    return EXIT_OK


COMMANDS = {
    'run': command_run,
    'compare': command_compare,
    'list': command_list,
}


@ErrorHandler.handle_cli_errors
def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(log_level=args.log_level)
    return COMMANDS[args.command](args)


if __name__ == '__main__':
    sys.exit(main())
