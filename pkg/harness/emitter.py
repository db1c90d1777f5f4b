# harness/emitter.py
"""CSV / JSON / text output of benchmark results and comparison reports"""
import csv
import io
import json
import logging
import platform
import sys
from collections import OrderedDict
from datetime import datetime, timezone
from importlib import metadata
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple

from common.results import BenchmarkResult
from constants import CSV_COLUMNS, OUTPUT_FORMATS
from error_handler import UsageError
from harness.statistics import ComparisonReport, SampleStats, geometric_mean, summarize

logger = logging.getLogger(__name__)

NO_CORRECTION_NOTE = ("p-values are per comparison; no multiple-comparison correction "
                      "is applied across keys")

Group = Tuple[str, str, bool]


def format_seconds(value: float) -> str:
    return f"{value:.6g}"


def format_p(value: float) -> str:
    return f"{value:.3g}"


def _format_bool(value: bool) -> str:
    return 'true' if value else 'false'


def _parse_bool(value: str) -> bool:
    return str(value).strip().lower() in ('true', '1', 'yes')


def result_row(result: BenchmarkResult) -> Dict[str, str]:
    """One CSV record; float formatting is fixed so identical inputs give identical bytes"""
    return {
        'benchmark': result.benchmark,
        'class': result.class_tag,
        'workers': str(result.workers),
        'rep': str(result.rep),
        'seconds': format_seconds(result.seconds),
        'mflops': f"{result.mflops:.6g}",
        'verified': _format_bool(result.verified),
        'safe_mode': _format_bool(result.safe_mode),
    }


def write_csv(results: Iterable[BenchmarkResult], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=list(CSV_COLUMNS), lineterminator='\n')
    writer.writeheader()
    for result in results:
        writer.writerow(result_row(result))


def parse_row(row: Mapping[str, str]) -> Dict[str, Any]:
    missing = [c for c in CSV_COLUMNS if c not in row]
    if missing:
        raise UsageError(f"CSV is missing column(s): {', '.join(missing)}")
    return {
        'benchmark': row['benchmark'],
        'class': row['class'],
        'workers': int(row['workers']),
        'rep': int(row['rep']),
        'seconds': float(row['seconds']),
        'mflops': float(row['mflops']),
        'verified': _parse_bool(row['verified']),
        'safe_mode': _parse_bool(row['safe_mode']),
    }


def read_csv(source) -> List[Dict[str, Any]]:
    """Parse a results CSV (path or open stream) back into typed records"""
    if isinstance(source, str):
        try:
            with open(source, newline='') as handle:
                return read_csv(handle)
        except FileNotFoundError as e:
            raise UsageError(f"results file not found: {source}") from e
    try:
        return [parse_row(row) for row in csv.DictReader(source)]
    except ValueError as e:
        raise UsageError(f"malformed results CSV: {e}") from e


def group_samples(results: Sequence[BenchmarkResult]) -> "OrderedDict[Tuple[Group, int], List[float]]":
    """(benchmark, class, safe_mode), workers -> timed seconds of the verified repetitions"""
    samples: "OrderedDict[Tuple[Group, int], List[float]]" = OrderedDict()
    for r in results:
        if not r.verified:
            continue
        samples.setdefault(((r.benchmark, r.class_tag, r.safe_mode), r.workers), []).append(r.seconds)
    return samples


def sample_stats(results: Sequence[BenchmarkResult]) -> List[Dict[str, Any]]:
    """Per-configuration SampleStats rendered as dicts"""
    rows = []
    for ((benchmark, class_tag, safe_mode), workers), seconds in group_samples(results).items():
        rows.append({'benchmark': benchmark, 'class': class_tag, 'workers': workers,
                     'safe_mode': safe_mode, **summarize(seconds).as_dict()})
    return rows


def speedup_table(results: Sequence[BenchmarkResult]) -> List[Dict[str, Any]]:
    """
    Best time, mean, stddev and speedup for every configuration.

    Speedup is the 1-worker mean of the same benchmark, class and build mode
    divided by the configuration's mean; None when no 1-worker sample exists.
    """
    samples = group_samples(results)
    stats: Dict[Tuple[Group, int], SampleStats] = {key: summarize(v) for key, v in samples.items()}
    table = []
    for (group, workers), s in stats.items():
        baseline = stats.get((group, 1))
        speedup = baseline.mean / s.mean if baseline is not None and s.mean > 0.0 else None
        table.append({
            'benchmark': group[0], 'class': group[1], 'safe_mode': group[2], 'workers': workers,
            'n': s.n, 'best': s.min, 'mean': s.mean, 'stddev': s.stddev, 'speedup': speedup,
        })
    return table


def render_text(results: Sequence[BenchmarkResult]) -> str:
    table = speedup_table(results)
    out = io.StringIO()
    header = f"{'benchmark':<10}{'class':<6}{'mode':<10}{'workers':>8}{'reps':>6}" \
             f"{'best (s)':>12}{'mean (s)':>12}{'stddev':>12}{'speedup':>9}"
    out.write(header + "\n")
    out.write("-" * len(header) + "\n")
    for row in table:
        speedup = f"{row['speedup']:.2f}" if row['speedup'] is not None else '-'
        out.write(f"{row['benchmark'].upper():<10}{row['class']:<6}"
                  f"{'safe' if row['safe_mode'] else 'unchecked':<10}{row['workers']:>8}{row['n']:>6}"
                  f"{format_seconds(row['best']):>12}{format_seconds(row['mean']):>12}"
                  f"{format_seconds(row['stddev']):>12}{speedup:>9}\n")

    by_workers: "OrderedDict[Tuple[int, bool], List[float]]" = OrderedDict()
    for row in table:
        by_workers.setdefault((row['workers'], row['safe_mode']), []).append(row['mean'])
    if any(len(means) > 1 for means in by_workers.values()):
        out.write("\nGeometric mean of benchmark mean times\n")
        for (workers, safe_mode), means in by_workers.items():
            out.write(f"  {'safe' if safe_mode else 'unchecked':<10} workers={workers:<4}"
                      f"{format_seconds(geometric_mean(means)):>12} s over {len(means)} benchmark(s)\n")

    failures = [r for r in results if not r.verified]
    if failures:
        out.write("\nVerification failures:\n")
        for r in failures:
            out.write(f"  {r.benchmark.upper()}.{r.class_tag} workers={r.workers} rep={r.rep}\n")
    return out.getvalue()


def run_metadata() -> Dict[str, Any]:
    try:
        numba_version = metadata.version('numba')
    except metadata.PackageNotFoundError:
        numba_version = None
    return {
        'timestamp': datetime.now(timezone.utc).isoformat(),
        'host': platform.node(),
        'platform': platform.platform(),
        'python': platform.python_version(),
        'numba': numba_version,
    }


def render_json(results: Sequence[BenchmarkResult],
                reports: Optional[Sequence[Tuple[Dict[str, Any], ComparisonReport]]] = None) -> str:
    document = {
        'metadata': run_metadata(),
        'results': [{**result_row_typed(r), 'timers': r.timers, 'details': r.details} for r in results],
        'stats': sample_stats(results),
    }
    if reports:
        document['comparisons'] = [{'key': key, **report.as_dict()} for key, report in reports]
        document['note'] = NO_CORRECTION_NOTE
    return json.dumps(document, indent=2, default=str) + "\n"


def result_row_typed(result: BenchmarkResult) -> Dict[str, Any]:
    return {
        'benchmark': result.benchmark,
        'class': result.class_tag,
        'workers': result.workers,
        'rep': result.rep,
        'seconds': result.seconds,
        'mflops': result.mflops,
        'verified': result.verified,
        'safe_mode': result.safe_mode,
    }


def render_results(results: Sequence[BenchmarkResult], fmt: str) -> str:
    if fmt not in OUTPUT_FORMATS:
        raise UsageError(f"unknown output format '{fmt}'")
    if fmt == 'csv':
        buffer = io.StringIO()
        write_csv(results, buffer)
        return buffer.getvalue()
    if fmt == 'json':
        return render_json(results)
    return render_text(results)


COMPARISON_COLUMNS = ('label_a', 'label_b', 'n', 'mean_a', 'mean_b', 'normality_p_a', 'normality_p_b',
                      'test', 'p_value', 'verdict', 'relative_difference_pct')


def comparison_row(key: Mapping[str, Any], report: ComparisonReport) -> Dict[str, str]:
    stats_a, stats_b = report.stats
    row = {k: str(v) for k, v in key.items()}
    row.update({
        'label_a': report.labels[0],
        'label_b': report.labels[1],
        'n': str(stats_a.n),
        'mean_a': format_seconds(stats_a.mean),
        'mean_b': format_seconds(stats_b.mean),
        'normality_p_a': format_p(report.normality_p[0]),
        'normality_p_b': format_p(report.normality_p[1]),
        'test': report.test,
        'p_value': format_p(report.p_value),
        'verdict': report.verdict,
        'relative_difference_pct': f"{report.relative_difference_pct:.3g}",
    })
    return row


def render_comparisons(reports: Sequence[Tuple[Dict[str, Any], ComparisonReport]], fmt: str,
                       key_columns: Sequence[str]) -> str:
    if fmt == 'json':
        return json.dumps({
            'metadata': run_metadata(),
            'comparisons': [{'key': key, **report.as_dict()} for key, report in reports],
            'note': NO_CORRECTION_NOTE,
        }, indent=2, default=str) + "\n"

    if fmt == 'csv':
        logger.info(NO_CORRECTION_NOTE)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(key_columns) + list(COMPARISON_COLUMNS),
                                lineterminator='\n')
        writer.writeheader()
        for key, report in reports:
            writer.writerow(comparison_row(key, report))
        return buffer.getvalue()

    out = io.StringIO()
    for key, report in reports:
        row = comparison_row(key, report)
        label = ", ".join(f"{k}={v}" for k, v in key.items())
        out.write(f"[{label}] {row['label_a']} mean {row['mean_a']} s vs {row['label_b']} mean {row['mean_b']} s "
                  f"({row['relative_difference_pct']}%): {report.test} p={row['p_value']} -> {report.verdict}\n")
    out.write(f"\nNote: {NO_CORRECTION_NOTE}.\n")
    return out.getvalue()


def emit(text: str, path: Optional[str] = None, stream: TextIO = None) -> None:
    """Write rendered output to path, or to stdout when no path is given"""
    if path:
        with open(path, 'w', newline='') as handle:
            handle.write(text)
        logger.info("Wrote %s", path)
        return
    (stream or sys.stdout).write(text)
