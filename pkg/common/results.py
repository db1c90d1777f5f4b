# common/results.py
"""BenchmarkResult and its human-readable report block"""
from dataclasses import dataclass, field, asdict
from typing import Any, Dict

from common.params import OPERATION_TYPES


@dataclass
class BenchmarkResult:
    benchmark: str
    class_tag: str
    size: str
    iterations: int
    seconds: float
    mflops: float
    verified: bool
    workers: int
    safe_mode: bool
    timers: Dict[str, float] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    rep: int = 1

    @property
    def operation_type(self) -> str:
        return OPERATION_TYPES.get(self.benchmark, 'floating point')

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _line(label: str, value: Any) -> str:
    return f" {label:<16}= {value:>24}"


def report(result: BenchmarkResult) -> str:
    """Classic completion banner for one run"""
    lines = [
        "",
        f" {result.benchmark.upper()} Benchmark Completed.",
        _line("Class", result.class_tag),
        _line("Size", result.size),
        _line("Iterations", result.iterations),
        _line("Time in seconds", f"{result.seconds:.2f}"),
        _line("Total workers", result.workers),
        _line("Mop/s total", f"{result.mflops:.2f}"),
        _line("Operation type", result.operation_type),
        _line("Build mode", "safe" if result.safe_mode else "unchecked"),
        _line("Verification", "SUCCESSFUL" if result.verified else "UNSUCCESSFUL"),
        f" VERIFICATION {'SUCCESSFUL' if result.verified else 'FAILED'}",
    ]

    if result.timers:
        total = result.seconds if result.seconds > 0 else 1.0
        lines.append("")
        lines.append(f"  {'SECTION':<12} {'Time (secs)':>12}")
        for name, seconds in result.timers.items():
            lines.append(f"  {name:<12}:{seconds:>11.3f}  ({seconds * 100.0 / total:6.2f}%)")

    return "\n".join(lines) + "\n"


def build_result(params, workers: int, seconds: float, verified: bool,
                 timers=None, details: Dict[str, Any] = None) -> BenchmarkResult:
    """Assemble the result of a finished run from its class parameters"""
    from common.jit import current_safe_mode

    return BenchmarkResult(
        benchmark=params.benchmark,
        class_tag=params.tag,
        size=params.size_label,
        iterations=params.niter,
        seconds=seconds,
        mflops=params.mflops(seconds),
        verified=bool(verified),
        workers=workers,
        safe_mode=current_safe_mode(),
        timers=timers.as_dict() if timers is not None else {},
        details=details or {},
    )
