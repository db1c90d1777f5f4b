# validators.py - command-line input checks
import re
from typing import List, Optional, Tuple

from constants import BENCHMARKS, OUTPUT_FORMATS, SUPPORTED_CLASSES


class InputValidator:
    """Validation of raw CLI values; every check returns (ok, message)"""

    @staticmethod
    def validate_benchmark(name: str, allow_all: bool = True) -> Tuple[bool, Optional[str]]:
        """Validate a benchmark name (case-insensitive)"""
        name = (name or '').strip().lower()
        if allow_all and name == 'all':
            return True, None
        if name not in BENCHMARKS:
            return False, f"Unknown benchmark '{name}'. Choose one of: {', '.join(BENCHMARKS)}"
        return True, None

    @staticmethod
    def validate_class(tag: str) -> Tuple[bool, Optional[str]]:
        """Validate a problem class tag"""
        tag = (tag or '').strip().upper()
        if tag not in SUPPORTED_CLASSES:
            return False, f"Unsupported class '{tag}'. Choose one of: {', '.join(SUPPORTED_CLASSES)}"
        return True, None

    @staticmethod
    def parse_worker_list(value: str) -> Tuple[Optional[List[int]], Optional[str]]:
        """Parse '1,2,4' or '1-4' (or a mix) into an ordered, duplicate-free list"""
        if value is None or not value.strip():
            return None, "Worker list is empty"
        workers: List[int] = []
        for part in value.split(','):
            part = part.strip()
            match = re.match(r'^(\d+)(?:-(\d+))?$', part)
            if not match:
                return None, f"Invalid worker count '{part}'. Use e.g. 1,2,4 or 1-8"
            lo = int(match.group(1))
            hi = int(match.group(2)) if match.group(2) else lo
            if lo < 1 or hi < lo:
                return None, f"Invalid worker range '{part}'. Counts start at 1"
            for count in range(lo, hi + 1):
                if count not in workers:
                    workers.append(count)
        return workers, None

    @staticmethod
    def validate_reps(value: int) -> Tuple[bool, Optional[str]]:
        if value < 1:
            return False, "Repetitions must be at least 1"
        return True, None

    @staticmethod
    def validate_format(fmt: str) -> Tuple[bool, Optional[str]]:
        if fmt not in OUTPUT_FORMATS:
            return False, f"Unknown format '{fmt}'. Choose one of: {', '.join(OUTPUT_FORMATS)}"
        return True, None

    @staticmethod
    def validate_stack_reserve(value: Optional[int]) -> Tuple[bool, Optional[str]]:
        """None means 'not given'; 0 keeps the platform default"""
        from runtime.pool import MIN_STACK_RESERVE

        if value is None or value == 0:
            return True, None
        if value < MIN_STACK_RESERVE:
            return False, f"Stack reserve must be 0 or at least {MIN_STACK_RESERVE} bytes"
        return True, None

    @staticmethod
    def parse_key_columns(value: str, columns) -> Tuple[Optional[List[str]], Optional[str]]:
        """Split a --key value and check every name against the known columns"""
        keys = [k.strip() for k in (value or '').split(',') if k.strip()]
        if not keys:
            return None, "Key must name at least one column"
        unknown = [k for k in keys if k not in columns]
        if unknown:
            return None, f"Unknown key column(s): {', '.join(unknown)}"
        return keys, None
