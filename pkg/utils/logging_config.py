# utils/logging_config.py
"""
Logging configuration for the benchmark suite
Includes structured (JSON) logging, benchmark performance records and error tracking
"""
import sys
import logging
import logging.handlers
import json
import time
from datetime import datetime
from functools import wraps
from typing import Dict, Any, Optional
from pathlib import Path
import traceback

import settings

class JSONFormatter(logging.Formatter):
    """Custom JSON formatter for structured logging"""

    EXTRA_FIELDS = ('benchmark', 'class_tag', 'workers', 'action', 'error_id', 'verified', 'mflops')

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as JSON"""
        log_data = {
            'timestamp': datetime.fromtimestamp(record.created).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno
        }

        for name in self.EXTRA_FIELDS:
            if hasattr(record, name):
                log_data[name] = getattr(record, name)
        if hasattr(record, 'duration'):
            log_data['duration_ms'] = record.duration

        if record.exc_info:
            log_data['exception'] = {
                'type': record.exc_info[0].__name__,
                'message': str(record.exc_info[1]),
                'traceback': traceback.format_exception(*record.exc_info)
            }

        return json.dumps(log_data, ensure_ascii=False)

class PerformanceLogger:
    """Logger for benchmark timings"""

    def __init__(self, logger_name: str = 'performance'):
        self.logger = logging.getLogger(logger_name)

    def log_benchmark(self, benchmark: str, class_tag: str, workers: int, seconds: float,
                      mflops: float, verified: bool):
        """Log one finished benchmark run"""
        self.logger.info(
            f"Benchmark completed: {benchmark}.{class_tag} workers={workers} "
            f"time={seconds:.4f}s mflops={mflops:.2f} verified={verified}",
            extra={
                'benchmark': benchmark,
                'class_tag': class_tag,
                'workers': workers,
                'duration': seconds * 1000.0,
                'mflops': mflops,
                'verified': verified
            }
        )

    def log_phase(self, action: str, duration_ms: float, success: bool = True,
                  extra_data: Dict[str, Any] = None):
        """Log the duration of a harness or setup phase"""
        self.logger.debug(
            f"Phase {action}: {duration_ms:.1f} ms ({'ok' if success else 'failed'})",
            extra={
                'action': action,
                'duration': duration_ms,
                'success': success,
                'extra_data': extra_data or {}
            }
        )

class ApplicationLogger:
    """Main application logger"""

    def __init__(self):
        self.performance = PerformanceLogger()
        self.app_logger = logging.getLogger('app')

    def log_error(self, error: Exception, context: Dict[str, Any] = None) -> str:
        """Log errors with context"""
        error_id = datetime.now().strftime("%Y%m%d_%H%M%S_%f")

        self.app_logger.error(
            f"Application error: {str(error)}",
            extra={
                'error_id': error_id,
                'action': 'error',
                'context': context or {},
                'error_type': type(error).__name__
            },
            exc_info=True
        )

        return error_id

def setup_logging(log_level: str = None, log_file: str = None,
                  enable_json: bool = None) -> ApplicationLogger:
    """
    Setup logging configuration

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_file: Path to log file (optional)
        enable_json: Whether to use JSON formatting

    Returns:
        ApplicationLogger instance
    """
    log_level = log_level or settings.LOG_LEVEL
    log_file = log_file or settings.LOG_FILE
    enable_json = enable_json if enable_json is not None else settings.LOG_JSON

    logging.root.setLevel(getattr(logging, log_level.upper()))

    for handler in logging.root.handlers[:]:
        logging.root.removeHandler(handler)

    if enable_json:
        formatter = JSONFormatter()
    else:
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

    # stdout carries emitted results
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logging.root.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5
        )
        file_handler.setFormatter(formatter)
        logging.root.addHandler(file_handler)

    configure_logger_levels(log_level)

    return ApplicationLogger()

def configure_logger_levels(log_level: str = 'INFO'):
    """Configure specific logger levels"""
    logging.getLogger('numba').setLevel(logging.WARNING)

    level = getattr(logging, log_level.upper())
    logging.getLogger('app').setLevel(level)
    logging.getLogger('performance').setLevel(level)

def log_performance(action_name: str = None):
    """Decorator to log function performance"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            app_logger = ApplicationLogger()
            start_time = time.perf_counter()

            try:
                result = func(*args, **kwargs)
                duration = (time.perf_counter() - start_time) * 1000

                app_logger.performance.log_phase(
                    action=action_name or func.__name__,
                    duration_ms=duration,
                    success=True
                )

                return result

            except Exception as e:
                duration = (time.perf_counter() - start_time) * 1000

                error_id = app_logger.log_error(
                    error=e,
                    context={
                        'function': func.__name__,
                        'duration_ms': duration
                    }
                )

                app_logger.performance.log_phase(
                    action=action_name or func.__name__,
                    duration_ms=duration,
                    success=False,
                    extra_data={'error_id': error_id}
                )

                raise

        return wrapper
    return decorator

def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Get a logger instance"""
    return logging.getLogger(name or 'app')
