import logging
import sys
import traceback
from typing import Optional, Dict, Any
from functools import wraps
from datetime import datetime

class NpbError(Exception):
    """Base exception for the benchmark suite"""
    pass

class UsageError(NpbError):
    """Unknown benchmark/class or malformed command-line input"""
    pass

class ConfigurationError(NpbError):
    """Inconsistent runtime configuration (build mode, pool settings)"""
    pass

class VerificationError(NpbError):
    """A benchmark run did not pass its built-in verification"""

    def __init__(self, message: str, results=None):
        super().__init__(message)
        self.results = results or []

class WorkerError(NpbError):
    """A body executed by the worker pool failed"""

    def __init__(self, message: str, index=None):
        super().__init__(message)
        self.index = index

class PipelineError(WorkerError):
    """A stage of the ordered pipeline failed or was aborted"""
    pass

class StatisticsError(NpbError, ValueError):
    """Invalid input to a statistical routine"""
    pass

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_INTERNAL = 3

class ErrorHandler:
    """Centralized error handling"""

    ERROR_MESSAGES = {
        'usage': "Invalid usage. {}",
        'config': "Invalid configuration. {}",
        'verification': "Verification failed. {}",
        'worker': "A parallel worker failed. {}",
        'statistics': "Statistics input rejected. {}",
        'generic': "Internal error. Error ID: {}",
    }

    @staticmethod
    def get_user_message(error_type: str, details: str = "") -> str:
        """Get a one-line message for stderr"""
        base_message = ErrorHandler.ERROR_MESSAGES.get(error_type, ErrorHandler.ERROR_MESSAGES['generic'])
        return base_message.format(details).strip()

    @staticmethod
    def error_type(error: Exception) -> str:
        if isinstance(error, UsageError):
            return 'usage'
        if isinstance(error, ConfigurationError):
            return 'config'
        if isinstance(error, VerificationError):
            return 'verification'
        if isinstance(error, WorkerError):
            return 'worker'
        if isinstance(error, StatisticsError):
            return 'statistics'
        return 'generic'

    @staticmethod
    def exit_code_for(error: Optional[BaseException]) -> int:
        """Map an exception to the CLI exit code"""
        if error is None:
            return EXIT_OK
        if isinstance(error, (UsageError, ConfigurationError, StatisticsError)):
            return EXIT_USAGE
        if isinstance(error, VerificationError):
            return EXIT_VERIFICATION
        return EXIT_INTERNAL

    @staticmethod
    def log_error(error: Exception, context: Dict[str, Any] = None) -> str:
        """Log error with context"""
        error_id = datetime.now().strftime("%Y%m%d_%H%M%S_%f")

        log_data = {
            'error_id': error_id,
            'error_type': type(error).__name__,
            'error_message': str(error),
            'context': context,
            'traceback': traceback.format_exc()
        }

        logging.getLogger('app').error(f"Error ID {error_id}: {log_data}")

        return error_id

    @staticmethod
    def handle_cli_errors(func):
        """Decorator for CLI commands: returns an exit code instead of raising"""
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                code = func(*args, **kwargs)
                return EXIT_OK if code is None else code
            except KeyboardInterrupt:
                print("Interrupted", file=sys.stderr)
                return EXIT_INTERNAL
            except NpbError as e:
                kind = ErrorHandler.error_type(e)
                if kind in ('worker', 'generic'):
                    ErrorHandler.log_error(e, context={'command': func.__name__})
                print(ErrorHandler.get_user_message(kind, str(e)), file=sys.stderr)
                return ErrorHandler.exit_code_for(e)
            except Exception as e:
                error_id = ErrorHandler.log_error(e, context={'command': func.__name__})
                print(ErrorHandler.get_user_message('generic', error_id), file=sys.stderr)
                return EXIT_INTERNAL

        return wrapper
