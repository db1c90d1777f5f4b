# tests/test_error_handler.py
import json
import logging
import sys

import pytest

from error_handler import (
    EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, ConfigurationError, ErrorHandler,
    PipelineError, StatisticsError, UsageError, VerificationError, WorkerError,
)
from utils.logging_config import JSONFormatter, PerformanceLogger, log_performance, setup_logging


class TestExitCodes:

    @pytest.mark.parametrize('error, code', [
        (None, EXIT_OK),
        (UsageError("bad"), EXIT_USAGE),
        (ConfigurationError("mode"), EXIT_USAGE),
        (StatisticsError("n"), EXIT_USAGE),
        (VerificationError("zeta"), EXIT_VERIFICATION),
        (WorkerError("body", index=3), EXIT_INTERNAL),
        (PipelineError("stage"), EXIT_INTERNAL),
        (RuntimeError("other"), EXIT_INTERNAL),
    ])
    def test_exit_code_for(self, error, code):
        assert ErrorHandler.exit_code_for(error) == code

    def test_statistics_error_is_value_error(self):
        assert issubclass(StatisticsError, ValueError)

    def test_user_message(self):
        assert ErrorHandler.get_user_message('usage', "unknown class") == "Invalid usage. unknown class"
        assert ErrorHandler.get_user_message('nonsense', "id").startswith("Internal error.")


class TestDecorators:

    def test_cli_errors_become_exit_codes(self, capsys):
        @ErrorHandler.handle_cli_errors
        def command(kind):
            if kind == 'usage':
                raise UsageError("unknown benchmark 'xx'")
            if kind == 'verify':
                raise VerificationError("checksum mismatch")
            if kind == 'crash':
                raise KeyError("boom")
            return None

        assert command('ok') == EXIT_OK
        assert command('usage') == EXIT_USAGE
        assert "unknown benchmark 'xx'" in capsys.readouterr().err
        assert command('verify') == EXIT_VERIFICATION
        assert command('crash') == EXIT_INTERNAL
        assert "Error ID" in capsys.readouterr().err

    def test_worker_error_reports_id(self, capsys):
        """Worker failures are logged with an error id and exit 3"""
        @ErrorHandler.handle_cli_errors
        def command():
            raise WorkerError("body failed", index=5)

        assert command() == EXIT_INTERNAL
        assert "A parallel worker failed" in capsys.readouterr().err

    def test_log_error_returns_id(self, caplog):
        with caplog.at_level(logging.ERROR, logger='app'):
            error_id = ErrorHandler.log_error(ValueError("x"), context={'index': 1})
        assert error_id in caplog.text


class TestBuildMode:

    def test_switching_mode_after_load_is_rejected(self):
        """Kernels are already compiled unchecked in this process"""
        from common.jit import configure_build_mode, current_safe_mode

        configure_build_mode(current_safe_mode())
        with pytest.raises(ConfigurationError):
            configure_build_mode(not current_safe_mode())


class TestLogging:

    def test_json_formatter_carries_benchmark_fields(self):
        record = logging.LogRecord('performance', logging.INFO, __file__, 10, "done", None, None)
        record.benchmark = 'mg'
        record.workers = 4
        record.duration = 12.5
        data = json.loads(JSONFormatter().format(record))
        assert data['message'] == "done"
        assert data['benchmark'] == 'mg'
        assert data['workers'] == 4
        assert data['duration_ms'] == 12.5

    def test_json_formatter_exception(self):
        try:
            raise ValueError("bad input")
        except ValueError:
            record = logging.LogRecord('app', logging.ERROR, __file__, 1, "failed", None, sys.exc_info())
        data = json.loads(JSONFormatter().format(record))
        assert data['exception']['type'] == 'ValueError'

    def test_setup_logging_writes_to_stderr(self, tmp_path):
        """Logs never mix with results on stdout"""
        log_file = tmp_path / "logs" / "npb.log"
        setup_logging(log_level='DEBUG', log_file=str(log_file), enable_json=True)
        stream_handlers = [h for h in logging.root.handlers if type(h) is logging.StreamHandler]
        assert stream_handlers and all(h.stream is sys.stderr for h in stream_handlers)
        assert log_file.parent.is_dir()
        assert logging.getLogger('numba').level == logging.WARNING
        setup_logging(log_level='INFO', log_file=None, enable_json=False)

    def test_performance_logger_record(self, caplog):
        with caplog.at_level(logging.INFO, logger='performance'):
            PerformanceLogger().log_benchmark('ep', 'S', 2, 1.25, 30.0, True)
        record = caplog.records[-1]
        assert record.benchmark == 'ep'
        assert record.verified is True
        assert "ep.S workers=2" in record.getMessage()

    def test_log_performance_reraises(self):
        @log_performance('phase')
        def failing():
            raise UsageError("bad")

        with pytest.raises(UsageError):
            failing()
