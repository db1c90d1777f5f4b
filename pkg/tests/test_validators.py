# tests/test_validators.py
import pytest
from validators import InputValidator
from runtime.pool import MIN_STACK_RESERVE

class TestInputValidator:

    def test_validate_benchmark_valid(self):
        """Known names pass in any case, and 'all' is accepted"""
        for name in ("ep", "CG", " lu ", "all"):
            valid, error = InputValidator.validate_benchmark(name)
            assert valid is True
            assert error is None

    def test_validate_benchmark_invalid(self):
        """Unknown names list the choices"""
        valid, error = InputValidator.validate_benchmark("xx")
        assert valid is False
        assert "Unknown benchmark" in error
        assert "ep" in error

        valid, error = InputValidator.validate_benchmark("all", allow_all=False)
        assert valid is False

    def test_validate_class(self):
        """Class tags S through C, case-insensitive"""
        assert InputValidator.validate_class("w") == (True, None)
        valid, error = InputValidator.validate_class("D")
        assert valid is False
        assert "Unsupported class" in error

    def test_parse_worker_list_values(self):
        """Comma lists keep their order"""
        workers, error = InputValidator.parse_worker_list("4,1,2")
        assert workers == [4, 1, 2]
        assert error is None

    def test_parse_worker_list_ranges(self):
        """Ranges expand and duplicates collapse"""
        workers, error = InputValidator.parse_worker_list("1-3,2,8")
        assert workers == [1, 2, 3, 8]
        assert error is None

    @pytest.mark.parametrize("value", ["", "0", "a", "3-1", "1,,2", "-2"])
    def test_parse_worker_list_invalid(self, value):
        """Empty, zero, reversed and non-numeric entries are rejected"""
        workers, error = InputValidator.parse_worker_list(value)
        assert workers is None
        assert error

    def test_validate_reps(self):
        """At least one repetition"""
        assert InputValidator.validate_reps(1) == (True, None)
        valid, _ = InputValidator.validate_reps(0)
        assert valid is False

    def test_validate_format(self):
        """text, csv and json only"""
        for fmt in ("text", "csv", "json"):
            assert InputValidator.validate_format(fmt)[0] is True
        assert InputValidator.validate_format("xml")[0] is False

    def test_validate_stack_reserve(self):
        """Unset and zero pass, small nonzero reserves fail"""
        assert InputValidator.validate_stack_reserve(None) == (True, None)
        assert InputValidator.validate_stack_reserve(0) == (True, None)
        assert InputValidator.validate_stack_reserve(MIN_STACK_RESERVE)[0] is True
        valid, error = InputValidator.validate_stack_reserve(1024)
        assert valid is False
        assert str(MIN_STACK_RESERVE) in error

    def test_parse_key_columns(self):
        """Key columns must be known CSV columns"""
        columns = ("benchmark", "class", "workers")
        keys, error = InputValidator.parse_key_columns("benchmark, workers", columns)
        assert keys == ["benchmark", "workers"]
        assert error is None

        keys, error = InputValidator.parse_key_columns("benchmark,host", columns)
        assert keys is None
        assert "host" in error

        keys, error = InputValidator.parse_key_columns(" , ", columns)
        assert keys is None
