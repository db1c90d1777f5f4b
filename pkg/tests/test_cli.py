# tests/test_cli.py
import json

import pytest

import main
from error_handler import EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION
from harness import runner


@pytest.fixture
def stub_execute(monkeypatch, make_result):
    """Replace the benchmark sweep with canned results; returns the captured specs"""
    specs = []
    outcome = {'verified': True}

    def fake_execute(spec, isolate=None):
        specs.append(spec)
        return [make_result(benchmark=b, workers=w, rep=r, verified=outcome['verified'])
                for b in spec.benchmarks for w in spec.workers for r in range(1, spec.reps + 1)]

    monkeypatch.setattr(runner, 'execute', fake_execute)
    fake_execute.specs = specs
    fake_execute.outcome = outcome
    return fake_execute


def write_results(path, seconds):
    rows = ["benchmark,class,workers,rep,seconds,mflops,verified,safe_mode"]
    rows += [f"ep,S,1,{rep},{s},10,true,false" for rep, s in enumerate(seconds, start=1)]
    path.write_text("\n".join(rows) + "\n")
    return str(path)


class TestList:

    def test_list_prints_matrix(self, capsys):
        assert main.main(['list']) == EXIT_OK
        out = capsys.readouterr().out
        for name in ('EP', 'CG', 'FT', 'IS', 'MG', 'BT', 'SP', 'LU'):
            assert name in out
        assert '1400 /15' in out


class TestUsageErrors:

    @pytest.mark.parametrize('argv', [
        [],
        ['frobnicate'],
        ['run'],
        ['run', 'xx'],
        ['run', 'ep', '--class', 'Z'],
        ['run', 'ep', '--workers', '0'],
        ['run', 'ep', '--reps', 'many'],
        ['compare', 'only-one.csv'],
    ])
    def test_bad_arguments_exit_1(self, argv, capsys, stub_execute):
        assert main.main(argv) == EXIT_USAGE
        assert capsys.readouterr().err

    def test_missing_results_file(self, tmp_path):
        assert main.main(['compare', str(tmp_path / 'a.csv'), str(tmp_path / 'b.csv')]) == EXIT_USAGE


class TestRun:

    def test_verified_run(self, stub_execute, capsys):
        code = main.main(['run', 'ep', '--class', 's', '--workers', '1,2', '--reps', '2', '--format', 'csv'])
        assert code == EXIT_OK
        spec = stub_execute.specs[0]
        assert spec.class_tag == 'S'
        assert spec.workers == [1, 2]
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith('benchmark,class,workers,rep')
        assert len(lines) == 1 + 4

    def test_unverified_run_exits_2(self, stub_execute, capsys):
        """Results are still emitted; stderr names every failed run"""
        stub_execute.outcome['verified'] = False
        assert main.main(['run', 'cg', '--workers', '1', '--reps', '1', '--format', 'csv']) == EXIT_VERIFICATION
        captured = capsys.readouterr()
        assert len(captured.out.splitlines()) == 2
        assert "Verification failed. 1 run(s) failed verification: CG.S workers=1 rep=1" in captured.err

    def test_output_file(self, stub_execute, tmp_path, capsys):
        out = tmp_path / 'run.json'
        assert main.main(['run', 'ep', '--workers', '1', '--reps', '1', '--format', 'json',
                          '--out', str(out)]) == EXIT_OK
        assert json.loads(out.read_text())['results'][0]['benchmark'] == 'ep'
        assert capsys.readouterr().out == ''

    def test_unexpected_exception_exits_3(self, monkeypatch):
        def explode(spec, isolate=None):
            raise RuntimeError("kaboom")

        monkeypatch.setattr(runner, 'execute', explode)
        assert main.main(['run', 'ep', '--workers', '1', '--reps', '1']) == EXIT_INTERNAL


class TestCompare:

    def test_compare_two_files(self, tmp_path, capsys):
        a = write_results(tmp_path / 'a.csv', [1.0, 1.1, 0.9, 1.05, 0.95, 1.02, 0.98, 1.01])
        b = write_results(tmp_path / 'b.csv', [2.0, 2.1, 1.9, 2.05, 1.95, 2.02, 1.98, 2.01])
        assert main.main(['compare', a, b, '--format', 'csv']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith('benchmark,class,workers,label_a')
        assert lines[1].endswith(',different,99.9')

    def test_unknown_key_column(self, tmp_path):
        a = write_results(tmp_path / 'a.csv', [1.0, 1.1, 0.9])
        assert main.main(['compare', a, a, '--key', 'benchmark,host']) == EXIT_USAGE

    def test_too_few_repetitions(self, tmp_path):
        """Two reps cannot be tested, which is a usage error"""
        a = write_results(tmp_path / 'a.csv', [1.0, 1.1])
        assert main.main(['compare', a, a]) == EXIT_USAGE
