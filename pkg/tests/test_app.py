import json
import logging

import pytest

import app as app_module
from app import build_parser, configure_logging, create_app, expand_config_file
from commands import SCHEMA_VERSION
from config import ProductionConfig
from utils.output import aggregate_path
from utils.validators import ValidationError


@pytest.fixture
def cli(monkeypatch):
    monkeypatch.setattr(app_module, 'configure_logging', lambda settings: None)
    return create_app('production')


@pytest.fixture
def restore_logging():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in root.handlers:
        handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


class TestRun:

    def test_stabilize_csv(self, cli, tmp_path):
        out = tmp_path / 'stab.csv'
        code = cli.run(['stabilize', '--protocol', 'baseline', '--n', '8', '--trials', '5',
                        '--out', str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == 'n,protocol,trial,seed,converged,steps,parallel_time'
        assert len(lines) == 6
        assert aggregate_path(out).exists()

    def test_stdout_when_no_out(self, cli, capsys):
        assert cli.run(['states', '--m-values', '2,3']) == 0
        header = capsys.readouterr().out.splitlines()[0]
        assert header.startswith('m,states,')

    @pytest.mark.parametrize('fmt', ['csv', 'json'])
    def test_same_seed_same_bytes(self, cli, tmp_path, fmt):
        paths = [tmp_path / f'a.{fmt}', tmp_path / f'b.{fmt}']
        for path in paths:
            code = cli.run(['stabilize', '--n', '32', '--m', '5', '--trials', '3', '--seed', '9',
                            '--format', fmt, '--out', str(path)])
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_json_document(self, cli, tmp_path):
        out = tmp_path / 'epi.json'
        assert cli.run(['epidemic', '--n', '20', '--trials', '5', '--format', 'json',
                        '--jobs', '1', '--out', str(out)]) == 0
        document = json.loads(out.read_text())
        assert document['schema_version'] == SCHEMA_VERSION
        assert document['command'] == 'epidemic'
        assert document['passed'] is True and document['exit_code'] == 0
        assert 'jobs' not in document['config'] and 'out' not in document['config']
        assert document['rows'][0]['n'] == 20

    def test_check_failed_exit(self, cli, tmp_path):
        code = cli.run(['verify', '--protocol', 'baseline', '--n', '3', '--start', 'initial',
                        '--out', str(tmp_path / 'v.csv')])
        assert code == 2

    def test_timeout_exit(self, cli, tmp_path):
        code = cli.run(['stabilize', '--n', '64', '--trials', '1', '--max-steps', '5',
                        '--out', str(tmp_path / 's.csv')])
        assert code == 3


class TestUsage:

    @pytest.mark.parametrize('argv', [
        ['stabilize', '--protocol', 'pll-sym', '--n', '2'],
        ['stabilize'],
        ['teleport', '--n', '4'],
        ['stabilize', '--n', 'beaucoup'],
        ['stabilize', '--n', '8', '--n-values', '4,x'],
        ['survivors', '--protocol', 'baseline', '--n', '8'],
        ['epidemic', '--n', '10', '--subset-size', '11'],
        ['predicates', '--n', '16', '--target', 'start:7'],
    ])
    def test_usage_errors(self, cli, tmp_path, argv):
        out = tmp_path / 'never.csv'
        assert cli.run(argv + ['--out', str(out)]) == 1
        assert not out.exists()

    def test_unwritable_output(self, cli, tmp_path):
        out = tmp_path / 'missing' / 'r.csv'
        assert cli.run(['states', '--m-values', '2', '--out', str(out)]) == 1


class TestConfigFile:

    def test_file_values_and_explicit_override(self, cli, tmp_path):
        settings = tmp_path / 'run.conf'
        settings.write_text('# campagne\nprotocol=baseline\nn=8\ntrials=3\nformat=json\n')
        out = tmp_path / 'r.json'
        code = cli.run(['stabilize', '--config-file', str(settings), '--trials', '4',
                        '--out', str(out)])
        assert code == 0
        document = json.loads(out.read_text())
        assert document['config']['protocol'] == 'baseline'
        assert len(document['rows']) == 4

    def test_boolean_flags(self, tmp_path):
        settings = tmp_path / 'flags.conf'
        settings.write_text('check-invariants=true\ngame=false\nn=16\n')
        argv = expand_config_file(['stabilize', '--config-file', str(settings)])
        assert argv == ['stabilize', '--check-invariants', '--n', '16']

    def test_missing_file(self, cli):
        assert cli.run(['stabilize', '--config-file', '/nonexistent/run.conf']) == 1

    def test_missing_command(self, tmp_path):
        settings = tmp_path / 'run.conf'
        settings.write_text('n=8\n')
        with pytest.raises(ValidationError):
            expand_config_file(['--config-file', str(settings)])


class TestParser:

    def test_defaults(self):
        args = build_parser(ProductionConfig.defaults()).parse_args(['compare', '--n-values', '64, 256'])
        assert args.n_values == [64, 256]
        assert args.protocol == 'pll' and args.format == 'csv'

    def test_invariants_follow_profile(self, monkeypatch):
        monkeypatch.setattr(app_module, 'configure_logging', lambda settings: None)
        args = create_app('development').parse(['stabilize', '--n', '8'])
        assert args.check_invariants is True
        args = create_app('production').parse(['stabilize', '--n', '8'])
        assert args.check_invariants is False


def test_json_logs_to_file(tmp_path, restore_logging):

    class Settings(ProductionConfig):
        LOG_FORMAT = 'json'
        LOG_FILE = str(tmp_path / 'run.log')
        LOG_LEVEL = 'INFO'

    configure_logging(Settings)
    logging.getLogger('tests').info('essai terminé')
    for handler in logging.getLogger().handlers:
        handler.flush()
    record = json.loads((tmp_path / 'run.log').read_text(encoding='utf-8').splitlines()[-1])
    assert record['message'] == 'essai terminé'
    assert record['levelname'] == 'INFO'
