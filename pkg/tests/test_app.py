import json

import numpy as np
import pytest

from app import EXIT_NOT_CONVERGED, EXIT_OK, EXIT_PRECONDITION, EXIT_SCHEMA, main
from util.storage import load_envelope


def envelopes(directory):
    return [load_envelope(p) for p in sorted(directory.glob('*.json'))]


def test_classify_translation(tmp_path):
    assert main(['--out', str(tmp_path), 'classify', '--preset', 'H', '--s', '1']) == EXIT_OK
    [env] = envelopes(tmp_path)
    assert env.outputs['class'] == 'hyperbolic'
    assert env.outputs['abs_trace'] == pytest.approx(2 * np.cosh(1.0))
    assert env.payload['kind'] == 'boundary-points'


def test_cylinder_bound(tmp_path, capsys):
    assert main(['--out', str(tmp_path), 'cyl-bound', '--tau', str(2 * np.cosh(1.0))]) == EXIT_OK
    [env] = envelopes(tmp_path)
    assert env.outputs['bound'] == pytest.approx(np.pi / 2, abs=1e-12)
    assert capsys.readouterr().out.startswith('cyl-bound')


def test_output_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv('HYPERFLAT_OUTPUT_DIR', str(tmp_path / 'env'))
    assert main(['cyl-bound', '--tau', '3']) == EXIT_OK
    assert len(envelopes(tmp_path / 'env')) == 1


def test_malformed_job_file(tmp_path):
    job = tmp_path / 'job.json'
    job.write_text('{"command": "cyl-bound", ')
    out = tmp_path / 'out'
    assert main(['--job', str(job), '--out', str(out)]) == EXIT_SCHEMA
    assert not out.exists()


def test_unknown_parameter(tmp_path):
    job = tmp_path / 'job.json'
    job.write_text(json.dumps({'command': 'cyl-bound', 'params': {'tau': 3.0, 'bogus': 1}}))
    assert main(['--job', str(job), '--out', str(tmp_path / 'out')]) == EXIT_SCHEMA


def test_missing_job_file(tmp_path):
    assert main(['--job', str(tmp_path / 'nope.json'), '--out', str(tmp_path)]) == EXIT_SCHEMA


def test_bad_flag_value():
    with pytest.raises(SystemExit) as e:
        main(['classify', '--preset', 'X'])
    assert e.value.code == 2


def test_holonomy_needs_a_loop(tmp_path):
    argv = ['--out', str(tmp_path), 'holonomy', '--connection', 'constant', '--beta', '1', '0']
    assert main(argv) == EXIT_PRECONDITION
    assert envelopes(tmp_path) == []


def test_strict_plateau(tmp_path):
    argv = ['--out', str(tmp_path), '--strict', 'solve-cr', '--shape', 'rectangle', '--resolution', '33', '33',
            '--max-evaluations', '1']
    assert main(argv) == EXIT_NOT_CONVERGED
    [env] = envelopes(tmp_path)
    assert env.diagnostics['status'] == 'plateau'
    assert len(list(tmp_path.glob('*.csv'))) == 1


def test_job_file(tmp_path):
    job = tmp_path / 'job.json'
    job.write_text(json.dumps({'command': 'construct', 'params': {'target': 'c-tau', 'tau': 3.0, 'd': 2, 'seed': 1},
                               'out': str(tmp_path / 'out')}))
    assert main(['--job', str(job)]) == EXIT_OK
    [env] = envelopes(tmp_path / 'out')
    assert env.command == 'construct'


def test_plot_envelope(tmp_path):
    pytest.importorskip('kaleido')
    assert main(['--out', str(tmp_path), 'cyl-bound', '--tau', '3']) == EXIT_OK
    [source] = tmp_path.glob('cyl-bound-*.json')
    target = tmp_path / 'curve.svg'
    assert main(['--out', str(tmp_path / 'plots'), 'plot', str(source), '--output', str(target)]) == EXIT_OK
    assert target.read_text().lstrip().startswith('<svg')


def test_plot_render_failure(tmp_path, monkeypatch, capsys):
    def broken(fig, path):
        raise RuntimeError('renderer unavailable')

    monkeypatch.setattr('commands.plot.write_svg', broken)
    assert main(['--out', str(tmp_path), 'cyl-bound', '--tau', '3']) == EXIT_OK
    [source] = tmp_path.glob('cyl-bound-*.json')
    plots = tmp_path / 'plots'
    assert main(['--out', str(plots), 'plot', str(source)]) == EXIT_PRECONDITION
    assert 'cannot render' in capsys.readouterr().err
    assert not plots.exists() or envelopes(plots) == []
