import numpy as np
import pytest

from ui_components.plots import disc_figure, figure_for_payload, grid_image_figure, write_svg
from ui_components.summary import format_summary, outcome_table, summary_table
from util.hyperbolic import PreconditionError
from util.jobs import JobSpec, ResultEnvelope


def test_boundary_point_payload():
    payload = {'kind': 'boundary-points', 'angles': [0.3, 2.0], 'labels': ['a', 'b'], 'geodesics': [[0.3, 2.0]]}
    fig = figure_for_payload(payload)
    assert len(fig.data) == 3
    assert list(fig.data[-1].text) == ['a', 'b']
    np.testing.assert_allclose(fig.data[-1].x, np.cos([0.3, 2.0]))


def test_grid_payload_uses_disc_picture():
    values = [[[0.1 * i, 1.0 + 0.1 * j] for j in range(3)] for i in range(3)]
    fig = figure_for_payload({'kind': 'grid', 'model': 'halfplane', 'values': values})
    assert len(fig.data) == 1 + 3 + 3
    for trace in fig.data[1:]:
        assert np.all(np.abs(np.asarray(trace.x) + 1j * np.asarray(trace.y)) < 1)


def test_grid_image_skips_missing_nodes():
    values = np.full((3, 3), np.nan + 0j)
    values[1, 1] = 0.2j
    assert len(grid_image_figure(values, 'disc').data) == 1


def test_curve_payload():
    fig = figure_for_payload({'kind': 'curve', 'x': [0, 1, 2], 'y': [1, 0, 1], 'title': 'c'})
    assert list(fig.data[0].y) == [1, 0, 1]
    assert fig.layout.title.text == 'c'


@pytest.mark.parametrize('payload', [None, {}, {'kind': 'table'}])
def test_unplottable_payloads(payload):
    with pytest.raises(PreconditionError):
        figure_for_payload(payload)


def test_write_svg(tmp_path):
    pytest.importorskip('kaleido')
    path = write_svg(disc_figure('empty'), tmp_path / 'disc.svg')
    assert path.read_text().lstrip().startswith('<svg')


def envelope() -> ResultEnvelope:
    job = JobSpec.from_dict({'command': 'holonomy', 'params': {'connection': {'preset': 'rot-loop'}}})
    outputs = {'trace': -3.0, 'fixed_points': {'l_small': 0.1, 'l_big': 2.0}, 'samples': list(range(20))}
    return ResultEnvelope.for_job(job, outputs, {'nodes': 64})


def test_summary_table_flattens_outputs():
    table = summary_table(envelope()).set_index('field')['value']
    assert table['outputs.fixed_points.l_small'] == 0.1
    assert table['outputs.samples'] == '[20 values]'
    assert table['diagnostics.nodes'] == 64


def test_format_summary_header():
    env = envelope()
    text = format_summary(env)
    assert text.splitlines()[0].startswith(f'holonomy  (inputs {env.inputs_hash[:12]}')
    assert 'outputs.trace' in text


def test_outcome_table_is_sorted():
    table = outcome_table({'plateau': 3, 'escape': 17})
    assert list(table['status']) == ['escape', 'plateau']
    assert list(table['seeds']) == [17, 3]
