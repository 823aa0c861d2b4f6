import jsonschema
import numpy as np
import pytest

from util.jobs import TOOLKIT_VERSION, JobSpec, ResultEnvelope, decode_complex, encode


def test_valid_job():
    job = JobSpec.from_dict({'command': 'cyl-bound', 'params': {'tau': 3.0}, 'out': 'x', 'strict': True})
    assert job.command == 'cyl-bound'
    assert job.params == {'tau': 3.0}
    assert job.out == 'x'
    assert job.strict


@pytest.mark.parametrize('doc', [
    {'command': 'teleport'},
    {'command': 'cyl-bound', 'params': {'tau': 3.0, 'bogus': 1}},
    {'command': 'cyl-bound', 'params': {'tau': 2.0}},
    {'command': 'cyl-bound'},
    {'command': 'solve-cr', 'params': {'domain': {'shape': 'rectangle', 'resolution': [4, 9]}}},
    {'command': 'classify', 'params': {'element': {'preset': 'H'}}, 'colour': 'red'},
])
def test_invalid_jobs(doc):
    with pytest.raises(jsonschema.ValidationError):
        JobSpec.from_dict(doc)


def test_malformed_json():
    with pytest.raises(jsonschema.ValidationError):
        JobSpec.from_json('{"command": ')


def test_inputs_hash_ignores_key_order_and_output_options():
    a = JobSpec.from_json('{"command": "construct", "params": {"target": "c-tau", "tau": 3.0, "d": 2}}')
    b = JobSpec.from_json('{"params": {"d": 2, "tau": 3.0, "target": "c-tau"}, "command": "construct", "strict": true}')
    c = JobSpec.from_json('{"command": "construct", "params": {"target": "c-tau", "tau": 3.0, "d": 3}}')
    assert a.inputs_hash() == b.inputs_hash()
    assert a.inputs_hash() != c.inputs_hash()
    assert len(a.inputs_hash()) == 64


def test_encode_numpy_and_complex_values():
    value = {'z': 1 + 2j, 'arr': np.array([0.5, 1.5]), 'c': np.complex128(3 - 1j), 'flag': np.bool_(True),
             'n': np.int64(4), 'x': np.float32(0.25), 'nested': [(1j, 2)], 3: 'key'}
    assert encode(value) == {'z': [1.0, 2.0], 'arr': [0.5, 1.5], 'c': [3.0, -1.0], 'flag': True, 'n': 4,
                             'x': 0.25, 'nested': [[[0.0, 1.0], 2]], '3': 'key'}
    assert decode_complex([1.0, -2.0]) == 1 - 2j


def test_envelope_for_job():
    job = JobSpec.from_dict({'command': 'cyl-bound', 'params': {'tau': 3.0}})
    envelope = ResultEnvelope.for_job(job, {'bound': np.float64(1.2)}, {'note': 1j})
    assert envelope.inputs_hash == job.inputs_hash()
    assert envelope.version == TOOLKIT_VERSION
    assert envelope.diagnostics == {'note': [0.0, 1.0]}
    assert envelope.payload is None
    restored = ResultEnvelope.from_json(envelope.to_json())
    assert restored.to_dict() == envelope.to_dict()
