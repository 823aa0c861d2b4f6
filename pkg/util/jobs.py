# validate job documents, hash inputs, build/parse result envelopes
import hashlib
import json
import logging
from dataclasses import dataclass, field

import jsonschema
import numpy as np

logger = logging.getLogger(__name__)

TOOLKIT_VERSION = '0.1.0'

COMMANDS = (
    'classify', 'transport', 'holonomy', 'rotnum', 'gauge', 'check-space', 'construct', 'sheet-index',
    'schwarz-integral', 'solve-cr', 'energy', 'beta-form', 'schwarz-pick', 'cyl-bound', 'cyl-experiment', 'plot',
)
SPACES = ('paff-interval', 'p-interval', 'ptau-circle', 'c-aff', 'c', 'c-tau')
TARGETS = ('interval', 'ptau', 'c-tau')

_NUMBER = {'type': 'number'}
_POSITIVE = {'type': 'number', 'exclusiveMinimum': 0}
_TAU = {'type': 'number', 'exclusiveMinimum': 2}
_SEED = {'type': 'integer', 'minimum': 0}
_COMPLEX = {'type': 'array', 'items': _NUMBER, 'minItems': 2, 'maxItems': 2}
_RESOLUTION = {'type': 'array', 'items': {'type': 'integer', 'minimum': 8}, 'minItems': 2, 'maxItems': 2}


def _object(properties: dict, required: tuple = ()) -> dict:
    return {'type': 'object', 'properties': properties, 'required': list(required), 'additionalProperties': False}


ELEMENT_SCHEMA = _object({'a': _COMPLEX, 'b': _COMPLEX, 'preset': {'enum': ['H', 'R']}, 's': _NUMBER})
CONNECTION_SCHEMA = _object({
    'preset': {'enum': ['zero', 'constant', 'rot-loop', 'ptau']},
    'alpha': _NUMBER, 'beta': _COMPLEX, 'scale_rate': _NUMBER, 'shift_rate': _NUMBER,
    'tau': _TAU, 'winding': {'type': 'integer'}, 'seed': _SEED,
    'nodes': {'type': 'integer', 'minimum': 2}, 'domain': {'enum': ['interval', 'circle']},
    'csv': {'type': 'string'},
})
DOMAIN_SCHEMA = _object({
    'shape': {'enum': ['rectangle', 'cylinder', 'torus', 'disc', 'half_disc']},
    'resolution': _RESOLUTION, 'length': _POSITIVE,
}, required=('shape', 'resolution'))
_SOLVE = {
    'domain': DOMAIN_SCHEMA,
    'case': {'enum': ['constant', 'manufactured', 'germ-manufactured', 'schwarz-pick']},
    'rho': {'type': 'number', 'exclusiveMinimum': 0, 'exclusiveMaximum': 1},
    'tol': _POSITIVE, 'max_evaluations': {'type': 'integer', 'minimum': 1}, 'escape_factor': _POSITIVE,
}

PARAM_SCHEMAS = {
    'classify': _object({'element': ELEMENT_SCHEMA, 'tol': _POSITIVE}, required=('element',)),
    'transport': _object({'connection': CONNECTION_SCHEMA, 't0': _NUMBER, 't1': _NUMBER,
                          'substeps': {'type': 'integer', 'minimum': 1}}, required=('connection',)),
    'holonomy': _object({'connection': CONNECTION_SCHEMA, 'substeps': {'type': 'integer', 'minimum': 1}},
                        required=('connection',)),
    'rotnum': _object({'connection': CONNECTION_SCHEMA, 'point': _NUMBER}, required=('connection',)),
    'gauge': _object({'connection': CONNECTION_SCHEMA, 'gauge': {'enum': ['trivializing', 'constant']},
                      'element': ELEMENT_SCHEMA}, required=('connection',)),
    'check-space': _object({
        'space': {'enum': list(SPACES)}, 'connection': CONNECTION_SCHEMA, 'lam0': _NUMBER, 'lam1': _NUMBER,
        'labels': {'type': 'array', 'items': _NUMBER}, 'tau': _TAU, 'd': {'type': 'integer', 'minimum': 0},
        'seed': _SEED,
    }, required=('space',)),
    'construct': _object({
        'target': {'enum': list(TARGETS)}, 'tau': _TAU, 'd': {'type': 'integer', 'minimum': 0}, 'seed': _SEED,
        'nodes': {'type': 'integer', 'minimum': 8}, 'lam0': _NUMBER, 'lam1': _NUMBER,
    }, required=('target',)),
    'sheet-index': _object({'tau': _TAU, 'd': {'type': 'integer', 'minimum': 0}, 'seed': _SEED,
                            'turns': {'type': 'integer'}, 'theta': _NUMBER}),
    'schwarz-integral': _object({'gamma': {'enum': ['bump', 'lorentzian']}, 'z': _COMPLEX, 'center': _NUMBER,
                                 'width': _POSITIVE, 'radius': _POSITIVE}, required=('z',)),
    'solve-cr': _object(_SOLVE, required=('domain',)),
    'energy': _object(_SOLVE, required=('domain',)),
    'beta-form': _object({'family': {'enum': ['constant', 'transported']}, 'element': ELEMENT_SCHEMA,
                          'distances': {'type': 'array', 'items': _NUMBER, 'minItems': 1}, 'b': _NUMBER,
                          'shift': _NUMBER}),
    'schwarz-pick': _object({'shape': {'enum': ['disc', 'half_disc']}, 'resolution': {'type': 'integer', 'minimum': 8},
                             'rho': {'type': 'number', 'exclusiveMinimum': 0, 'exclusiveMaximum': 1}}),
    'cyl-bound': _object({'tau': _TAU}, required=('tau',)),
    'cyl-experiment': _object({'tau': _TAU, 'length': _POSITIVE, 'length_factor': _POSITIVE,
                               'seeds': {'type': 'integer', 'minimum': 1}, 'resolution': _RESOLUTION}),
    'plot': _object({'envelope': {'type': 'string'}, 'output': {'type': 'string'}}, required=('envelope',)),
}

JOB_SCHEMA = _object({
    'command': {'enum': list(COMMANDS)},
    'params': {'type': 'object'},
    'out': {'type': 'string'},
    'strict': {'type': 'boolean'},
}, required=('command',))


def stable_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(',', ':'), ensure_ascii=True).encode('utf-8')


@dataclass(frozen=True)
class JobSpec:
    command: str
    params: dict = field(default_factory=dict)
    out: str | None = None
    strict: bool = False

    @classmethod
    def from_dict(cls, doc: dict) -> 'JobSpec':
        """
        Validate a job document and build the JobSpec.

        Raises:
            jsonschema.ValidationError: unknown command, unknown field or bad parameter
        """
        jsonschema.validate(doc, JOB_SCHEMA)
        params = doc.get('params', {})
        jsonschema.validate(params, PARAM_SCHEMAS[doc['command']])
        return cls(doc['command'], params, doc.get('out'), bool(doc.get('strict', False)))

    @classmethod
    def from_json(cls, text: str) -> 'JobSpec':
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise jsonschema.ValidationError(f'job is not valid JSON: {e}') from e
        return cls.from_dict(doc)

    def inputs_hash(self) -> str:
        return hashlib.sha256(stable_json({'command': self.command, 'params': self.params})).hexdigest()


def encode(value):
    """JSON-ready copy of a result value; complex numbers become [re, im]."""
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, np.ndarray):
        return encode(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def decode_complex(pair) -> complex:
    return complex(pair[0], pair[1])


@dataclass
class ResultEnvelope:
    command: str
    inputs_hash: str
    outputs: dict
    diagnostics: dict = field(default_factory=dict)
    version: str = TOOLKIT_VERSION
    payload: dict | None = None

    @classmethod
    def for_job(cls, job: JobSpec, outputs: dict, diagnostics: dict | None = None,
                payload: dict | None = None) -> 'ResultEnvelope':
        return cls(job.command, job.inputs_hash(), encode(outputs), encode(diagnostics or {}),
                   TOOLKIT_VERSION, encode(payload) if payload is not None else None)

    def to_dict(self) -> dict:
        return {
            'command': self.command,
            'inputs_hash': self.inputs_hash,
            'outputs': self.outputs,
            'diagnostics': self.diagnostics,
            'version': self.version,
            'payload': self.payload,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, doc: dict) -> 'ResultEnvelope':
        return cls(doc['command'], doc['inputs_hash'], doc['outputs'], doc.get('diagnostics', {}),
                   doc.get('version', TOOLKIT_VERSION), doc.get('payload'))

    @classmethod
    def from_json(cls, text: str) -> 'ResultEnvelope':
        return cls.from_dict(json.loads(text))
