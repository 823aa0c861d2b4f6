# group elements, transport, holonomy and gauge jobs
import logging

import numpy as np

from util.connections import (
    DEFAULT_NODES, GaugePath, PathConnection, gauge_transform, holonomy, hyperbolic_generator, integrate_transport,
    lifted_shift, manufactured_rotation_loop, transport_path, transport_with_error, trivializing_gauge,
)
from util.hyperbolic import (
    DEFAULT_CLASSIFY_TOL, AffLieElement, AffMap, IsometryClass, LieElement, LiftedPoint, MoebiusMap,
    PreconditionError, classify, exp_lie, fixed_points,
)
from util.jobs import JobSpec, ResultEnvelope, decode_complex
from util.moduli import construct_ptau_loop
from util.storage import load_connection_csv

logger = logging.getLogger(__name__)


def element_from_params(params: dict) -> MoebiusMap:
    """
    Group element from job parameters.

    Args:
        params: Either {'preset': 'H' | 'R', 's': float} or {'a': [re, im], 'b': [re, im]}

    Returns:
        MoebiusMap: The element in canonical sign
    """
    preset = params.get('preset')
    s = float(params.get('s', 1.0))
    if preset == 'H':
        return exp_lie(LieElement(0.0, 1.0), s)
    if preset == 'R':
        return exp_lie(LieElement(1.0, 0.0), s)
    if 'a' not in params or 'b' not in params:
        raise PreconditionError('an element needs a preset or both matrix entries a and b')
    return MoebiusMap(decode_complex(params['a']), decode_complex(params['b']))


def connection_from_params(params: dict) -> PathConnection:
    """
    Sampled connection from job parameters.

    Presets:
        zero / constant: the same algebra element at every node (affine when scale_rate or shift_rate is given)
        rot-loop: manufactured loop R(2 pi winding t) exp(t gamma) with trace tau
        ptau: randomly conjugated rot-1 loop of trace tau (seeded)
        csv: samples read from a file
    """
    nodes = int(params.get('nodes', DEFAULT_NODES))
    domain = params.get('domain', 'interval')
    if 'csv' in params:
        return load_connection_csv(params['csv'], domain)
    preset = params.get('preset', 'constant')
    if preset == 'rot-loop':
        return manufactured_rotation_loop(hyperbolic_generator(params.get('tau', 3.0)), nodes,
                                          int(params.get('winding', 1)))
    if preset == 'ptau':
        return construct_ptau_loop(params.get('tau', 3.0), int(params.get('seed', 0)), nodes).connection
    affine = 'scale_rate' in params or 'shift_rate' in params
    if preset == 'zero':
        gamma = AffLieElement(0.0, 0.0) if affine else LieElement(0.0, 0.0)
    elif affine:
        gamma = AffLieElement(float(params.get('scale_rate', 0.0)), float(params.get('shift_rate', 0.0)))
    else:
        gamma = LieElement(float(params.get('alpha', 0.0)), decode_complex(params.get('beta', [0.0, 0.0])))
    return PathConnection.constant(gamma, nodes, domain)


def _element_outputs(g) -> dict:
    if isinstance(g, AffMap):
        return {'scale': g.scale, 'shift': g.shift}
    return {'a': g.a, 'b': g.b, 'trace': g.trace}


def _fixed_point_payload(g: MoebiusMap, title: str) -> dict:
    small, big = fixed_points(g)
    return {'kind': 'boundary-points', 'title': title, 'angles': [small.angle, big.angle],
            'labels': ['l_small', 'l_big'], 'geodesics': [[small.angle, big.angle]]}


def build_classify(job: JobSpec) -> ResultEnvelope:
    g = element_from_params(job.params['element'])
    tol = job.params.get('tol', DEFAULT_CLASSIFY_TOL)
    kind = classify(g, tol)
    outputs = {'class': kind.value, 'abs_trace': abs(g.trace), **_element_outputs(g)}
    payload = None
    if kind is IsometryClass.HYPERBOLIC:
        small, big = fixed_points(g, tol)
        outputs['fixed_points'] = {'l_small': small.angle, 'l_big': big.angle}
        payload = _fixed_point_payload(g, 'Fixed points')
    return ResultEnvelope.for_job(job, outputs, {'tol': tol}, payload)


def build_transport(job: JobSpec) -> ResultEnvelope:
    A = connection_from_params(job.params['connection'])
    t0, t1 = job.params.get('t0', 0.0), job.params.get('t1', 1.0)
    substeps = job.params.get('substeps', 1)
    g, error = transport_with_error(A, t0, t1)
    if substeps > 1:
        g = integrate_transport(A, t0, t1, substeps)
    diagnostics = {'nodes': A.n, 'substeps': substeps, 'error_estimate': error}
    return ResultEnvelope.for_job(job, _element_outputs(g), diagnostics)


def build_holonomy(job: JobSpec) -> ResultEnvelope:
    A = connection_from_params(job.params['connection'])
    h = holonomy(A, job.params.get('substeps', 1))
    small, big = h.fixed_points()
    outputs = {**_element_outputs(h.element), 'rotation_number': h.rotation_number,
               'fixed_points': {'l_small': small.angle, 'l_big': big.angle}}
    payload = {'kind': 'curve', 'title': 'Lift of l_small along the loop', 'x': np.linspace(0, 1, h.lift_trace.size),
               'y': h.lift_trace, 'xlabel': 't', 'ylabel': 'lifted angle'}
    return ResultEnvelope.for_job(job, outputs, {'nodes': A.n}, payload)


def build_rotnum(job: JobSpec) -> ResultEnvelope:
    h = holonomy(connection_from_params(job.params['connection']))
    outputs = {'rotation_number': h.rotation_number,
               'fixed_point_shift': h.lift_trace[-1] - h.lift_trace[0]}
    if 'point' in job.params:
        point = LiftedPoint(job.params['point'])
        outputs['point'] = point.value
        outputs['shift'] = lifted_shift(h, point)
    return ResultEnvelope.for_job(job, outputs, {'trace': h.element.trace})


def build_gauge(job: JobSpec) -> ResultEnvelope:
    """Gauge-transform a connection and report how far transport is from Phi_1 P Phi_0^-1."""
    A = connection_from_params(job.params['connection'])
    kind = job.params.get('gauge', 'trivializing')
    if kind == 'trivializing':
        phi = trivializing_gauge(A)
    else:
        g = element_from_params(job.params.get('element', {'preset': 'R', 's': 1.0}))
        if A.is_affine:
            raise PreconditionError('constant gauges act on su(1,1) connections only')
        phi = GaugePath(tuple(g for _ in range(A.n)), A.domain)
    moved = gauge_transform(phi, A)
    if A.domain == 'circle':
        before, after = transport_path(A).end, transport_path(moved).end
        start, end = phi.samples[0], phi.samples[0]
    else:
        before, after = integrate_transport(A), integrate_transport(moved)
        start, end = phi.samples[0], phi.end
    expected = end.compose(before).compose(start.inverse())
    norms = [a.norm() for a in moved.samples]
    outputs = {'covariance_defect': after.distance(expected), 'max_norm': max(norms), **_element_outputs(after)}
    return ResultEnvelope.for_job(job, outputs, {'gauge': kind, 'nodes': A.n})
