# membership checks, constructions and sheet indices for the boundary-data spaces
import logging

import numpy as np

from commands.geometry import connection_from_params
from util.connections import DEFAULT_NODES, holonomy, integrate_transport
from util.hyperbolic import TWO_PI, LiftedPoint, PreconditionError
from util.jobs import JobSpec, ResultEnvelope
from util.moduli import (
    DiscBoundaryConfig, IntervalDatumAff, IntervalDatumLifted, LoopDatum, PuncturedConfig, big_small_gap,
    check_c, check_c_aff, check_c_tau, check_p_interval, check_paff_interval, check_ptau_circle,
    construct_c_tau_point, construct_interval_datum, construct_ptau_loop, margin_c, margin_c_aff, margin_c_tau,
    margin_p_interval, margin_paff_interval, rotate_interior_end, sheet_index,
)
from util.storage import output_dir, save_connection_csv

logger = logging.getLogger(__name__)


def _require(params: dict, *names: str) -> None:
    missing = [n for n in names if n not in params]
    if missing:
        raise PreconditionError(f'missing parameters for {params.get("space") or params.get("target")}: {missing}')


def _c_tau_config(params: dict) -> PuncturedConfig:
    """From a loop connection and labels, or constructed from (d, tau, seed)."""
    tau = params.get('tau', 3.0)
    if 'labels' in params and 'connection' in params:
        loop = connection_from_params(params['connection'])
        return PuncturedConfig(holonomy(loop), tuple(LiftedPoint(x) for x in params['labels']), tau, loop)
    return construct_c_tau_point(params.get('d', 2), tau, params.get('seed', 0))


def _config_payload(config: PuncturedConfig, title: str) -> dict:
    small, big = config.holonomy.fixed_points()
    angles = [float(np.mod(v, TWO_PI)) for v in config.values()] + [small.angle, big.angle]
    labels = [f'lam{j}' for j in range(config.d + 1)] + ['l_small', 'l_big']
    return {'kind': 'boundary-points', 'title': title, 'angles': angles, 'labels': labels,
            'geodesics': [[small.angle, big.angle]]}


def build_check_space(job: JobSpec) -> ResultEnvelope:
    """
    Membership of boundary data in one of the spaces, with the signed margin where it is defined.

    Args:
        job: check-space job; which parameters are needed depends on params['space']

    Returns:
        ResultEnvelope: outputs {member, margin}
    """
    params = job.params
    space = params['space']
    diagnostics = {'space': space}
    payload = None
    if space == 'paff-interval':
        _require(params, 'connection', 'lam0', 'lam1')
        datum = IntervalDatumAff(connection_from_params(params['connection']), params['lam0'], params['lam1'])
        member, margin = check_paff_interval(datum), margin_paff_interval(datum)
    elif space == 'p-interval':
        _require(params, 'connection', 'lam0', 'lam1')
        datum = IntervalDatumLifted(connection_from_params(params['connection']), LiftedPoint(params['lam0']),
                                    LiftedPoint(params['lam1']))
        member, margin = check_p_interval(datum), margin_p_interval(datum)
    elif space == 'ptau-circle':
        _require(params, 'connection', 'tau')
        datum = LoopDatum(connection_from_params(params['connection']), params['tau'])
        member = check_ptau_circle(datum)
        margin = None
    elif space == 'c-aff':
        _require(params, 'labels')
        member, margin = check_c_aff(params['labels']), margin_c_aff(params['labels'])
    elif space == 'c':
        _require(params, 'labels')
        config = DiscBoundaryConfig(tuple(LiftedPoint(x) for x in params['labels']))
        member, margin = check_c(config), margin_c(config)
    else:
        config = _c_tau_config(params)
        member, margin = check_c_tau(config), margin_c_tau(config)
        diagnostics['labels'] = config.values()
        payload = _config_payload(config, 'C_tau configuration')
    logger.info('%s membership %s (margin %s)', space, member, margin)
    return ResultEnvelope.for_job(job, {'member': member, 'margin': margin}, diagnostics, payload)


def build_construct(job: JobSpec) -> ResultEnvelope:
    """Construct a point of the target space; connections are also written as CSV next to the envelope."""
    params = job.params
    target = params['target']
    seed, nodes = params.get('seed', 0), params.get('nodes', DEFAULT_NODES)
    payload = None
    if target == 'interval':
        datum = construct_interval_datum(params.get('lam0', 0.0), params.get('lam1', 1.0), seed, nodes)
        g = integrate_transport(datum.connection)
        outputs = {'member': check_paff_interval(datum), 'margin': margin_paff_interval(datum),
                   'scale': g.scale, 'shift': g.shift}
        connection = datum.connection
    elif target == 'ptau':
        datum = construct_ptau_loop(params.get('tau', 3.0), seed, nodes)
        h = holonomy(datum.connection)
        outputs = {'member': check_ptau_circle(datum), 'abs_trace': abs(h.element.trace),
                   'rotation_number': h.rotation_number}
        connection = datum.connection
    else:
        config = construct_c_tau_point(params.get('d', 2), params.get('tau', 3.0), seed, nodes)
        outputs = {'member': check_c_tau(config), 'margin': margin_c_tau(config), 'labels': config.values(),
                   'big_small_gap': big_small_gap(config), 'sheet_index': sheet_index(config)}
        connection = config.loop
        payload = _config_payload(config, 'Constructed C_tau configuration')
    path = save_connection_csv(connection, output_dir(job.out) / f'construct-{target}-{job.inputs_hash()[:12]}.csv')
    return ResultEnvelope.for_job(job, outputs, {'seed': seed, 'nodes': connection.n, 'connection_csv': str(path)},
                                  payload)


def build_sheet_index(job: JobSpec) -> ResultEnvelope:
    """Sheet index of a constructed C_tau point, after deck shifts and a rotation of the interior end."""
    params = job.params
    config = construct_c_tau_point(params.get('d', 2), params.get('tau', 3.0), params.get('seed', 0))
    anchor = config.labels[0]
    outputs = {'base': sheet_index(config, anchor)}
    turns = params.get('turns', 0)
    if turns:
        config = config.shifted(turns)
        outputs['shifted'] = sheet_index(config, anchor)
    if 'theta' in params:
        config = rotate_interior_end(config, params['theta'])
        outputs['rotated'] = sheet_index(config, anchor)
        outputs['rotated_member'] = check_c_tau(config)
    outputs['labels'] = config.values()
    return ResultEnvelope.for_job(job, outputs, {'turns': turns, 'margin': margin_c_tau(config)})
