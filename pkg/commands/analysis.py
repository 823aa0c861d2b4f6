# Schwarz integrals, CR solves, energies, beta forms and the cylinder experiment
import logging

import numpy as np

from commands.geometry import element_from_params
from util.cr_solver import (
    CONVERGED_RESIDUAL, ESCAPE_FACTOR, MAX_EVALUATIONS, DomainSpec, cylinder_feasibility_experiment,
    preset_problem, schwarz_pick_check, solve_cr, sup_error,
)
from util.energy import beta_form, energy_top, germ_translation, germ_velocity, omega_a_density
from util.hyperbolic import BoundaryPoint, LieElement, exp_lie, log_moebius
from util.jobs import JobSpec, ResultEnvelope, decode_complex
from util.schwarz import (
    bump, cylinder_bound, extremal_map, schwarz_integral, schwarz_integral_decaying, schwarz_pick_ratio,
)
from util.storage import output_dir, save_grid_csv

logger = logging.getLogger(__name__)

DEFAULT_DISTANCES = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0)
PARABOLIC_AT_ONE = LieElement(1.0, 1j)
CYLINDER_TAU = 2.0 * np.cosh(1.0)
CYLINDER_LENGTH_FACTOR = 1.2
CYLINDER_SEEDS = 20
CURVE_TAUS = (2.05, 10.0)
CURVE_POINTS = 200
EXTREMAL_SAMPLES = 64


def build_schwarz_integral(job: JobSpec) -> ResultEnvelope:
    params = job.params
    z = decode_complex(params['z'])
    if params.get('gamma', 'bump') == 'lorentzian':
        value = schwarz_integral_decaying(lambda x: 1.0 / (1.0 + x * x), z, params.get('radius', 200.0))
        exact = 1j / (z + 1j)
        outputs = {'value': value, 'closed_form': exact, 'error': abs(value - exact)}
    else:
        center, width = params.get('center', 0.0), params.get('width', 1.0)
        value = schwarz_integral(lambda x: bump(x, center, width), z, (center - width, center + width))
        outputs = {'value': value, 'boundary_value': bump(z.real, center, width)}
    return ResultEnvelope.for_job(job, outputs, {'gamma': params.get('gamma', 'bump')})


def _solve(params: dict):
    spec = params['domain']
    domain = DomainSpec(spec['shape'], tuple(spec['resolution']), spec.get('length', 1.0))
    bc, model, exact = preset_problem(domain, params.get('case', 'manufactured'), params.get('rho', 0.5))
    u, outcome = solve_cr(domain, None, bc, model, tol=params.get('tol', CONVERGED_RESIDUAL),
                          max_evaluations=params.get('max_evaluations', MAX_EVALUATIONS),
                          escape_factor=params.get('escape_factor', ESCAPE_FACTOR))
    return domain, bc, u, outcome, exact


def _outcome_diagnostics(outcome) -> dict:
    return {'converged': outcome.converged, 'status': outcome.status, 'residual': outcome.residual,
            'iterations': outcome.iterations, 'escaped': outcome.escaped, 'min_margin': outcome.min_margin}


def _grid_payload(u, title: str) -> dict:
    return {'kind': 'grid', 'title': title, 'model': u.model, 'values': u.values}


def build_solve_cr(job: JobSpec) -> ResultEnvelope:
    """Solve a preset A = 0 problem; the grid is written as CSV next to the envelope."""
    domain, _, u, outcome, exact = _solve(job.params)
    path = save_grid_csv(u, output_dir(job.out) / f'solve-cr-{job.inputs_hash()[:12]}.csv')
    outputs = {'sup_error': sup_error(u, exact), 'h': domain.h, 'grid_csv': str(path)}
    return ResultEnvelope.for_job(job, outputs, _outcome_diagnostics(outcome), _grid_payload(u, 'Solution grid'))


def build_energy(job: JobSpec) -> ResultEnvelope:
    domain, bc, u, outcome, _ = _solve(job.params)
    report = energy_top(u, None, bc)
    h_s, h_t = domain.spacing
    outputs = {**report.as_dict(), 'omega_integral': float(np.sum(omega_a_density(u)) * h_s * h_t)}
    return ResultEnvelope.for_job(job, outputs, _outcome_diagnostics(outcome))


def build_beta_form(job: JobSpec) -> ResultEnvelope:
    """
    beta_A along a germ at boundary parameter b, for A = gamma db.

    'constant' keeps the germ fixed; 'transported' moves it by exp(b gamma) followed by a
    shift along the horocycle at 1, so beta vanishes exactly when shift = 0.
    """
    params = job.params
    gamma = log_moebius(element_from_params(params.get('element', {'preset': 'H', 's': 1.0})))
    shift = params.get('shift', 0.0)
    b = params.get('b', 0.3)
    distances = np.asarray(params.get('distances', DEFAULT_DISTANCES), dtype=float)

    def frame(x: float):
        return exp_lie(gamma, x).compose(exp_lie(PARABOLIC_AT_ONE, x * shift))

    def family(x: float):
        if params.get('family', 'transported') == 'constant':
            return 0.0, 0j
        k = frame(x)
        return BoundaryPoint(float(np.angle(k(1.0)))).angle, complex(k(0.0))

    angle, anchor = family(b)
    alpha = germ_velocity(family, b)
    values = beta_form(gamma, family, b, distances, alpha)
    other = beta_form(gamma, family, b, distances, alpha + germ_translation(angle, anchor) * 0.7)
    outputs = {'distances': distances, 'beta': values, 'max_abs': float(np.max(np.abs(values))),
               'alpha_independence': float(np.max(np.abs(values - other)))}
    payload = {'kind': 'curve', 'title': 'beta along the germ', 'x': distances, 'y': values,
               'xlabel': 'distance from anchor', 'ylabel': 'beta'}
    return ResultEnvelope.for_job(job, outputs, {'b': b, 'family': params.get('family', 'transported')}, payload)


def _extremal_deviation(samples: int = EXTREMAL_SAMPLES) -> float:
    rng = np.random.default_rng(0)
    z = 0.95 * np.sqrt(rng.uniform(size=samples)) * np.exp(2j * np.pi * rng.uniform(size=samples))
    u, du = extremal_map(z)
    return float(max(abs(schwarz_pick_ratio(complex(a), complex(d), complex(w)) - 1) for a, d, w in zip(u, du, z)))


def build_schwarz_pick(job: JobSpec) -> ResultEnvelope:
    params = job.params
    shape, n = params.get('shape', 'disc'), params.get('resolution', 65)
    domain = DomainSpec(shape, (n, n) if shape == 'disc' else ((n + 1) // 2, n))
    bc, model, exact = preset_problem(domain, 'schwarz-pick', params.get('rho', 0.5))
    u, outcome = solve_cr(domain, None, bc, model)
    ratio = schwarz_pick_check(u)
    bound = 1 + 5 * domain.h
    outputs = {'max_ratio': ratio, 'bound': bound, 'within_bound': ratio <= bound, 'h': domain.h,
               'sup_error': sup_error(u, exact), 'extremal_deviation': _extremal_deviation()}
    return ResultEnvelope.for_job(job, outputs, _outcome_diagnostics(outcome), _grid_payload(u, 'Schwarz-Pick grid'))


def build_cyl_bound(job: JobSpec) -> ResultEnvelope:
    tau = job.params['tau']
    taus = np.linspace(*CURVE_TAUS, CURVE_POINTS)
    payload = {'kind': 'curve', 'title': 'Cylinder length bound', 'x': taus,
               'y': [cylinder_bound(t) for t in taus], 'xlabel': 'tau', 'ylabel': 'L(tau)'}
    return ResultEnvelope.for_job(job, {'tau': tau, 'bound': cylinder_bound(tau)}, {}, payload)


def build_cyl_experiment(job: JobSpec) -> ResultEnvelope:
    """Seeded solves on a cylinder longer than the bound; interior convergences are expected to be zero."""
    params = job.params
    tau = params.get('tau', CYLINDER_TAU)
    length = params.get('length', params.get('length_factor', CYLINDER_LENGTH_FACTOR) * cylinder_bound(tau))
    kwargs = {'resolution': tuple(params['resolution'])} if 'resolution' in params else {}
    report = cylinder_feasibility_experiment(tau, length, range(params.get('seeds', CYLINDER_SEEDS)), **kwargs)
    outputs = {'tau': tau, 'length': length, 'bound': report.bound,
               'interior_convergences': report.interior_convergences, 'counts': report.counts()}
    diagnostics = {'statuses': [o.status for o in report.outcomes], 'residuals': [o.residual for o in report.outcomes],
                   'min_margins': [o.min_margin for o in report.outcomes]}
    return ResultEnvelope.for_job(job, outputs, diagnostics)
