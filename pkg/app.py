# hyperflat command line: build a job from flags or a JSON file, run it, write the envelope
import argparse
import dataclasses
import logging
import sys
from pathlib import Path

import jsonschema

from commands import run
from ui_components.summary import format_summary
from util.connections import DEFAULT_NODES
from util.cr_solver import CONVERGED_RESIDUAL, ESCAPE_FACTOR, MAX_EVALUATIONS
from util.hyperbolic import DEFAULT_CLASSIFY_TOL, GeometryError
from util.jobs import COMMANDS, SPACES, TARGETS, JobSpec
from util.storage import output_dir, save_envelope

logger = logging.getLogger('hyperflat')

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_PRECONDITION = 3
EXIT_NOT_CONVERGED = 4

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def _pick(ns: argparse.Namespace, *names: str, rename: dict | None = None) -> dict:
    """Flags that were given, keyed by parameter name."""
    rename = rename or {}
    return {rename.get(n, n): getattr(ns, n) for n in names if getattr(ns, n, None) is not None}


def _add_element(p: argparse.ArgumentParser) -> None:
    p.add_argument('--preset', choices=['H', 'R'], help='H(s) translation or R(s) rotation')
    p.add_argument('--s', type=float, help='parameter of the preset')
    p.add_argument('--a', type=float, nargs=2, metavar=('RE', 'IM'), help='matrix entry a')
    p.add_argument('--b', type=float, nargs=2, metavar=('RE', 'IM'), help='matrix entry b')


def _element(ns) -> dict:
    return _pick(ns, 'preset', 's', 'a', 'b')


def _add_connection(p: argparse.ArgumentParser) -> None:
    p.add_argument('--connection', choices=['zero', 'constant', 'rot-loop', 'ptau'], help='connection preset')
    p.add_argument('--alpha', type=float)
    p.add_argument('--beta', type=float, nargs=2, metavar=('RE', 'IM'))
    p.add_argument('--scale-rate', type=float, dest='scale_rate')
    p.add_argument('--shift-rate', type=float, dest='shift_rate')
    p.add_argument('--tau', type=float)
    p.add_argument('--winding', type=int)
    p.add_argument('--seed', type=int)
    p.add_argument('--nodes', type=int, help=f'samples (default {DEFAULT_NODES})')
    p.add_argument('--domain', choices=['interval', 'circle'])
    p.add_argument('--csv', help='sampled connection file')


def _connection(ns) -> dict:
    return _pick(ns, 'connection', 'alpha', 'beta', 'scale_rate', 'shift_rate', 'tau', 'winding', 'seed', 'nodes',
                 'domain', 'csv', rename={'connection': 'preset'})


def _add_solve(p: argparse.ArgumentParser) -> None:
    p.add_argument('--shape', required=True, choices=['rectangle', 'cylinder', 'torus', 'disc', 'half_disc'])
    p.add_argument('--resolution', type=int, nargs=2, required=True, metavar=('NS', 'NT'))
    p.add_argument('--length', type=float)
    p.add_argument('--case', choices=['constant', 'manufactured', 'germ-manufactured', 'schwarz-pick'])
    p.add_argument('--rho', type=float)
    p.add_argument('--tol', type=float, help=f'converged residual (default {CONVERGED_RESIDUAL})')
    p.add_argument('--max-evaluations', type=int, dest='max_evaluations', help=f'default {MAX_EVALUATIONS}')
    p.add_argument('--escape-factor', type=float, dest='escape_factor', help=f'default {ESCAPE_FACTOR}')


def _solve(ns) -> dict:
    return {'domain': _pick(ns, 'shape', 'resolution', 'length'),
            **_pick(ns, 'case', 'rho', 'tol', 'max_evaluations', 'escape_factor')}


def _with_connection(ns, **extra) -> dict:
    out = {'connection': _connection(ns), **extra}
    return {k: v for k, v in out.items() if v is not None}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='hyperflat', description='Flat PU(1,1) connections and boundary data.')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG')
    parser.add_argument('--job', type=Path, help='JSON job file (replaces the subcommand)')
    parser.add_argument('--out', help='output directory (default $HYPERFLAT_OUTPUT_DIR or data/results)')
    parser.add_argument('--strict', action='store_true', help='exit 4 when a solve does not converge')
    sub = parser.add_subparsers(dest='command')

    p = sub.add_parser('classify', help='elliptic, parabolic or hyperbolic')
    _add_element(p)
    p.add_argument('--tol', type=float, help=f'default {DEFAULT_CLASSIFY_TOL}')
    p.set_defaults(params=lambda ns: {'element': _element(ns), **_pick(ns, 'tol')})

    p = sub.add_parser('transport', help='parallel transport of a sampled connection')
    _add_connection(p)
    p.add_argument('--t0', type=float)
    p.add_argument('--t1', type=float)
    p.add_argument('--substeps', type=int)
    p.set_defaults(params=lambda ns: _with_connection(ns, **_pick(ns, 't0', 't1', 'substeps')))

    p = sub.add_parser('holonomy', help='lifted holonomy of a loop')
    _add_connection(p)
    p.add_argument('--substeps', type=int)
    p.set_defaults(params=lambda ns: _with_connection(ns, **_pick(ns, 'substeps')))

    p = sub.add_parser('rotnum', help='rotation number and lifted shift')
    _add_connection(p)
    p.add_argument('--point', type=float, help='lifted boundary point')
    p.set_defaults(params=lambda ns: _with_connection(ns, **_pick(ns, 'point')))

    p = sub.add_parser('gauge', help='gauge transform and covariance check')
    _add_connection(p)
    p.add_argument('--gauge', choices=['trivializing', 'constant'])
    p.add_argument('--preset', choices=['H', 'R'])
    p.add_argument('--s', type=float)
    p.set_defaults(params=lambda ns: _with_connection(ns, **_pick(ns, 'gauge'),
                                                      **({'element': _pick(ns, 'preset', 's')} if ns.preset else {})))

    p = sub.add_parser('check-space', help='membership in a space of boundary data')
    p.add_argument('--space', required=True, choices=SPACES)
    _add_connection(p)
    p.add_argument('--lam0', type=float)
    p.add_argument('--lam1', type=float)
    p.add_argument('--labels', type=float, nargs='+')
    p.add_argument('--d', type=int)
    p.set_defaults(params=lambda ns: {
        **({'connection': _connection(ns)} if ns.connection or ns.csv else {}),
        **_pick(ns, 'space', 'lam0', 'lam1', 'labels', 'tau', 'd', 'seed')})

    p = sub.add_parser('construct', help='construct a point of a space')
    p.add_argument('--target', required=True, choices=TARGETS)
    for name, kind in (('tau', float), ('d', int), ('seed', int), ('nodes', int), ('lam0', float), ('lam1', float)):
        p.add_argument(f'--{name}', type=kind)
    p.set_defaults(params=lambda ns: _pick(ns, 'target', 'tau', 'd', 'seed', 'nodes', 'lam0', 'lam1'))

    p = sub.add_parser('sheet-index', help='sheet index under deck shifts and end rotation')
    for name, kind in (('tau', float), ('d', int), ('seed', int), ('turns', int), ('theta', float)):
        p.add_argument(f'--{name}', type=kind)
    p.set_defaults(params=lambda ns: _pick(ns, 'tau', 'd', 'seed', 'turns', 'theta'))

    p = sub.add_parser('schwarz-integral', help='Schwarz integral on the half-plane')
    p.add_argument('--gamma', choices=['bump', 'lorentzian'])
    p.add_argument('--z', type=float, nargs=2, required=True, metavar=('RE', 'IM'))
    for name in ('center', 'width', 'radius'):
        p.add_argument(f'--{name}', type=float)
    p.set_defaults(params=lambda ns: _pick(ns, 'gamma', 'z', 'center', 'width', 'radius'))

    for name, text in (('solve-cr', 'solve a preset CR problem'), ('energy', 'energies of a solved preset problem')):
        p = sub.add_parser(name, help=text)
        _add_solve(p)
        p.set_defaults(params=_solve)

    p = sub.add_parser('beta-form', help='boundary one-form along a germ family')
    p.add_argument('--family', choices=['constant', 'transported'])
    p.add_argument('--preset', choices=['H', 'R'])
    p.add_argument('--s', type=float)
    p.add_argument('--distances', type=float, nargs='+')
    p.add_argument('--b', type=float)
    p.add_argument('--shift', type=float)
    p.set_defaults(params=lambda ns: {**_pick(ns, 'family', 'distances', 'b', 'shift'),
                                      **({'element': _pick(ns, 'preset', 's')} if ns.preset else {})})

    p = sub.add_parser('schwarz-pick', help='Schwarz-Pick ratio of grid solutions')
    p.add_argument('--shape', choices=['disc', 'half_disc'])
    p.add_argument('--resolution', type=int)
    p.add_argument('--rho', type=float)
    p.set_defaults(params=lambda ns: _pick(ns, 'shape', 'resolution', 'rho'))

    p = sub.add_parser('cyl-bound', help='length bound L(tau)')
    p.add_argument('--tau', type=float, required=True)
    p.set_defaults(params=lambda ns: _pick(ns, 'tau'))

    p = sub.add_parser('cyl-experiment', help='seeded solves on a long cylinder')
    for name in ('tau', 'length', 'length_factor'):
        p.add_argument(f'--{name.replace("_", "-")}', type=float, dest=name)
    p.add_argument('--seeds', type=int)
    p.add_argument('--resolution', type=int, nargs=2, metavar=('NS', 'NT'))
    p.set_defaults(params=lambda ns: _pick(ns, 'tau', 'length', 'length_factor', 'seeds', 'resolution'))

    p = sub.add_parser('plot', help='render an envelope payload as SVG')
    p.add_argument('envelope')
    p.add_argument('--output')
    p.set_defaults(params=lambda ns: _pick(ns, 'envelope', 'output'))

    assert set(sub.choices) == set(COMMANDS)
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def load_job(args: argparse.Namespace) -> JobSpec:
    """
    Build and validate the job from --job or from the subcommand flags.

    Raises:
        jsonschema.ValidationError: the job does not validate or cannot be read
    """
    if args.job is not None:
        try:
            text = args.job.read_text()
        except OSError as e:
            raise jsonschema.ValidationError(f'cannot read job file {args.job}: {e}') from e
        job = JobSpec.from_json(text)
    elif args.command:
        job = JobSpec.from_dict({'command': args.command, 'params': args.params(args)})
    else:
        raise jsonschema.ValidationError('give a subcommand or --job')
    return dataclasses.replace(job, out=args.out or job.out, strict=args.strict or job.strict)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        job = load_job(args)
    except jsonschema.ValidationError as e:
        logger.error('invalid job: %s', e.message)
        return EXIT_SCHEMA
    try:
        envelope = run(job)
    except GeometryError as e:
        logger.error('%s failed: %s', job.command, e)
        return EXIT_PRECONDITION
    save_envelope(envelope, output_dir(job.out))
    print(format_summary(envelope))
    if job.strict and envelope.diagnostics.get('converged') is False:
        logger.error('%s did not converge (status %s)', job.command, envelope.diagnostics.get('status'))
        return EXIT_NOT_CONVERGED
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
