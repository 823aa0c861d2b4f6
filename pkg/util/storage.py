# save/load result envelopes, grid maps and sampled connections (files)
import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd

from util.connections import PathConnection
from util.cr_solver import DomainSpec, GridMap
from util.hyperbolic import AffLieElement, LieElement, PreconditionError
from util.jobs import ResultEnvelope

logger = logging.getLogger(__name__)

# Default output directory for envelopes and grids
OUTPUT_ENV_VAR = 'HYPERFLAT_OUTPUT_DIR'
DEFAULT_OUTPUT_DIR = Path('data/results')

GRID_COLUMNS = ['s', 't', 're', 'im']
DISC_COLUMNS = ['t', 'alpha', 'beta_re', 'beta_im']
AFFINE_COLUMNS = ['t', 'scale_rate', 'shift_rate']


def output_dir(override: str | None = None) -> Path:
    """
    Resolve the output directory: explicit override, then the environment, then the default.

    Args:
        override: Directory given on the command line (optional)

    Returns:
        Path: Existing output directory
    """
    path = Path(override or os.environ.get(OUTPUT_ENV_VAR) or DEFAULT_OUTPUT_DIR)
    path.mkdir(parents=True, exist_ok=True)
    return path


def atomic_write_text(path: Path, text: str) -> Path:
    """
    Write text through a temp file in the target directory, then rename over the target.

    Args:
        path: Destination file
        text: Contents

    Returns:
        Path: The written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w') as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def save_envelope(envelope: ResultEnvelope, directory: Path, name: str | None = None) -> Path | None:
    """
    Save a result envelope as JSON.

    Args:
        envelope: Result to save
        directory: Output directory
        name: File stem (default: command and a prefix of the inputs hash)

    Returns:
        Path: Written file, or None if the write failed
    """
    stem = name or f'{envelope.command}-{envelope.inputs_hash[:12]}'
    try:
        path = atomic_write_text(Path(directory) / f'{stem}.json', envelope.to_json())
        logger.info('wrote %s', path)
        return path
    except OSError as e:
        logger.error('error saving envelope %s: %s', stem, e)
        return None


def load_envelope(path: Path) -> ResultEnvelope | None:
    """
    Load a previously saved envelope.

    Args:
        path: JSON file written by save_envelope

    Returns:
        ResultEnvelope: The envelope, or None if missing or unreadable
    """
    path = Path(path)
    if not path.exists():
        logger.error('envelope %s not found', path)
        return None
    try:
        return ResultEnvelope.from_json(path.read_text())
    except (json.JSONDecodeError, KeyError) as e:
        logger.error('error loading envelope %s: %s', path, e)
        return None


def list_envelopes(directory: Path) -> list:
    """
    List saved envelopes.

    Returns:
        list: One dict per envelope with file, command, inputs_hash and version
    """
    rows = []
    for file in sorted(Path(directory).glob('*.json')):
        envelope = load_envelope(file)
        if envelope is not None:
            rows.append({'file': file.name, 'command': envelope.command,
                         'inputs_hash': envelope.inputs_hash, 'version': envelope.version})
    return rows


def grid_to_frame(u: GridMap) -> pd.DataFrame:
    """Nodes of the domain as rows (s, t, re, im)."""
    s, t = u.domain.coordinates()
    ss, tt = np.meshgrid(s, t, indexing='ij')
    mask = u.domain.mask()
    return pd.DataFrame({'s': ss[mask], 't': tt[mask], 're': u.values[mask].real, 'im': u.values[mask].imag},
                        columns=GRID_COLUMNS)


def save_grid_csv(u: GridMap, path: Path) -> Path:
    return atomic_write_text(Path(path), grid_to_frame(u).to_csv(index=False, float_format='%.17g'))


def load_grid_csv(path: Path, model: str, domain: DomainSpec) -> GridMap:
    """
    Rebuild a GridMap from its CSV rows; nodes are matched by their (s, t) coordinates.

    Raises:
        PreconditionError: columns missing or nodes not on the domain's grid
    """
    df = pd.read_csv(path)
    if list(df.columns) != GRID_COLUMNS:
        raise PreconditionError(f'grid CSV needs columns {GRID_COLUMNS}, got {list(df.columns)}')
    s, t = domain.coordinates()
    i = np.searchsorted(s, df['s'].to_numpy() - 1e-12)
    j = np.searchsorted(t, df['t'].to_numpy() - 1e-12)
    if np.any(i >= s.size) or np.any(j >= t.size) or not (
            np.allclose(s[i], df['s']) and np.allclose(t[j], df['t'])):
        raise PreconditionError('grid CSV nodes do not lie on the domain grid')
    values = np.full(domain.resolution, np.nan + 0j)
    values[i, j] = df['re'].to_numpy() + 1j * df['im'].to_numpy()
    return GridMap(values, model, domain)


def load_connection_csv(path: Path, domain: str = 'interval') -> PathConnection:
    """
    Read a sampled connection: columns t, alpha, beta_re, beta_im (disc) or t, scale_rate, shift_rate (affine).

    Rows must be the uniform nodes of the chosen domain, in order.
    """
    df = pd.read_csv(path)
    if set(DISC_COLUMNS) <= set(df.columns):
        samples = [LieElement(r.alpha, complex(r.beta_re, r.beta_im)) for r in df.itertuples()]
    elif set(AFFINE_COLUMNS) <= set(df.columns):
        samples = [AffLieElement(r.scale_rate, r.shift_rate) for r in df.itertuples()]
    else:
        raise PreconditionError(f'connection CSV needs columns {DISC_COLUMNS} or {AFFINE_COLUMNS}')
    connection = PathConnection(tuple(samples), domain)
    if not np.allclose(df['t'].to_numpy(), connection.node_times(), atol=1e-9):
        raise PreconditionError('connection CSV times are not the uniform nodes of the domain')
    logger.info('loaded %d connection samples from %s', connection.n, path)
    return connection


def connection_to_frame(A: PathConnection) -> pd.DataFrame:
    t = A.node_times()
    if A.is_affine:
        return pd.DataFrame({'t': t, 'scale_rate': [a.scale_rate for a in A.samples],
                             'shift_rate': [a.shift_rate for a in A.samples]}, columns=AFFINE_COLUMNS)
    beta = np.array([a.beta for a in A.samples], dtype=complex)
    return pd.DataFrame({'t': t, 'alpha': [a.alpha for a in A.samples], 'beta_re': beta.real, 'beta_im': beta.imag},
                        columns=DISC_COLUMNS)


def save_connection_csv(A: PathConnection, path: Path) -> Path:
    path = atomic_write_text(Path(path), connection_to_frame(A).to_csv(index=False, float_format='%.17g'))
    logger.info('wrote %d connection samples to %s', A.n, path)
    return path
