# energies of grid maps, the induced forms omega_A / theta_A and the boundary correction beta_A
"""
Energies of a GridMap u for a connection A, with the half-norm convention

    ||L||^2 = (|L d/ds|^2 + |L d/dt|^2) / (2 rho(w)^2),

rho = im(w) on W and rho = 1 - |w|^2 on B.  For a holomorphic u this is
|u'|^2 / rho^2, the pullback of the area form.

The symplectic part of the topological energy is a sum over boundary edges of
theta_A = theta - H_{A(d/ds)} ds - H_{A(d/dt)} dt, i.e. a discrete Stokes rule:
theta is integrated exactly along the geodesic (disc) or straight chord
(half-plane) between the two node values, the Hamiltonian terms by the
trapezoid rule.  Interior edges never enter, so compactly supported
perturbations leave it unchanged.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from util.connections import GridConnection, PathConnection, right_log_derivative
from util.cr_solver import GERM, LINE, BoundaryCondition, GridMap, cell_fields, pullback_connection
from util.geo import germ_frame, germ_point
from util.hyperbolic import (
    AffLieElement, BoundaryPoint, LieElement, PreconditionError, disc_hamiltonian, halfplane_hamiltonian,
    log_moebius,
)

logger = logging.getLogger(__name__)

GAUSS_NODES = 8
GERM_STEP = 1e-5

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(GAUSS_NODES)


@dataclass(frozen=True)
class EnergyReport:
    geom: float
    top: float
    boundary_term: float
    symplectic: float
    norm_convention: str = 'half'

    def as_dict(self) -> dict:
        return asdict(self)


def _rho(model: str, w):
    return w.imag if model == 'halfplane' else 1.0 - np.abs(w) ** 2


def _grid_connection(u: GridMap, connection) -> GridConnection:
    if isinstance(connection, GridConnection):
        if connection.model != u.model or connection.shape != u.domain.resolution:
            raise PreconditionError('connection does not match the grid map')
        return connection
    if connection is None or isinstance(connection, PathConnection):
        return pullback_connection(connection, u.domain, u.model)
    raise PreconditionError(f'unsupported connection type {type(connection).__name__}')


def _cell_terms(u: GridMap, connection):
    conn = _grid_connection(u, connection)
    cells = u.domain.cells()
    u_s, u_t, u_c = cells.derivatives(u.values)
    x_s, x_t = cell_fields(conn, cells, u_c)
    return u_s - x_s, u_t - x_t, _rho(u.model, u_c), cells


def energy_geom(u: GridMap, connection=None) -> float:
    """Sum over cells of area * ||Du - X_A||^2 at the cell center."""
    a, b, rho, _ = _cell_terms(u, connection)
    h_s, h_t = u.domain.spacing
    density = 0.5 * (np.abs(a) ** 2 + np.abs(b) ** 2) / rho ** 2
    return float(np.sum(density) * h_s * h_t)


def omega_a_density(u: GridMap, connection=None) -> np.ndarray:
    """Cellwise v*omega_A(d/ds, d/dt) = omega(u_s - X_s, u_t - X_t) for a flat A.

    energy density minus this equals |r|^2 / (2 rho^2) with r the CR residual.
    """
    a, b, rho, _ = _cell_terms(u, connection)
    return (np.conj(a) * b).imag / rho ** 2


def theta(model: str, w, dw):
    """The primitive of the area form: dx/y on W, im(conj(w) dw) / (2(1-|w|^2)) on B."""
    w, dw = np.asarray(w, dtype=complex), np.asarray(dw, dtype=complex)
    if model == 'halfplane':
        return dw.real / w.imag
    return (np.conj(w) * dw).imag / (2.0 * (1.0 - np.abs(w) ** 2))


def _hamiltonian(gamma, w):
    if isinstance(gamma, AffLieElement):
        return halfplane_hamiltonian(gamma.scale_rate, gamma.shift_rate, w)
    return disc_hamiltonian(gamma.alpha, gamma.beta, w)


def theta_a(model: str, w, dw, ds: float, dt: float, gamma_s=None, gamma_t=None):
    """theta_A(v) for a tangent vector (ds, dt, dw) of S x M at (z, w)."""
    out = theta(model, w, dw)
    for gamma, d in ((gamma_s, ds), (gamma_t, dt)):
        if gamma is not None:
            out = out - _hamiltonian(gamma, w) * d
    return out


def chord_theta_halfplane(p, q):
    """Integral of dx/y along the straight segment from p to q in W."""
    p, q = np.asarray(p, dtype=complex), np.asarray(q, dtype=complex)
    dx, r = (q - p).real, (q - p).imag / p.imag
    small = np.abs(r) < 1e-8
    safe = np.where(small, 1.0, r)
    factor = np.where(small, 1.0 - r / 2 + r * r / 3, np.log1p(safe) / safe)
    return dx * factor / p.imag


def geodesic_theta_disc(p, q):
    """Integral of theta_B along the hyperbolic geodesic from p to q (Gauss-Legendre)."""
    p, q = np.atleast_1d(np.asarray(p, dtype=complex)), np.atleast_1d(np.asarray(q, dtype=complex))
    moved = (q - p) / (1 - np.conj(p) * q)
    radius = np.abs(moved)
    direction = np.where(radius > 0, moved / np.where(radius > 0, radius, 1.0), 1.0)
    rho = (radius[:, None] / 2) * (_GAUSS_X[None, :] + 1)
    z = rho * direction[:, None]
    denom = 1 + np.conj(p)[:, None] * z
    w = (z + p[:, None]) / denom
    dw = direction[:, None] * (1 - np.abs(p[:, None]) ** 2) / denom ** 2
    integrand = theta('disc', w, dw)
    return (integrand @ _GAUSS_W) * radius / 2


def boundary_edges(u: GridMap) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Directed boundary edges (P, Q, is_s_direction, signed parameter step), counterclockwise per cell."""
    cells = u.domain.cells()
    h_s, h_t = u.domain.spacing
    c00, c10, c01, c11 = cells.corners()
    n = cells.size
    start = np.concatenate([c00, c10, c11, c01])
    end = np.concatenate([c10, c11, c01, c00])
    is_s = np.concatenate([np.ones(n, bool), np.zeros(n, bool), np.ones(n, bool), np.zeros(n, bool)])
    step = np.concatenate([np.full(n, h_s), np.full(n, h_t), np.full(n, -h_s), np.full(n, -h_t)])
    size = u.values.size
    key = np.minimum(start, end) * size + np.maximum(start, end)
    _, inverse, counts = np.unique(key, return_inverse=True, return_counts=True)
    once = counts[inverse] == 1
    return start[once], end[once], is_s[once], step[once]


def _node_hamiltonian(conn: GridConnection, nodes: np.ndarray, is_s: np.ndarray, w: np.ndarray) -> np.ndarray:
    out = np.empty(nodes.size)
    for flag, coef in ((True, conn.s_coef), (False, conn.t_coef)):
        sel = is_s == flag
        p, q = (c.ravel()[nodes[sel]] for c in coef)
        if conn.model == 'disc':
            out[sel] = disc_hamiltonian(p, q, w[sel])
        else:
            out[sel] = halfplane_hamiltonian(p, q, w[sel])
    return out


def germ_transport_one_form(angles, anchors) -> list[LieElement]:
    """Discrete alpha along a chain of germs: log(K_{k+1} K_k^-1) for consecutive germ frames."""
    frames = [germ_frame(BoundaryPoint(float(a)), complex(p)) for a, p in zip(angles, anchors)]
    return [log_moebius(q.compose(p.inverse())) for p, q in zip(frames[:-1], frames[1:])]


def germ_translation(angle: float, anchor: complex) -> LieElement:
    """Generator of translation along the germ's geodesic; its Hamiltonian vanishes on that geodesic."""
    return LieElement(0.0, 1.0).adjoint(germ_frame(BoundaryPoint(angle), anchor))


def _edge_alpha(bc: BoundaryCondition, u: GridMap, p: int, q: int):
    kind = bc.kind.ravel()
    if kind[p] == kind[q] == GERM:
        angle, anchor = bc.germ_angle.ravel(), bc.germ_anchor.ravel()
        return germ_transport_one_form([angle[p], angle[q]], [anchor[p], anchor[q]])[0]
    if kind[p] == kind[q] == LINE and u.model == 'halfplane':
        lam = bc.lam.ravel()
        return AffLieElement(0.0, float(lam[q] - lam[p]))
    return None


def energy_top(u: GridMap, connection=None, bc: BoundaryCondition | None = None) -> EnergyReport:
    """Topological energy E_top = int v*omega_A - int_{dS} v*beta_A with its ingredients."""
    conn = _grid_connection(u, connection)
    start, end, is_s, step = boundary_edges(u)
    flat = u.values.ravel()
    w_p, w_q = flat[start], flat[end]
    h_p = _node_hamiltonian(conn, start, is_s, w_p)
    h_q = _node_hamiltonian(conn, end, is_s, w_q)
    connection_part = 0.5 * (h_p + h_q) * step
    if u.model == 'disc':
        chords = geodesic_theta_disc(w_p, w_q) if start.size else np.zeros(0)
    else:
        chords = chord_theta_halfplane(w_p, w_q)
    symplectic = float(np.sum(chords - connection_part))

    boundary_term = 0.0
    if bc is not None:
        if bc.domain != u.domain:
            raise PreconditionError('boundary conditions were built for a different domain')
        for k in range(start.size):
            alpha = _edge_alpha(bc, u, start[k], end[k])
            if alpha is None:
                continue
            h_alpha = 0.5 * (_hamiltonian(alpha, w_p[k]) + _hamiltonian(alpha, w_q[k]))
            boundary_term += float(h_alpha - connection_part[k])
    report = EnergyReport(energy_geom(u, conn), symplectic - boundary_term, boundary_term, symplectic)
    logger.debug('energy on %s grid: %s', u.domain.shape, report)
    return report


def germ_velocity(germ_family: Callable[[float], tuple[float, complex]], b: float,
                  step: float = GERM_STEP) -> LieElement:
    """Right log-derivative in b of the germ frames of ``germ_family``."""
    angle, anchor = germ_family(b)
    minus, plus = (germ_frame(BoundaryPoint(a), p) for a, p in (germ_family(b - step), germ_family(b + step)))
    return right_log_derivative(minus, plus, germ_frame(BoundaryPoint(angle), anchor), 2 * step)


def beta_form(gamma: LieElement, germ_family: Callable[[float], tuple[float, complex]], b: float, distances,
              alpha: LieElement | None = None, step: float = GERM_STEP) -> np.ndarray:
    """beta_A(xi) = H_alpha - H_{A(xi)} at points of the germ at boundary parameter b.

    ``germ_family(b)`` returns (endpoint angle, anchor).  Any alpha moving the
    germs along the family is admissible; the default is ``germ_velocity``.
    """
    angle, anchor = germ_family(b)
    alpha = alpha if alpha is not None else germ_velocity(germ_family, b, step)
    w = germ_point(angle, anchor, np.asarray(distances, dtype=float))
    return _hamiltonian(alpha, w) - _hamiltonian(gamma, w)
