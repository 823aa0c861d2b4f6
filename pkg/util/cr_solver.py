# discrete Cauchy-Riemann boundary value problems solved by sparse least squares
"""
Grids, boundary conditions and the solver for (Du - X_A)^{0,1} = 0.

The discrete operator is the box scheme: on every grid cell the derivatives
are averages of the two opposite edge differences and X_A is evaluated at the
mean of the four corner values.  Each cell contributes one complex residual

    r = (u_s - X_s(u_c)) + i (u_t - X_t(u_c)).

Boundary nodes carry one real unknown: im(u) on a vertical line re(u) = lam
(half-plane model) or arclength along a geodesic germ (disc model).  A pin adds
one weighted residual on im(u), or on im of the Cayley image of u in the disc
model; two pins on adjacent nodes remove the imaginary-constant and
checkerboard null directions of the A = 0 problem.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares
from scipy.sparse import coo_matrix

from util.connections import GridConnection, PathConnection, hyperbolic_generator, manufactured_rotation_loop
from util.geo import germ_coordinate, germ_point
from util.hyperbolic import (
    DomainError, PreconditionError, cayley_inverse, disc_field, halfplane_angle, halfplane_field,
)
from util.schwarz import cylinder_bound

logger = logging.getLogger(__name__)

SHAPES = ('rectangle', 'cylinder', 'torus', 'disc', 'half_disc')
MODELS = ('halfplane', 'disc')
MIN_RESOLUTION = 8
CONVERGED_RESIDUAL = 1e-8
ESCAPE_FACTOR = 10.0
MAX_EVALUATIONS = 400
CYLINDER_NT = 32
PIN_WEIGHT = 1.0

FREE, LINE, GERM, FIXED = 0, 1, 2, 3


@dataclass(frozen=True)
class DomainSpec:
    shape: str
    resolution: tuple
    length: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'resolution', tuple(int(n) for n in self.resolution))
        if self.shape not in SHAPES:
            raise PreconditionError(f'unknown domain shape {self.shape!r}; expected one of {SHAPES}')
        if len(self.resolution) != 2 or min(self.resolution) < MIN_RESOLUTION:
            raise PreconditionError(f'resolution must be at least ({MIN_RESOLUTION}, {MIN_RESOLUTION})')
        if not self.length > 0:
            raise PreconditionError('domain length must be positive')

    @property
    def periodic_s(self) -> bool:
        return self.shape == 'torus'

    @property
    def periodic_t(self) -> bool:
        return self.shape in ('cylinder', 'torus')

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        n_s, n_t = self.resolution
        if self.shape == 'rectangle':
            return np.linspace(0, self.length, n_s), np.linspace(0, 1, n_t)
        if self.shape == 'cylinder':
            return np.linspace(0, self.length, n_s), np.arange(n_t) / n_t
        if self.shape == 'torus':
            return np.arange(n_s) * self.length / n_s, np.arange(n_t) / n_t
        if self.shape == 'disc':
            return np.linspace(-1, 1, n_s), np.linspace(-1, 1, n_t)
        return np.linspace(0, 1, n_s), np.linspace(-1, 1, n_t)

    @property
    def spacing(self) -> tuple[float, float]:
        n_s, n_t = self.resolution
        s, t = self.coordinates()
        h_s = self.length / n_s if self.periodic_s else s[1] - s[0]
        h_t = 1.0 / n_t if self.periodic_t else t[1] - t[0]
        return float(h_s), float(h_t)

    @property
    def h(self) -> float:
        return max(self.spacing)

    def points(self) -> np.ndarray:
        s, t = self.coordinates()
        return s[:, None] + 1j * t[None, :]

    def _raw_mask(self) -> np.ndarray:
        z = self.points()
        if self.shape == 'disc':
            return np.abs(z) < 1 - 1e-12
        if self.shape == 'half_disc':
            return (np.abs(z) < 1 - 1e-12) & (z.real >= 0)
        return np.ones(self.resolution, dtype=bool)

    def cells(self) -> 'Cells':
        n_s, n_t = self.resolution
        raw = self._raw_mask()
        i = np.arange(n_s if self.periodic_s else n_s - 1)
        j = np.arange(n_t if self.periodic_t else n_t - 1)
        i0, j0 = (a.ravel() for a in np.meshgrid(i, j, indexing='ij'))
        i1, j1 = (i0 + 1) % n_s, (j0 + 1) % n_t
        keep = raw[i0, j0] & raw[i1, j0] & raw[i0, j1] & raw[i1, j1]
        return Cells(self, i0[keep], j0[keep], i1[keep], j1[keep])

    def mask(self) -> np.ndarray:
        """Nodes that belong to at least one active cell."""
        return self.cells().node_counts() > 0

    def boundary(self) -> np.ndarray:
        """Nodes of the parameter domain's boundary (fewer than four adjacent cells)."""
        counts = self.cells().node_counts()
        return (counts > 0) & (counts < 4)


@dataclass(frozen=True, eq=False)
class Cells:
    domain: DomainSpec
    i0: np.ndarray
    j0: np.ndarray
    i1: np.ndarray
    j1: np.ndarray

    @property
    def size(self) -> int:
        return self.i0.size

    def corners(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Flat node indices of the corners 00, 10, 01, 11."""
        n_t = self.domain.resolution[1]
        return (self.i0 * n_t + self.j0, self.i1 * n_t + self.j0,
                self.i0 * n_t + self.j1, self.i1 * n_t + self.j1)

    def node_counts(self) -> np.ndarray:
        counts = np.zeros(self.domain.resolution[0] * self.domain.resolution[1], dtype=int)
        for c in self.corners():
            np.add.at(counts, c, 1)
        return counts.reshape(self.domain.resolution)

    def centers(self) -> np.ndarray:
        s, t = self.domain.coordinates()
        h_s, h_t = self.domain.spacing
        return (s[self.i0] + h_s / 2) + 1j * (t[self.j0] + h_t / 2)

    def average(self, values: np.ndarray) -> np.ndarray:
        flat = np.asarray(values).ravel()
        return sum(flat[c] for c in self.corners()) / 4.0

    def derivatives(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(u_s, u_t, u_center) on every cell."""
        h_s, h_t = self.domain.spacing
        flat = np.asarray(values).ravel()
        c00, c10, c01, c11 = (flat[c] for c in self.corners())
        u_s = ((c10 - c00) + (c11 - c01)) / (2 * h_s)
        u_t = ((c01 - c00) + (c11 - c10)) / (2 * h_t)
        return u_s, u_t, (c00 + c10 + c01 + c11) / 4.0


@dataclass(eq=False)
class BoundaryCondition:
    """Per-node constraint kinds plus line/germ data and optional pins."""
    domain: DomainSpec
    kind: np.ndarray = None
    lam: np.ndarray = None
    germ_angle: np.ndarray = None
    germ_anchor: np.ndarray = None
    fixed: np.ndarray = None
    pins: list = field(default_factory=list)

    def __post_init__(self):
        shape = self.domain.resolution
        if self.kind is None:
            self.kind = np.full(shape, FREE, dtype=np.int8)
        if self.lam is None:
            self.lam = np.zeros(shape)
        if self.germ_angle is None:
            self.germ_angle = np.zeros(shape)
        if self.germ_anchor is None:
            self.germ_anchor = np.zeros(shape, dtype=complex)
        if self.fixed is None:
            self.fixed = np.zeros(shape, dtype=complex)

    @property
    def model(self) -> str | None:
        kinds = set(np.unique(self.kind).tolist()) - {FREE, FIXED}
        if kinds == {LINE}:
            return 'halfplane'
        if kinds == {GERM}:
            return 'disc'
        if not kinds:
            return None
        raise PreconditionError('vertical-line and germ conditions cannot be mixed')

    def set_lines(self, where: np.ndarray, lam: np.ndarray) -> 'BoundaryCondition':
        self.kind[where] = LINE
        self.lam[where] = np.broadcast_to(lam, self.kind.shape)[where]
        return self

    def set_germs(self, where: np.ndarray, angle: np.ndarray, anchor: np.ndarray) -> 'BoundaryCondition':
        if np.any(np.abs(np.broadcast_to(anchor, self.kind.shape)[where]) >= 1):
            raise DomainError('germ anchors must lie in the open disc')
        self.kind[where] = GERM
        self.germ_angle[where] = np.broadcast_to(angle, self.kind.shape)[where]
        self.germ_anchor[where] = np.broadcast_to(anchor, self.kind.shape)[where]
        return self

    def set_fixed(self, where: np.ndarray, values: np.ndarray) -> 'BoundaryCondition':
        self.kind[where] = FIXED
        self.fixed[where] = np.broadcast_to(values, self.kind.shape)[where]
        return self

    def pin(self, node: tuple[int, int], value: complex) -> 'BoundaryCondition':
        self.pins.append((tuple(node), complex(value)))
        return self


def vertical_lines(domain: DomainSpec, lam_fn) -> BoundaryCondition:
    """re(u) = lam_fn(z) on every boundary node."""
    where = domain.boundary()
    return BoundaryCondition(domain).set_lines(where, lam_fn(domain.points()))


def lines_from_map(domain: DomainSpec, u_exact) -> BoundaryCondition:
    """Boundary lines read off a known map, with two adjacent interior pins."""
    bc = vertical_lines(domain, lambda z: np.real(u_exact(z)))
    return pin_pair(bc, u_exact)


def germs_from_lines(domain: DomainSpec, lam_fn) -> BoundaryCondition:
    """Disc germs whose geodesics are the Cayley images of the vertical lines re(w) = lam."""
    where = domain.boundary()
    lam = np.real(lam_fn(domain.points()))
    angle = halfplane_angle(lam)
    anchor = cayley_inverse(lam + 1j)
    return BoundaryCondition(domain).set_germs(where, angle, anchor)


def pin_pair(bc: BoundaryCondition, u_exact) -> BoundaryCondition:
    """Pin two adjacent nodes near the middle of the domain to a known map."""
    mask = bc.domain.mask() & ~bc.domain.boundary()
    nodes = np.argwhere(mask)
    if len(nodes) < 2:
        raise PreconditionError('domain too small to pin two interior nodes')
    center = np.array(bc.domain.resolution) // 2
    first = nodes[np.argmin(np.sum((nodes - center) ** 2, axis=1))]
    second = (first[0] + 1, first[1]) if mask[first[0] + 1, first[1]] else (first[0] - 1, first[1])
    z = bc.domain.points()
    for node in (tuple(first), tuple(second)):
        bc.pin(node, complex(u_exact(z[node])))
    return bc


@dataclass(eq=False)
class GridMap:
    values: np.ndarray
    model: str
    domain: DomainSpec

    def __post_init__(self):
        if self.model not in MODELS:
            raise PreconditionError(f'unknown model {self.model!r}')
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.domain.resolution:
            raise PreconditionError('grid values do not match the domain resolution')

    def margin(self) -> float:
        """Distance to the edge of the model domain: 1-max|w| (disc) or min im(w) (half-plane)."""
        v = self.values[self.domain.mask()]
        return float(1 - np.max(np.abs(v))) if self.model == 'disc' else float(np.min(v.imag))

    def in_domain(self) -> bool:
        return self.margin() > 0


@dataclass(frozen=True)
class SolveOutcome:
    status: str
    residual: float
    iterations: int
    escaped: bool
    min_margin: float
    message: str = ''

    @property
    def converged(self) -> bool:
        return self.status == 'converged-interior'


def pullback_connection(A: PathConnection | None, domain: DomainSpec, model: str) -> GridConnection:
    """A = a_t dt on the grid (A(d/ds) = 0); None gives the zero connection."""
    zero = GridConnection.zero(model, domain.resolution)
    if A is None:
        return zero
    if A.is_affine != (model == 'halfplane'):
        raise PreconditionError(f'a {"affine" if A.is_affine else "su(1,1)"} connection cannot act on the {model} model')
    _, t = domain.coordinates()
    row = [A.value_at(float(tj)) for tj in t]
    if model == 'disc':
        p, q = np.array([g.alpha for g in row]), np.array([g.beta for g in row], dtype=complex)
    else:
        p, q = np.array([g.scale_rate for g in row]), np.array([g.shift_rate for g in row])
    n_s = domain.resolution[0]
    return GridConnection(model, zero.s_coef, (np.tile(p, (n_s, 1)), np.tile(q, (n_s, 1))))


def _field(model: str, coef, w):
    p, q = coef
    return disc_field(p, q, w) if model == 'disc' else halfplane_field(p, q, w)


def cell_fields(conn: GridConnection, cells: Cells, w_center: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """X_{A(d/ds)} and X_{A(d/dt)} at cell centers, coefficients averaged from the corners."""
    s_coef = tuple(cells.average(c) for c in conn.s_coef)
    t_coef = tuple(cells.average(c) for c in conn.t_coef)
    return _field(conn.model, s_coef, w_center), _field(conn.model, t_coef, w_center)


def cr_residual(u: GridMap, conn: GridConnection) -> np.ndarray:
    """Complex cell residuals (u_s - X_s) + i(u_t - X_t)."""
    cells = u.domain.cells()
    u_s, u_t, u_c = cells.derivatives(u.values)
    x_s, x_t = cell_fields(conn, cells, u_c)
    return (u_s - x_s) + 1j * (u_t - x_t)


class _Layout:
    """Map between the unknown vector and grid values."""

    def __init__(self, domain: DomainSpec, bc: BoundaryCondition, model: str):
        self.domain, self.bc, self.model = domain, bc, model
        mask = domain.mask().ravel()
        kind = bc.kind.ravel()
        self.free = np.flatnonzero(mask & (kind == FREE))
        self.line = np.flatnonzero(mask & (kind == LINE))
        self.germ = np.flatnonzero(mask & (kind == GERM))
        self.fixed = np.flatnonzero(mask & (kind == FIXED))
        self.mask = mask
        nf = self.free.size
        self.size = 2 * nf + self.line.size + self.germ.size
        # first and second unknown column per node (-1 where absent)
        self.col_a = np.full(mask.size, -1)
        self.col_b = np.full(mask.size, -1)
        self.col_a[self.free] = np.arange(nf)
        self.col_b[self.free] = nf + np.arange(nf)
        self.col_a[self.line] = 2 * nf + np.arange(self.line.size)
        self.col_a[self.germ] = 2 * nf + self.line.size + np.arange(self.germ.size)
        self.lam = bc.lam.ravel()[self.line]
        self.angle = bc.germ_angle.ravel()[self.germ]
        self.anchor = bc.germ_anchor.ravel()[self.germ]
        self.fixed_values = bc.fixed.ravel()[self.fixed]

    def values(self, x: np.ndarray) -> np.ndarray:
        nf, nl = self.free.size, self.line.size
        out = np.full(self.mask.size, np.nan + 0j)
        out[self.free] = x[:nf] + 1j * x[nf:2 * nf]
        out[self.line] = self.lam + 1j * x[2 * nf:2 * nf + nl]
        out[self.germ] = germ_point(self.angle, self.anchor, x[2 * nf + nl:])
        out[self.fixed] = self.fixed_values
        return out.reshape(self.domain.resolution)

    def unknowns(self, values: np.ndarray) -> np.ndarray:
        flat = np.asarray(values, dtype=complex).ravel()
        return np.concatenate([flat[self.free].real, flat[self.free].imag, flat[self.line].imag,
                               germ_coordinate(self.angle, self.anchor, flat[self.germ])])

    def sparsity(self, cells: Cells, n_pins: int, pin_nodes: list[int]):
        rows, cols = [], []
        n = cells.size
        for corner in cells.corners():
            for col in (self.col_a[corner], self.col_b[corner]):
                ok = col >= 0
                for offset in (0, n):
                    rows.append(offset + np.flatnonzero(ok))
                    cols.append(col[ok])
        for k, node in enumerate(pin_nodes):
            for col in (self.col_a[node], self.col_b[node]):
                if col >= 0:
                    rows.append(np.array([2 * n + k]))
                    cols.append(np.array([col]))
        rows, cols = np.concatenate(rows), np.concatenate(cols)
        shape = (2 * n + n_pins, self.size)
        return coo_matrix((np.ones(rows.size), (rows, cols)), shape=shape).tocsr()


def _initial_values(domain: DomainSpec, bc: BoundaryCondition, model: str, initial) -> np.ndarray:
    if isinstance(initial, GridMap):
        return initial.values
    if initial is None:
        if model == 'disc':
            anchors = bc.germ_anchor[bc.kind == GERM]
            initial = complex(np.mean(anchors)) if anchors.size else 0j
        else:
            initial = 1j
    return np.full(domain.resolution, complex(initial))


def _margin(values: np.ndarray, mask: np.ndarray, model: str, im_scale: float) -> float:
    v = values.ravel()[mask]
    if model == 'disc':
        return float(1 - np.max(np.abs(v)))
    return float(np.min(v.imag) / im_scale)


def _pin_coordinate(model: str, w: np.ndarray) -> np.ndarray:
    """im(w), or im(i(1+w)/(1-w)) in the disc model."""
    if model == 'disc':
        return (1 - np.abs(w) ** 2) / np.abs(1 - w) ** 2
    return w.imag


def _clamp(values: np.ndarray, model: str, limit: float, im_scale: float) -> np.ndarray:
    out = values.copy()
    if model == 'disc':
        r = np.abs(out)
        over = r > 1 - limit
        out[over] *= (1 - limit) / r[over]
    else:
        low = out.imag < limit * im_scale
        out[low] = out[low].real + 1j * limit * im_scale
    return out


def solve_cr(domain: DomainSpec, connection: GridConnection | PathConnection | None, bc: BoundaryCondition,
             model: str | None = None, initial: GridMap | complex | None = None,
             tol: float = CONVERGED_RESIDUAL, max_evaluations: int = MAX_EVALUATIONS,
             escape_factor: float = ESCAPE_FACTOR) -> tuple[GridMap, SolveOutcome]:
    """Least-squares solve of the box-scheme CR equations; escape and plateau are outcomes, not errors."""
    model = model or bc.model or (connection.model if isinstance(connection, GridConnection) else None)
    if model not in MODELS:
        raise PreconditionError('cannot infer the target model; pass model="halfplane" or "disc"')
    if bc.model not in (None, model):
        raise PreconditionError(f'boundary conditions are for the {bc.model} model, solving in {model}')
    if bc.domain != domain:
        raise PreconditionError('boundary conditions were built for a different domain')
    conn = connection if isinstance(connection, GridConnection) else pullback_connection(connection, domain, model)
    if conn.model != model or conn.shape != domain.resolution:
        raise PreconditionError('connection does not match the model or grid')

    cells = domain.cells()
    layout = _Layout(domain, bc, model)
    n_t = domain.resolution[1]
    pin_nodes = [i * n_t + j for (i, j), _ in bc.pins]
    pin_targets = _pin_coordinate(model, np.array([v for _, v in bc.pins], dtype=complex))
    s_coef = tuple(cells.average(c) for c in conn.s_coef)
    t_coef = tuple(cells.average(c) for c in conn.t_coef)
    h_s, h_t = domain.spacing
    c00, c10, c01, c11 = cells.corners()

    start = _initial_values(domain, bc, model, initial)
    im_scale = 1.0 if model == 'disc' else float(np.median(np.abs(start[domain.mask()].imag))) or 1.0
    # escape margin: 1-|w| (disc) or im(w)/im_scale (half-plane) below escape_factor * h
    limit = escape_factor * domain.h
    if limit >= 1:
        raise PreconditionError(f'grid too coarse for escape detection: escape_factor * h = {limit:.3g} >= 1')
    worst = {'margin': np.inf}

    def residual(x: np.ndarray) -> np.ndarray:
        u = layout.values(x).ravel()
        worst['margin'] = min(worst['margin'], _margin(u, layout.mask, model, im_scale))
        a, b, c, d = u[c00], u[c10], u[c01], u[c11]
        center = (a + b + c + d) / 4.0
        r = (((b - a) + (d - c)) / (2 * h_s) - _field(model, s_coef, center)
             + 1j * (((c - a) + (d - b)) / (2 * h_t) - _field(model, t_coef, center)))
        pins = PIN_WEIGHT * (_pin_coordinate(model, u[pin_nodes]) - pin_targets)
        return np.concatenate([r.real, r.imag, pins])

    x0 = layout.unknowns(start)
    sparsity = layout.sparsity(cells, len(pin_nodes), pin_nodes)
    result = least_squares(residual, x0, jac_sparsity=sparsity, method='trf', x_scale='jac',
                           ftol=1e-14, xtol=1e-14, gtol=1e-14, max_nfev=max_evaluations)
    values = layout.values(result.x)
    rms = float(np.sqrt(np.mean(result.fun[:2 * cells.size] ** 2) * 2)) if cells.size else 0.0
    final_margin = _margin(values, layout.mask, model, im_scale)
    escaped_now = final_margin < limit
    if escaped_now:
        status = 'escape'
        values = np.where(layout.mask.reshape(domain.resolution), _clamp(values, model, limit, im_scale), values)
    elif rms < tol:
        status = 'converged-interior'
    else:
        status = 'plateau'
    outcome = SolveOutcome(status, rms, int(result.nfev), bool(worst['margin'] < limit or escaped_now),
                           float(min(worst['margin'], final_margin)), str(result.message))
    log = logger.warning if status == 'plateau' else logger.info
    log('solve_cr %s on %s %s: residual %.3e after %d evaluations', status, domain.shape, domain.resolution,
        rms, outcome.iterations)
    return GridMap(values, model, domain), outcome


CASES = ('constant', 'manufactured', 'germ-manufactured', 'schwarz-pick')


def manufactured_map(domain: DomainSpec):
    """Holomorphic u(z) = -1/(z - z0) with z0 one unit below the domain; im(u) > 0 on the grid."""
    s, t = domain.coordinates()
    z0 = complex(0.5 * (s[0] + s[-1]), t[0] - 1.0)
    return lambda z: -1.0 / (np.asarray(z) - z0)


def preset_problem(domain: DomainSpec, case: str, rho: float = 0.5):
    """(bc, model, exact map) for the built-in A = 0 problems."""
    if case == 'constant':
        def exact(z):
            return 1j * np.ones_like(np.asarray(z, dtype=complex))
        return lines_from_map(domain, exact), 'halfplane', exact
    if case == 'manufactured':
        exact = manufactured_map(domain)
        return lines_from_map(domain, exact), 'halfplane', exact
    if case == 'germ-manufactured':
        u_w = manufactured_map(domain)

        def exact(z):
            return cayley_inverse(u_w(z))
        bc = germs_from_lines(domain, lambda z: np.real(u_w(z)))
        return pin_pair(bc, exact), 'disc', exact
    if case == 'schwarz-pick':
        if domain.shape not in ('disc', 'half_disc'):
            raise PreconditionError('the schwarz-pick case needs a disc or half-disc grid')
        power = 1 if domain.shape == 'disc' else 2

        def exact(z):
            zeta = rho * np.asarray(z) ** power
            return 1j * (1 + zeta) / (1 - zeta)
        return lines_from_map(domain, exact), 'halfplane', exact
    raise PreconditionError(f'unknown problem case {case!r}; expected one of {CASES}')


def sup_error(u: GridMap, exact) -> float:
    mask = u.domain.mask()
    return float(np.max(np.abs(u.values[mask] - exact(u.domain.points()[mask]))))


# ---------------------------------------------------------------------------
# Schwarz-Pick on grid solutions


def _reflect_half_disc(u: GridMap) -> GridMap:
    """Extend a half-disc solution with re(u) = 0 on the diameter by u(-conj z) = -conj u(z)."""
    n_s, n_t = u.domain.resolution
    full = DomainSpec('disc', (2 * n_s - 1, n_t))
    values = np.concatenate([-np.conj(u.values[:0:-1, :]), u.values], axis=0)
    return GridMap(values, u.model, full)


def schwarz_pick_check(u: GridMap) -> float:
    """max over cells of ||Du||_W (1 - |z|^2) / 2 for an A = 0 solution on a disc or half-disc grid."""
    if u.model != 'halfplane':
        raise PreconditionError('the Schwarz-Pick bound is stated for maps into the half-plane')
    if u.domain.shape == 'half_disc':
        u = _reflect_half_disc(u)
    elif u.domain.shape != 'disc':
        raise PreconditionError('schwarz_pick_check needs a disc or half-disc grid')
    cells = u.domain.cells()
    u_s, u_t, u_c = cells.derivatives(u.values)
    norm = np.sqrt(0.5 * (np.abs(u_s) ** 2 + np.abs(u_t) ** 2)) / u_c.imag
    z = cells.centers()
    return float(np.max(norm * (1 - np.abs(z) ** 2) / 2))


# ---------------------------------------------------------------------------
# cylinder experiment


@dataclass(frozen=True)
class CylinderReport:
    tau: float
    length: float
    bound: float
    outcomes: tuple

    @property
    def interior_convergences(self) -> int:
        return sum(o.converged for o in self.outcomes)

    def counts(self) -> dict:
        out = {'converged-interior': 0, 'escape': 0, 'plateau': 0}
        for o in self.outcomes:
            out[o.status] += 1
        return out


def cylinder_resolution(length: float, n_t: int = CYLINDER_NT) -> tuple[int, int]:
    """Grid with the s spacing no coarser than the t spacing 1/n_t."""
    return max(MIN_RESOLUTION, int(np.ceil(n_t * length)) + 1), n_t


def cylinder_feasibility_experiment(tau: float, length: float, seeds, resolution: tuple[int, int] | None = None,
                                    nodes: int = 256, max_evaluations: int = 150) -> CylinderReport:
    """Solve d_s u + i(d_t u - X_{a_t}(u)) = 0 on [0,l] x S^1 (free ends) from jittered constant seeds."""
    if not tau > 2 or not length > 0:
        raise PreconditionError('the cylinder experiment needs tau > 2 and l > 0')
    resolution = resolution or cylinder_resolution(length)
    loop = manufactured_rotation_loop(hyperbolic_generator(tau), nodes)
    domain = DomainSpec('cylinder', resolution, length)
    conn = pullback_connection(loop, domain, 'disc')
    bc = BoundaryCondition(domain)
    outcomes = []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        start = 0.5 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        jitter = 0.01 * (rng.normal(size=domain.resolution) + 1j * rng.normal(size=domain.resolution))
        initial = GridMap(start + jitter, 'disc', domain)
        _, outcome = solve_cr(domain, conn, bc, 'disc', initial, max_evaluations=max_evaluations)
        outcomes.append(outcome)
    report = CylinderReport(float(tau), float(length), cylinder_bound(tau), tuple(outcomes))
    logger.info('cylinder tau=%.4f l=%.4f (L=%.4f): %s', tau, length, report.bound, report.counts())
    return report
