# sampled connections: transport, holonomy, lifts, gauge action, grid curvature
"""
One-forms A = a_t dt on [0,1] or on the circle R/Z are stored as uniform
samples of Lie algebra elements with piecewise-linear interpolation.  Parallel
transport solves dPhi/dt = a_t Phi with a product of midpoint exponentials.

Elements of the universal cover are represented by sampled paths starting at
the identity; their action on R (the cover of the circle at infinity) is
computed by unwinding the angle of a point along the path.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from util.hyperbolic import (
    TWO_PI, AffLieElement, AffMap, BoundaryPoint, IsometryClass, LieElement, LiftError,
    LiftedPoint, MoebiusMap, NotHyperbolicError, PreconditionError, classify,
    disc_hamiltonian, exp_lie, fixed_points, halfplane_hamiltonian, lie_bracket, moebius_arrays,
    poisson_bracket_disc,
)

logger = logging.getLogger(__name__)

DEFAULT_NODES = 256
ROTATION_ROUNDING_TOL = 0.05
MAX_UNWIND_STEP = 0.9 * np.pi
DERIVATIVE_STEP = 1e-5

Element = Union[MoebiusMap, AffMap]
Algebra = Union[LieElement, AffLieElement]
DOMAINS = ('interval', 'circle')


def _identity_for(sample) -> Element:
    return AffMap.identity() if isinstance(sample, (AffLieElement, AffMap)) else MoebiusMap.identity()


@dataclass(frozen=True)
class PathConnection:
    samples: tuple
    domain: str = 'interval'

    def __post_init__(self):
        object.__setattr__(self, 'samples', tuple(self.samples))
        if self.domain not in DOMAINS:
            raise PreconditionError(f'unknown connection domain {self.domain!r}')
        if len(self.samples) < 2:
            raise PreconditionError('a sampled connection needs at least two nodes')
        kinds = {type(s) for s in self.samples}
        if len(kinds) != 1 or not kinds <= {LieElement, AffLieElement}:
            raise PreconditionError('connection samples must all be LieElement or all AffLieElement')

    @property
    def n(self) -> int:
        return len(self.samples)

    @property
    def is_affine(self) -> bool:
        return isinstance(self.samples[0], AffLieElement)

    @property
    def step(self) -> float:
        return 1.0 / (self.n - 1) if self.domain == 'interval' else 1.0 / self.n

    def node_times(self) -> np.ndarray:
        return np.arange(self.n) * self.step

    def value_at(self, t: float) -> Algebra:
        if self.domain == 'circle':
            x = np.mod(t, 1.0) / self.step
            k = int(np.floor(x)) % self.n
            return self.samples[k] * (1.0 - (x - np.floor(x))) + self.samples[(k + 1) % self.n] * (x - np.floor(x))
        x = t / self.step
        k = int(min(max(np.floor(x), 0), self.n - 2))
        frac = x - k
        return self.samples[k] * (1.0 - frac) + self.samples[k + 1] * frac

    @classmethod
    def constant(cls, gamma: Algebra, n: int = DEFAULT_NODES, domain: str = 'interval') -> 'PathConnection':
        return cls(tuple(gamma for _ in range(n)), domain)

    @classmethod
    def from_function(cls, f: Callable[[float], Algebra], n: int = DEFAULT_NODES,
                      domain: str = 'interval') -> 'PathConnection':
        times = np.linspace(0.0, 1.0, n) if domain == 'interval' else np.arange(n) / n
        return cls(tuple(f(float(t)) for t in times), domain)


@dataclass(frozen=True)
class GaugePath:
    """Group elements at the nodes of a connection (or at N+1 nodes of a closed loop path)."""
    samples: tuple
    domain: str = 'interval'

    def __post_init__(self):
        object.__setattr__(self, 'samples', tuple(self.samples))
        if self.domain not in DOMAINS:
            raise PreconditionError(f'unknown gauge domain {self.domain!r}')

    @property
    def n(self) -> int:
        return len(self.samples)

    @property
    def step(self) -> float:
        return 1.0 / (self.n - 1) if self.domain == 'interval' else 1.0 / self.n

    @property
    def end(self) -> Element:
        return self.samples[-1]

    def inverted(self) -> 'GaugePath':
        """Pointwise inverse; lifts to the inverse element of the cover."""
        return GaugePath(tuple(g.inverse() for g in self.samples), self.domain)


# ---------------------------------------------------------------------------
# transport


def _breakpoints(A: PathConnection, t0: float, t1: float, substeps: int) -> np.ndarray:
    h = A.step
    inner = np.arange(np.floor(t0 / h) + 1, np.ceil(t1 / h)) * h
    inner = inner[(inner > t0 + 1e-12) & (inner < t1 - 1e-12)]
    coarse = np.concatenate(([t0], inner, [t1]))
    if substeps == 1:
        return coarse
    pieces = [np.linspace(lo, hi, substeps + 1)[:-1] for lo, hi in zip(coarse[:-1], coarse[1:])]
    return np.concatenate(pieces + [[t1]])


def integrate_transport(A: PathConnection, t0: float = 0.0, t1: float = 1.0, substeps: int = 1) -> Element:
    """Transport from t0 to t1: product of exp((b_i+1 - b_i) a(midpoint)) over node-aligned pieces."""
    if A.domain == 'interval' and not (0.0 <= t0 <= t1 <= 1.0):
        raise PreconditionError(f'interval transport needs 0 <= t0 <= t1 <= 1, got ({t0}, {t1})')
    if t1 < t0:
        raise PreconditionError('transport runs forward in time; swap and invert instead')
    g = _identity_for(A.samples[0])
    cuts = _breakpoints(A, t0, t1, substeps)
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        g = A.value_at(0.5 * (lo + hi)).exp(hi - lo).compose(g)
    return g


def transport_with_error(A: PathConnection, t0: float = 0.0, t1: float = 1.0) -> tuple[Element, float]:
    """Transport plus a Richardson estimate of its error (second-order scheme)."""
    coarse = integrate_transport(A, t0, t1, substeps=1)
    fine = integrate_transport(A, t0, t1, substeps=2)
    return coarse, coarse.distance(fine) * 4.0 / 3.0


GAUSS_NODES = (0.5 - np.sqrt(3.0) / 6.0, 0.5 + np.sqrt(3.0) / 6.0)
ORDERS = (2, 4)


def _commutator(x: Algebra, y: Algebra) -> Algebra:
    """Matrix commutator xy - yx."""
    if isinstance(x, AffLieElement):
        return AffLieElement(0.0, x.scale_rate * y.shift_rate - y.scale_rate * x.shift_rate)
    return LieElement.from_matrix(x.matrix() @ y.matrix() - y.matrix() @ x.matrix())


def _cubic_value(A: PathConnection, x: float) -> Algebra:
    """Four-point Lagrange interpolation of the samples at t = x * step."""
    k = int(np.floor(x))
    base = k - 1 if A.domain == 'circle' else min(max(k - 1, 0), A.n - 4)
    nodes = base + np.arange(4)
    out = None
    for j, node in enumerate(nodes):
        w = np.prod([(x - other) / (node - other) for other in np.delete(nodes, j)])
        term = A.samples[node % A.n] * float(w)
        out = term if out is None else out + term
    return out


def _magnus_step(A: PathConnection, k: int) -> Element:
    """Two-point Gauss Magnus step over [t_k, t_k+1]."""
    h = A.step
    a1, a2 = (_cubic_value(A, k + c) for c in GAUSS_NODES)
    omega = (a1 + a2) * (0.5 * h) - _commutator(a1, a2) * (np.sqrt(3.0) * h * h / 12.0)
    return omega.exp(1.0)


def transport_path(A: PathConnection, substeps: int = 1, order: int = 2) -> GaugePath:
    """
    Phi at every node, Phi_0 = identity.  Loops give N+1 samples ending at the holonomy.

    order=2 multiplies midpoint exponentials of the piecewise-linear connection;
    order=4 takes Gauss-Magnus steps on the cubic interpolant of the samples.
    """
    if order not in ORDERS:
        raise PreconditionError(f'transport order must be one of {ORDERS}, got {order}')
    if order == 4 and A.n < 4:
        raise PreconditionError('fourth-order transport needs at least four nodes')
    g = _identity_for(A.samples[0])
    samples = [g]
    count = A.n - 1 if A.domain == 'interval' else A.n
    h = A.step
    for k in range(count):
        step = _magnus_step(A, k) if order == 4 else integrate_transport(A, k * h, (k + 1) * h, substeps)
        g = step.compose(g)
        samples.append(g)
    return GaugePath(tuple(samples), 'interval')


def trivializing_gauge(A: PathConnection) -> GaugePath:
    """Gauge Phi_t = P_t^-1 with P the fourth-order transport path, so that Phi_*A vanishes."""
    if A.domain != 'interval':
        raise PreconditionError('only interval connections are trivialized by their transport path')
    return transport_path(A, order=4).inverted()


def reverse_connection(A: PathConnection) -> PathConnection:
    """Connection of the reversed parametrization: a'_t = -a_{1-t}."""
    if A.domain == 'circle':
        return PathConnection(tuple(-A.samples[(-k) % A.n] for k in range(A.n)), 'circle')
    return PathConnection(tuple(-s for s in reversed(A.samples)), 'interval')


def concatenate_loops(first: PathConnection, second: PathConnection) -> PathConnection:
    """Loop traversing first, then second, each in half the time."""
    if first.domain != 'circle' or second.domain != 'circle':
        raise PreconditionError('concatenate_loops needs two circle connections')
    return PathConnection(tuple(2.0 * s for s in first.samples + second.samples), 'circle')


# ---------------------------------------------------------------------------
# lifts to the universal cover


def _coefficients(samples: Sequence[MoebiusMap]) -> tuple[np.ndarray, np.ndarray]:
    a = np.array([g.a for g in samples], dtype=complex)
    b = np.array([g.b for g in samples], dtype=complex)
    return a, b


def unwind_trajectory(samples: Sequence[MoebiusMap], x) -> np.ndarray:
    """Continuous angle of each start point x along the path; shape (len(samples), len(x))."""
    a, b = _coefficients(samples)
    if abs(a[0] - 1.0) > 1e-9 or abs(b[0]) > 1e-9:
        raise PreconditionError('lifted action needs a path that starts at the identity')
    x = np.atleast_1d(np.asarray(x, dtype=float))
    angles = np.angle(moebius_arrays(a[:, None], b[:, None], np.exp(1j * x)[None, :]))
    steps = np.angle(np.exp(1j * np.diff(angles, axis=0)))
    if steps.size and np.max(np.abs(steps)) > MAX_UNWIND_STEP:
        raise LiftError('path moves a boundary point by more than 0.9*pi between samples; refine it')
    return x[None, :] + np.vstack([np.zeros_like(x)[None, :], np.cumsum(steps, axis=0)])


def lifted_apply(path: GaugePath, x):
    """Natural lift of path.end applied to x in R."""
    out = unwind_trajectory(path.samples, x)[-1]
    return float(out[0]) if np.ndim(x) == 0 else out


def lifted_inverse_apply(path: GaugePath, y):
    return lifted_apply(path.inverted(), y)


@dataclass(frozen=True, eq=False)
class LiftedHolonomy:
    element: MoebiusMap
    rotation_number: int
    lift_trace: np.ndarray
    path: GaugePath = field(repr=False)

    def apply(self, x):
        return lifted_apply(self.path, x)

    def inverse_apply(self, y):
        return lifted_inverse_apply(self.path, y)

    def fixed_points(self) -> tuple[BoundaryPoint, BoundaryPoint]:
        return fixed_points(self.element)


def lifted_holonomy_from_path(path: GaugePath) -> LiftedHolonomy:
    """Rotation number of a path ending at a hyperbolic element, tracked at l_small."""
    g = path.end
    if classify(g) is not IsometryClass.HYPERBOLIC:
        raise NotHyperbolicError(f'holonomy is {classify(g).value}; rotation number is not integral')
    l_small, _ = fixed_points(g)
    trace = unwind_trajectory(path.samples, l_small.angle)[:, 0]
    winding = (trace[-1] - trace[0]) / TWO_PI
    rot = int(np.round(winding))
    if abs(winding - rot) > ROTATION_ROUNDING_TOL:
        raise LiftError(f'winding {winding:.4f} at l_small is not within {ROTATION_ROUNDING_TOL} of an integer')
    if abs(winding - rot) > 1e-6:
        logger.warning('fixed-point winding %.8f deviates from %d by more than 1e-6', winding, rot)
    return LiftedHolonomy(g, rot, trace, path)


def holonomy(A: PathConnection, substeps: int = 1, order: int = 2) -> LiftedHolonomy:
    if A.domain != 'circle':
        raise PreconditionError('holonomy needs a circle connection')
    if A.is_affine:
        raise PreconditionError('lifted holonomy is defined for su(1,1) connections')
    h = lifted_holonomy_from_path(transport_path(A, substeps, order))
    logger.info('holonomy trace %.6f, rotation number %d', h.element.trace, h.rotation_number)
    return h


def lifted_shift(h: LiftedHolonomy, point: LiftedPoint) -> float:
    """g~(l~) - l~."""
    return h.apply(point.value) - point.value


# ---------------------------------------------------------------------------
# gauge action


def _aligned(m: np.ndarray, ref: np.ndarray) -> np.ndarray:
    return m if np.linalg.norm(m - ref) <= np.linalg.norm(m + ref) else -m


def _to_algebra(n: np.ndarray, like: Element) -> Algebra:
    if isinstance(like, AffMap):
        return AffLieElement(float(n[0, 0].real), float(n[0, 1].real))
    return LieElement.from_matrix(n)


def right_log_derivative(minus: Element, plus: Element, center: Element, width: float) -> Algebra:
    """(dPhi) Phi^-1 from a centered difference of matrices."""
    m = center.matrix().astype(complex)
    d = (_aligned(plus.matrix(), m) - _aligned(minus.matrix(), m)) / width
    return _to_algebra(d @ np.linalg.inv(m), center)


# fourth-order first-derivative weights (times 12h) by offset from the node
CENTERED_WEIGHTS = {-2: 1.0, -1: -8.0, 1: 8.0, 2: -1.0}
END_WEIGHTS = {0: -25.0, 1: 48.0, 2: -36.0, 3: 16.0, 4: -3.0}
NEAR_END_WEIGHTS = {-1: -3.0, 0: -10.0, 1: 18.0, 2: -6.0, 3: 1.0}


def _stencil_log_derivative(samples: Sequence[Element], k: int, weights: dict, h: float) -> Algebra:
    m = samples[k].matrix().astype(complex)
    n = len(samples)
    d = sum(w * _aligned(samples[(k + offset) % n].matrix(), m) for offset, w in weights.items()) / (12.0 * h)
    return _to_algebra(d @ np.linalg.inv(m), samples[k])


def _mirrored(weights: dict) -> dict:
    return {-offset: -w for offset, w in weights.items()}


def gauge_derivative(phi: GaugePath) -> list:
    """(dPhi/dt) Phi^-1 at every node, fourth order (five-point stencils, one-sided near interval ends)."""
    n, h, s = phi.n, phi.step, phi.samples
    if n < 5:
        raise PreconditionError('gauge derivative needs at least five nodes')
    if phi.domain == 'circle':
        return [_stencil_log_derivative(s, k, CENTERED_WEIGHTS, h) for k in range(n)]
    out = [_stencil_log_derivative(s, 0, END_WEIGHTS, h), _stencil_log_derivative(s, 1, NEAR_END_WEIGHTS, h)]
    out += [_stencil_log_derivative(s, k, CENTERED_WEIGHTS, h) for k in range(2, n - 2)]
    out.append(_stencil_log_derivative(s, n - 2, _mirrored(NEAR_END_WEIGHTS), h))
    out.append(_stencil_log_derivative(s, n - 1, _mirrored(END_WEIGHTS), h))
    return out


def gauge_transform(phi: GaugePath, A: PathConnection) -> PathConnection:
    """Phi_*A = Phi a Phi^-1 + (dPhi) Phi^-1 at every node."""
    if phi.n != A.n or phi.domain != A.domain:
        raise PreconditionError(f'gauge path ({phi.n}, {phi.domain}) does not match connection ({A.n}, {A.domain})')
    derivative = gauge_derivative(phi)
    return PathConnection(tuple(a.adjoint(g) + d for a, g, d in zip(A.samples, phi.samples, derivative)), A.domain)


# ---------------------------------------------------------------------------
# manufactured loops


def hyperbolic_generator(tau: float) -> LieElement:
    """Generator whose time-one map is H(arccosh(tau/2)), of trace tau."""
    if not tau > 2:
        raise PreconditionError(f'tau must exceed 2, got {tau}')
    return LieElement(0.0, float(np.arccosh(tau / 2.0)))


def rotation_generator(winding: int = 1) -> LieElement:
    """exp_lie of this at t=1 turns the disc `winding` full times."""
    return LieElement(np.pi * winding, 0.0)


def manufactured_rotation_path(gamma: LieElement, t: float, winding: int = 1,
                               frame: MoebiusMap | None = None) -> MoebiusMap:
    """Phi_t = k R(2 pi winding t) exp(t gamma) k^-1."""
    g = exp_lie(rotation_generator(winding), t).compose(exp_lie(gamma, t))
    if frame is None:
        return g
    return frame.compose(g).compose(frame.inverse())


def manufactured_rotation_loop(gamma: LieElement, n: int = DEFAULT_NODES, winding: int = 1,
                               frame: MoebiusMap | None = None) -> PathConnection:
    """Circle connection a_t = (dPhi)Phi^-1 of manufactured_rotation_path."""
    rho = rotation_generator(winding)

    def a(t: float) -> LieElement:
        value = rho + gamma.adjoint(exp_lie(rho, t))
        return value if frame is None else value.adjoint(frame)

    return PathConnection.from_function(a, n, 'circle')


# ---------------------------------------------------------------------------
# connections on 2D grids


@dataclass(eq=False)
class GridConnection:
    """Node values of A(d/ds) and A(d/dt) as coefficient arrays.

    For the disc model the coefficients are (alpha, beta); for the half-plane
    model they are (scale_rate, shift_rate).
    """
    model: str
    s_coef: tuple
    t_coef: tuple

    def __post_init__(self):
        if self.model not in ('disc', 'halfplane'):
            raise PreconditionError(f'unknown model {self.model!r}')

    @property
    def shape(self) -> tuple[int, int]:
        return np.shape(self.s_coef[0])

    def element(self, i: int, j: int, direction: str) -> Algebra:
        p, q = self.s_coef if direction == 's' else self.t_coef
        if self.model == 'disc':
            return LieElement(float(p[i, j]), complex(q[i, j]))
        return AffLieElement(float(p[i, j]), float(q[i, j]))

    def hamiltonian(self, direction: str, w, index=np.s_[...]):
        p, q = self.s_coef if direction == 's' else self.t_coef
        if self.model == 'disc':
            return disc_hamiltonian(p[index], q[index], w)
        return halfplane_hamiltonian(p[index], q[index], w)

    @classmethod
    def zero(cls, model: str, shape: tuple[int, int]) -> 'GridConnection':
        p = np.zeros(shape)
        q = np.zeros(shape, dtype=complex if model == 'disc' else float)
        return cls(model, (p, q), (p.copy(), q.copy()))

    @classmethod
    def constant(cls, gamma_s: Algebra, gamma_t: Algebra, shape: tuple[int, int]) -> 'GridConnection':
        model = 'disc' if isinstance(gamma_s, LieElement) else 'halfplane'

        def coef(g):
            if model == 'disc':
                return np.full(shape, g.alpha), np.full(shape, g.beta, dtype=complex)
            return np.full(shape, g.scale_rate), np.full(shape, g.shift_rate)

        return cls(model, coef(gamma_s), coef(gamma_t))

    @classmethod
    def from_elements(cls, s_elems, t_elems) -> 'GridConnection':
        """Build from 2D nested lists of Lie elements."""
        first = s_elems[0][0]
        if isinstance(first, LieElement):
            def coef(el):
                return (np.array([[g.alpha for g in row] for row in el]),
                        np.array([[g.beta for g in row] for row in el], dtype=complex))
            return cls('disc', coef(s_elems), coef(t_elems))

        def coef(el):
            return (np.array([[g.scale_rate for g in row] for row in el]),
                    np.array([[g.shift_rate for g in row] for row in el]))
        return cls('halfplane', coef(s_elems), coef(t_elems))


@dataclass(eq=False)
class GaugeGrid:
    """Group-valued field Phi sampled on a rectangular (s, t) grid."""
    field: Callable[[float, float], Element]
    s: np.ndarray
    t: np.ndarray
    values: list = None

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=float)
        self.t = np.asarray(self.t, dtype=float)
        if self.s.size < 2 or self.t.size < 2:
            raise PreconditionError('a gauge grid needs at least 2x2 nodes')
        if self.values is None:
            self.values = [[self.field(float(s), float(t)) for t in self.t] for s in self.s]

    @classmethod
    def build(cls, field: Callable[[float, float], Element], shape: tuple[int, int],
              s_range: tuple[float, float] = (0.0, 1.0), t_range: tuple[float, float] = (0.0, 1.0)) -> 'GaugeGrid':
        return cls(field, np.linspace(*s_range, shape[0]), np.linspace(*t_range, shape[1]))

    @property
    def shape(self) -> tuple[int, int]:
        return self.s.size, self.t.size

    @property
    def h(self) -> float:
        return float(max(self.s[1] - self.s[0], self.t[1] - self.t[0]))

    @property
    def model(self) -> str:
        return 'halfplane' if isinstance(self.values[0][0], AffMap) else 'disc'

    def connection(self, step: float = DERIVATIVE_STEP) -> GridConnection:
        """A = (dPhi) Phi^-1 at the nodes, differentiating the field callable."""
        s_elems, t_elems = [], []
        for i, s in enumerate(self.s):
            row_s, row_t = [], []
            for j, t in enumerate(self.t):
                center = self.values[i][j]
                row_s.append(right_log_derivative(self.field(s - step, t), self.field(s + step, t), center, 2 * step))
                row_t.append(right_log_derivative(self.field(s, t - step), self.field(s, t + step), center, 2 * step))
            s_elems.append(row_s)
            t_elems.append(row_t)
        return GridConnection.from_elements(s_elems, t_elems)

    def transport(self, start: tuple[int, int], end: tuple[int, int]) -> Element:
        """Transport of (dPhi)Phi^-1 between two nodes: Phi(end) Phi(start)^-1."""
        return self.values[end[0]][end[1]].compose(self.values[start[0]][start[1]].inverse())


def _link(conn: GridConnection, i: int, j: int, direction: str, h: float) -> Element:
    a = conn.element(i, j, direction)
    b = conn.element(i + 1, j, direction) if direction == 's' else conn.element(i, j + 1, direction)
    return ((a + b) * 0.5).exp(h)


def plaquette_defects(conn: GridConnection, h_s: float, h_t: float) -> np.ndarray:
    """Distance to the identity of every plaquette holonomy of the lattice connection."""
    n_s, n_t = conn.shape
    if n_s < 2 or n_t < 2:
        raise PreconditionError('plaquettes need a grid of at least 2x2 nodes')
    out = np.zeros((n_s - 1, n_t - 1))
    for i in range(n_s - 1):
        for j in range(n_t - 1):
            loop = _link(conn, i, j, 's', h_s)
            loop = _link(conn, i + 1, j, 't', h_t).compose(loop)
            loop = _link(conn, i, j + 1, 's', h_s).inverse().compose(loop)
            loop = _link(conn, i, j, 't', h_t).inverse().compose(loop)
            out[i, j] = loop.distance(_identity_for(loop))
    return out


def plaquette_curvature(grid: GaugeGrid | GridConnection, h_s: float | None = None, h_t: float | None = None) -> float:
    """Max plaquette defect divided by h^2."""
    if isinstance(grid, GaugeGrid):
        conn, h_s, h_t = grid.connection(), grid.s[1] - grid.s[0], grid.t[1] - grid.t[0]
    else:
        conn = grid
        if h_s is None or h_t is None:
            raise PreconditionError('a bare grid connection needs its spacings')
    h = max(h_s, h_t)
    return float(plaquette_defects(conn, h_s, h_t).max() / h ** 2)


def flatness_residual(grid: GaugeGrid, nodes: Sequence[tuple[int, int]], points: Sequence[complex]) -> np.ndarray:
    """|d_t H_s - d_s H_t - {H_s, H_t}| at interior nodes paired with fiber points (disc model)."""
    conn = grid.connection()
    if conn.model != 'disc':
        raise PreconditionError('flatness_residual evaluates the disc Hamiltonians')
    h_s, h_t = grid.s[1] - grid.s[0], grid.t[1] - grid.t[0]
    out = []
    for (i, j), w in zip(nodes, points):
        if not (0 < i < grid.shape[0] - 1 and 0 < j < grid.shape[1] - 1):
            raise PreconditionError(f'node {(i, j)} is not interior')
        d_t_hs = (conn.hamiltonian('s', w, (i, j + 1)) - conn.hamiltonian('s', w, (i, j - 1))) / (2 * h_t)
        d_s_ht = (conn.hamiltonian('t', w, (i + 1, j)) - conn.hamiltonian('t', w, (i - 1, j))) / (2 * h_s)
        poisson = poisson_bracket_disc(conn.element(i, j, 's'), conn.element(i, j, 't'), w)
        out.append(abs(d_t_hs - d_s_ht - poisson))
    return np.array(out)


def commutator_defect(gamma_s: LieElement, gamma_t: LieElement) -> float:
    """Leading plaquette defect per unit area for a constant connection: |[M1, M2]|_F."""
    return float(np.linalg.norm(lie_bracket(gamma_s, gamma_t).matrix()))
