# membership predicates, constructions and the sheet invariant for boundary data
"""
Spaces of boundary data attached to intervals, loops and punctured discs.

Open conditions are tested strictly.  Every predicate has a ``margin_*``
companion returning the signed distance to the boundary of its condition
(positive inside), so callers can demand a margin instead of padding the
predicate with a tolerance.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import newton

from util.connections import (
    DEFAULT_NODES, GaugeGrid, GaugePath, LiftedHolonomy, PathConnection, holonomy, hyperbolic_generator,
    integrate_transport, lifted_apply, lifted_holonomy_from_path, lifted_inverse_apply, manufactured_rotation_loop,
    transport_path,
)
from util.geo import germ_frame
from util.hyperbolic import (
    TWO_PI, AffLieElement, BoundaryPoint, ConsistencyError, LieElement, LiftedPoint,
    MoebiusMap, NotHyperbolicError, PreconditionError, aff_lie_to_disc, halfplane_angle,
    on_open_arc,
)

logger = logging.getLogger(__name__)

TRACE_TOL = 1e-6
LIFTED_TARGET_ROUNDS = 4
TUNING_TOL = 1e-13
TUNING_ROUNDS = 20


@dataclass(frozen=True)
class IntervalDatumAff:
    connection: PathConnection
    lam0: float
    lam1: float


@dataclass(frozen=True)
class IntervalDatumLifted:
    connection: PathConnection
    lam0: LiftedPoint
    lam1: LiftedPoint


@dataclass(frozen=True)
class LoopDatum:
    connection: PathConnection
    tau: float

    def __post_init__(self):
        if not self.tau > 2:
            raise PreconditionError(f'tau must exceed 2, got {self.tau}')
        if self.connection.domain != 'circle':
            raise PreconditionError('a loop datum needs a circle connection')


@dataclass(frozen=True)
class DiscBoundaryConfig:
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, 'labels', tuple(self.labels))
        if len(self.labels) < 2:
            raise PreconditionError('a disc boundary configuration has d+1 >= 2 labels')

    @property
    def d(self) -> int:
        return len(self.labels) - 1


@dataclass(frozen=True, eq=False)
class PuncturedConfig:
    holonomy: LiftedHolonomy
    labels: tuple
    tau: float
    loop: PathConnection | None = None

    def __post_init__(self):
        object.__setattr__(self, 'labels', tuple(self.labels))
        if not self.labels:
            raise PreconditionError('a punctured configuration needs at least one label')

    @property
    def d(self) -> int:
        return len(self.labels) - 1

    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.labels])

    def shifted(self, turns: int) -> 'PuncturedConfig':
        """Deck transformation applied to every label (the lift of g commutes with it)."""
        return PuncturedConfig(self.holonomy, tuple(p.shifted(turns) for p in self.labels), self.tau, self.loop)


def _window_margin(x: float) -> float:
    """Distance of x to the complement of (0, 2pi), negative outside."""
    return float(min(x, TWO_PI - x))


# ---------------------------------------------------------------------------
# intervals


def margin_paff_interval(x: IntervalDatumAff) -> float:
    if not x.connection.is_affine:
        raise PreconditionError('affine interval data needs an affine connection')
    g = integrate_transport(x.connection)
    return float(x.lam0 - g.inverse()(x.lam1))


def check_paff_interval(x: IntervalDatumAff) -> bool:
    return margin_paff_interval(x) > 0


def margin_p_interval(x: IntervalDatumLifted) -> float:
    if x.connection.is_affine:
        raise PreconditionError('lifted interval data needs an su(1,1) connection')
    lam1_dagger = lifted_inverse_apply(transport_path(x.connection), x.lam1.value)
    return _window_margin(x.lam0.value - lam1_dagger)


def check_p_interval(x: IntervalDatumLifted) -> bool:
    return margin_p_interval(x) > 0


def embed_affine_interval(x: IntervalDatumAff) -> IntervalDatumLifted:
    """Move affine data into the disc; affine paths fix angle 0, so their lifts preserve (0, 2pi)."""
    conn = PathConnection(tuple(aff_lie_to_disc(a) for a in x.connection.samples), x.connection.domain)
    return IntervalDatumLifted(conn, LiftedPoint(float(halfplane_angle(x.lam0))),
                               LiftedPoint(float(halfplane_angle(x.lam1))))


# ---------------------------------------------------------------------------
# loops


def check_ptau_circle(x: LoopDatum, tol: float = TRACE_TOL) -> bool:
    try:
        h = holonomy(x.connection)
    except NotHyperbolicError:
        return False
    return abs(abs(h.element.trace) - x.tau) < tol and h.rotation_number == 1


# ---------------------------------------------------------------------------
# disc boundary configurations


def margin_c_aff(labels: Sequence[float]) -> float:
    if len(labels) < 2:
        raise PreconditionError('C_aff needs at least two labels')
    return float(np.min(-np.diff(np.asarray(labels, dtype=float))))


def check_c_aff(labels: Sequence[float]) -> bool:
    return margin_c_aff(labels) > 0


def margin_c(config: DiscBoundaryConfig) -> float:
    v = np.array([p.value for p in config.labels])
    return float(min(np.min(-np.diff(v)), _window_margin(v[0] - v[-1])))


def check_c(config: DiscBoundaryConfig) -> bool:
    return margin_c(config) > 0


# ---------------------------------------------------------------------------
# punctured discs


def _holonomy_line(config: PuncturedConfig) -> bool:
    h = config.holonomy
    return abs(abs(h.element.trace) - config.tau) < TRACE_TOL and h.rotation_number == 1


def _tilde_holonomy_original(config: PuncturedConfig) -> bool:
    v = config.values()
    if not _holonomy_line(config):
        return False
    if not _window_margin(v[0] - config.holonomy.inverse_apply(v[-1])) > 0:
        return False
    gaps = v[:-1] - v[1:]
    return bool(np.all((gaps > 0) & (gaps < TWO_PI)))


def tilde_holonomy_reformulated(config: PuncturedConfig) -> bool:
    """Hyperbolic rot-1 holonomy, lam0 over (l_big, l_small), the lam0/lam_d window, descending labels."""
    v = config.values()
    if not _holonomy_line(config):
        return False
    l_small, l_big = config.holonomy.fixed_points()
    if not on_open_arc(v[0], l_big.angle, l_small.angle):
        return False
    if not _window_margin(v[0] - config.holonomy.inverse_apply(v[-1])) > 0:
        return False
    return bool(np.all(np.diff(v) < 0))


def check_c_tau(config: PuncturedConfig) -> bool:
    original = _tilde_holonomy_original(config)
    reformulated = tilde_holonomy_reformulated(config)
    if original != reformulated:
        raise ConsistencyError(f'holonomy conditions disagree (original {original}, reformulated {reformulated}); '
                               'the lift is numerically unreliable')
    return original


def margin_c_tau(config: PuncturedConfig) -> float:
    v = config.values()
    margins = [_window_margin(v[0] - config.holonomy.inverse_apply(v[-1]))]
    if config.d > 0:
        gaps = v[:-1] - v[1:]
        margins += [float(np.min(gaps)), float(np.min(TWO_PI - gaps))]
    return float(min(margins))


def big_small_gap(config: PuncturedConfig) -> float:
    """lam0 - g~^-1(lam0); lies in (0, 2pi) whenever check_c_tau passes."""
    v0 = config.labels[0].value
    return float(v0 - config.holonomy.inverse_apply(v0))


def sheet_index(config: PuncturedConfig, component_anchor: LiftedPoint | None = None) -> int:
    """Component of the preimage of (l_big, l_small) containing lam0, relative to the anchor's."""
    if not check_c_tau(config):
        raise PreconditionError('sheet_index needs a configuration in C_tau')
    _, l_big = config.holonomy.fixed_points()
    base = l_big.angle

    def component(x: float) -> int:
        return int(np.floor((x - base) / TWO_PI))

    offset = component(component_anchor.value) if component_anchor is not None else 0
    return component(config.labels[0].value) - offset


def rotate_interior_end(config: PuncturedConfig, theta: float) -> PuncturedConfig:
    """Start the interior loop theta turns later: conjugate g~ and move labels by the partial lift."""
    path = config.holonomy.path
    n = path.n - 1
    m = int(round(theta * n))
    if not 0 <= m <= n:
        raise PreconditionError(f'rotation fraction must lie in [0, 1], got {theta}')
    g = path.end
    start_inv = path.samples[m].inverse()
    rotated = []
    for k in range(n + 1):
        idx = m + k
        phi = path.samples[idx] if idx <= n else path.samples[idx - n].compose(g)
        rotated.append(phi.compose(start_inv))
    prefix = GaugePath(path.samples[:m + 1], 'interval')
    labels = tuple(LiftedPoint(lifted_apply(prefix, p.value)) for p in config.labels)
    return PuncturedConfig(lifted_holonomy_from_path(GaugePath(tuple(rotated), 'interval')), labels, config.tau,
                           config.loop)


# ---------------------------------------------------------------------------
# constructions


def _smooth_coefficients(rng: np.random.Generator, scale: float):
    c = rng.normal(scale=scale, size=3)
    return lambda t: c[0] + c[1] * np.cos(TWO_PI * t) + c[2] * np.sin(TWO_PI * t)


def construct_interval_datum(lam0: float, lam1: float, seed: int, n: int = DEFAULT_NODES) -> IntervalDatumAff:
    """Random affine connection, shifted so that lam0 - g^-1(lam1) >= 1."""
    if not (np.isfinite(lam0) and np.isfinite(lam1)):
        raise PreconditionError('targets must be finite')
    rng = np.random.default_rng(seed)
    scale, shift = _smooth_coefficients(rng, 0.5), _smooth_coefficients(rng, 0.5)

    def build(c: float) -> PathConnection:
        return PathConnection.from_function(lambda t: AffLieElement(scale(t), shift(t) + c), n)

    g0, g1 = integrate_transport(build(0.0)), integrate_transport(build(1.0))
    target = lam1 - g0.scale * lam0 + 1.0 + rng.uniform()
    c = (target - g0.shift) / (g1.shift - g0.shift)
    datum = IntervalDatumAff(build(c), float(lam0), float(lam1))
    if not check_paff_interval(datum):
        raise ConsistencyError('constructed affine interval datum fails its own membership check')
    return datum


def construct_interval_datum_lifted(lam0: LiftedPoint, lam1: LiftedPoint, seed: int,
                                    n: int = DEFAULT_NODES) -> IntervalDatumLifted:
    """Random su(1,1) motion followed by a rotation tuned so that g~^-1(lam1) = lam0 - pi."""
    if not (np.isfinite(lam0.value) and np.isfinite(lam1.value)):
        raise PreconditionError('unsatisfiable lifted window: targets must be finite')
    rng = np.random.default_rng(seed)
    alpha, beta_re, beta_im = (_smooth_coefficients(rng, 0.4) for _ in range(3))
    half = n // 2

    def build(theta: float) -> PathConnection:
        samples = []
        for k, t in enumerate(np.linspace(0.0, 1.0, n)):
            if k < half:
                samples.append(LieElement(2 * alpha(2 * t), 2 * complex(beta_re(2 * t), beta_im(2 * t))))
            else:
                samples.append(LieElement(theta, 0.0))
        return PathConnection(tuple(samples))

    target = lam0.value - np.pi
    theta = 0.0
    for _ in range(LIFTED_TARGET_ROUNDS):
        reached = lifted_apply(transport_path(build(theta)), target)
        theta += lam1.value - reached
    datum = IntervalDatumLifted(build(theta), lam0, lam1)
    if not check_p_interval(datum):
        raise ConsistencyError('constructed lifted interval datum fails its own membership check')
    return datum


def frame_for_endpoints(e_big: BoundaryPoint, e_small: BoundaryPoint) -> MoebiusMap:
    """Isometry with 1 -> e_big and -1 -> e_small."""
    z1, z2 = e_big.complex, e_small.complex
    half_angle = 0.5 * abs(np.angle(z2 / z1))
    if np.cos(half_angle) < 1e-12:
        anchor = 0j
    else:
        mid = (z1 + z2) / abs(z1 + z2)
        anchor = mid * (1 - np.sin(half_angle)) / np.cos(half_angle)
    return germ_frame(e_big, anchor)


def _tuned_rotation_loop(tau: float, n: int, frame: MoebiusMap) -> PathConnection:
    """Manufactured rot-1 loop with its translation part rescaled so the sampled holonomy has trace tau."""
    gamma = hyperbolic_generator(tau)

    def build(c: float) -> PathConnection:
        return manufactured_rotation_loop(gamma * c, n, 1, frame)

    def excess(c: float) -> float:
        return abs(integrate_transport(build(c)).trace) - tau

    c = newton(excess, 1.0, x1=1.0 + 1e-3, tol=TUNING_TOL, maxiter=TUNING_ROUNDS)
    logger.debug('loop for tau=%.4f tuned by factor %.8f', tau, c)
    return build(float(c))


def construct_ptau_loop(tau: float, seed: int, n: int = DEFAULT_NODES) -> LoopDatum:
    """Conjugated rotation-times-translation loop: hyperbolic holonomy of trace tau, rotation number 1."""
    rng = np.random.default_rng(seed)
    p = 0.6 * np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, TWO_PI))
    frame = germ_frame(BoundaryPoint(rng.uniform(0, TWO_PI)), complex(p))
    datum = LoopDatum(_tuned_rotation_loop(tau, n, frame), float(tau))
    if not check_ptau_circle(datum):
        raise ConsistencyError('constructed loop fails its own membership check')
    return datum


def construct_c_tau_point(d: int, tau: float, seed: int, n: int = DEFAULT_NODES) -> PuncturedConfig:
    """Choose lam0, then the fixed points, the rot-1 holonomy, lam_d, and the labels in between."""
    if d < 0:
        raise PreconditionError(f'd must be non-negative, got {d}')
    rng = np.random.default_rng(seed)
    lam0 = rng.uniform(-TWO_PI, TWO_PI)
    gap = rng.uniform(0.5, TWO_PI - 0.5)
    l_big = lam0 - rng.uniform(0.2, 0.8) * gap
    frame = frame_for_endpoints(BoundaryPoint(l_big), BoundaryPoint(l_big + gap))
    loop = _tuned_rotation_loop(tau, n, frame)
    lifted = holonomy(loop)
    if d == 0:
        labels = (LiftedPoint(lam0),)
    else:
        lam_d = 0.5 * (lifted.apply(lam0 - TWO_PI) + lam0)
        labels = tuple(LiftedPoint(lam0 + (j / d) * (lam_d - lam0)) for j in range(d + 1))
    config = PuncturedConfig(lifted, labels, float(tau), loop)
    logger.debug('constructed C_tau point d=%d tau=%.4f seed=%s margin=%.3e', d, tau, seed, margin_c_tau(config))
    return config


# ---------------------------------------------------------------------------
# boundary labels on gauge grids


def _grid_path(start: tuple[int, int], end: tuple[int, int]) -> list[tuple[int, int]]:
    """Nodes from start to end, first along s, then along t."""
    (i0, j0), (i1, j1) = start, end
    si = 1 if i1 >= i0 else -1
    sj = 1 if j1 >= j0 else -1
    nodes = [(i, j0) for i in range(i0, i1 + si, si)]
    nodes += [(i1, j) for j in range(j0 + sj, j1 + sj, sj)]
    return nodes


def lifted_grid_transport(grid: GaugeGrid, start: tuple[int, int], end: tuple[int, int], x: float) -> float:
    """Lifted transport of x along the grid path from start to end."""
    nodes = _grid_path(start, end)
    origin_inv = grid.values[start[0]][start[1]].inverse()
    path = GaugePath(tuple(grid.values[i][j].compose(origin_inv) for i, j in nodes))
    if path.n == 1:
        return float(x)
    return lifted_apply(path, x)


def transport_labels_to_base(grid: GaugeGrid, nodes: Sequence[tuple[int, int]], labels: Sequence[LiftedPoint],
                             base: tuple[int, int] = (0, 0)) -> DiscBoundaryConfig:
    """Trivialize boundary labels: move each one to the base node by lifted parallel transport."""
    if len(nodes) != len(labels):
        raise PreconditionError('one label per boundary node is required')
    moved = [LiftedPoint(lifted_grid_transport(grid, node, base, p.value)) for node, p in zip(nodes, labels)]
    return DiscBoundaryConfig(tuple(moved))


def is_covariantly_constant(grid: GaugeGrid, nodes: Sequence[tuple[int, int]], labels: Sequence[LiftedPoint],
                            tol: float = 1e-9) -> bool:
    """True when consecutive labels along an arc are related by the lifted transport."""
    for a, b, pa, pb in zip(nodes[:-1], nodes[1:], labels[:-1], labels[1:]):
        if abs(lifted_grid_transport(grid, a, b, pa.value) - pb.value) > tol:
            return False
    return True
