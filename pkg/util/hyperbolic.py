# isometry groups, Lie algebras, vector fields and Hamiltonians (disc and half-plane)
"""
Arithmetic of the two structure groups used throughout the toolkit.

* ``AffMap`` / ``AffLieElement``: orientation-preserving affine maps of the
  real line, acting on the upper half-plane W by ``w -> scale*w + shift``.
* ``MoebiusMap`` / ``LieElement``: PU(1,1) acting on the unit disc B.

Conventions (fixed once, used everywhere):

* A ``LieElement`` (alpha, beta) generates the flow whose vector field is
  ``X = -beta*w**2 + 2i*alpha*w + conj(beta)``.  Its generating matrix in the
  fractional-linear action is ``[[i*alpha, conj(beta)], [beta, -i*alpha]]``.
* Hamiltonians satisfy ``dH = omega(., X)``; Poisson brackets are
  ``{F, G} = omega(X_F, X_G)``.
* ``bracket`` is the bracket of the induced vector fields, so that
  ``H_[g1, g2] = {H_g1, H_g2}`` in both models.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
NORM_TOL = 1e-12
DEFAULT_CLASSIFY_TOL = 1e-9
SMALL_ARG = 1e-8


class GeometryError(ValueError):
    """Base class for errors raised by the toolkit."""


class DomainError(GeometryError):
    """A point lies outside the model domain of an operation."""


class NotHyperbolicError(GeometryError):
    """An operation needs a hyperbolic element and got something else."""


class PreconditionError(GeometryError):
    """Input data violates the precondition of an operation."""


class LiftError(GeometryError):
    """A lifted quantity (rotation number, unwound angle) could not be resolved."""


class ConsistencyError(GeometryError):
    """Two formulations that must agree disagreed numerically."""


class IsometryClass(Enum):
    IDENTITY = 'identity'
    ELLIPTIC = 'elliptic'
    PARABOLIC = 'parabolic'
    HYPERBOLIC = 'hyperbolic'


# ---------------------------------------------------------------------------
# boundary points and lifts


@dataclass(frozen=True)
class BoundaryPoint:
    """Point of the circle at infinity, stored as an angle in [0, 2pi)."""
    angle: float

    def __post_init__(self):
        object.__setattr__(self, 'angle', float(np.mod(self.angle, TWO_PI)))

    @property
    def complex(self) -> complex:
        return complex(np.exp(1j * self.angle))

    def lift(self, near: float = np.pi) -> 'LiftedPoint':
        """The lift closest to ``near``."""
        k = np.round((near - self.angle) / TWO_PI)
        return LiftedPoint(self.angle + k * TWO_PI)


@dataclass(frozen=True)
class LiftedPoint:
    """Point of the universal cover R of the circle at infinity."""
    value: float

    def project(self) -> BoundaryPoint:
        return BoundaryPoint(self.value)

    def shifted(self, turns: int) -> 'LiftedPoint':
        return LiftedPoint(self.value + TWO_PI * turns)


def on_open_arc(angle, start: float, end: float):
    """True where ``angle`` lies strictly inside the counterclockwise arc (start, end)."""
    length = np.mod(end - start, TWO_PI)
    offset = np.mod(np.asarray(angle) - start, TWO_PI)
    return (offset > 0) & (offset < length)


# ---------------------------------------------------------------------------
# affine group


@dataclass(frozen=True)
class AffMap:
    """x -> scale*x + shift with scale > 0."""
    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise GeometryError(f'affine scale must be positive, got {self.scale}')

    @classmethod
    def identity(cls) -> 'AffMap':
        return cls(1.0, 0.0)

    def __call__(self, x):
        return self.scale * x + self.shift

    def compose(self, other: 'AffMap') -> 'AffMap':
        """self after other."""
        return AffMap(self.scale * other.scale, self.scale * other.shift + self.shift)

    def inverse(self) -> 'AffMap':
        return AffMap(1.0 / self.scale, -self.shift / self.scale)

    def act_halfplane(self, w):
        w = np.asarray(w, dtype=complex)
        if np.any(w.imag <= 0):
            raise DomainError('affine action is defined on im(w) > 0')
        return self.scale * w + self.shift

    def matrix(self) -> np.ndarray:
        return np.array([[self.scale, self.shift], [0.0, 1.0]])

    def distance(self, other: 'AffMap') -> float:
        return float(np.linalg.norm(self.matrix() - other.matrix()))


@dataclass(frozen=True)
class AffLieElement:
    """Generator of t -> (x -> e^{t*scale_rate} x + ...); vector field scale_rate*w + shift_rate."""
    scale_rate: float = 0.0
    shift_rate: float = 0.0

    def __add__(self, other: 'AffLieElement') -> 'AffLieElement':
        return AffLieElement(self.scale_rate + other.scale_rate, self.shift_rate + other.shift_rate)

    def __sub__(self, other: 'AffLieElement') -> 'AffLieElement':
        return self + (-other)

    def __neg__(self) -> 'AffLieElement':
        return AffLieElement(-self.scale_rate, -self.shift_rate)

    def __mul__(self, c: float) -> 'AffLieElement':
        return AffLieElement(c * self.scale_rate, c * self.shift_rate)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.hypot(self.scale_rate, self.shift_rate))

    def exp(self, t: float = 1.0) -> AffMap:
        s = self.scale_rate * t
        if abs(s) < SMALL_ARG:
            shift = self.shift_rate * t * (1.0 + s / 2.0)
        else:
            shift = self.shift_rate * t * np.expm1(s) / s
        return AffMap(float(np.exp(s)), float(shift))

    def bracket(self, other: 'AffLieElement') -> 'AffLieElement':
        return AffLieElement(0.0, other.scale_rate * self.shift_rate - self.scale_rate * other.shift_rate)

    def adjoint(self, g: AffMap) -> 'AffLieElement':
        """Ad_g of this element (g X g^-1 in matrix form)."""
        return AffLieElement(self.scale_rate, g.scale * self.shift_rate - g.shift * self.scale_rate)

    def vector_field(self, w):
        return self.scale_rate * np.asarray(w, dtype=complex) + self.shift_rate

    @classmethod
    def from_derivative(cls, g: AffMap, dg: tuple[float, float]) -> 'AffLieElement':
        """Right logarithmic derivative (dg) g^-1 for dg = (d scale, d shift)."""
        dscale, dshift = dg
        rate = dscale / g.scale
        return cls(rate, dshift - g.shift * rate)


def hamiltonian_halfplane(gamma: AffLieElement, w):
    """theta_W(X_gamma) with theta_W = d re(w) / im(w)."""
    w = np.asarray(w, dtype=complex)
    if np.any(w.imag <= 0):
        raise DomainError('half-plane Hamiltonian needs im(w) > 0')
    return (gamma.scale_rate * w.real + gamma.shift_rate) / w.imag


def poisson_residual_halfplane(g1: AffLieElement, g2: AffLieElement, w: complex) -> float:
    """|{H_g1, H_g2} - H_[g1,g2]| for omega_W = d re ^ d im / im^2."""
    x, y = w.real, w.imag
    if y <= 0:
        raise DomainError('half-plane point needs im(w) > 0')

    def grad(g):
        return g.scale_rate / y, -(g.scale_rate * x + g.shift_rate) / y ** 2

    h1x, h1y = grad(g1)
    h2x, h2y = grad(g2)
    poisson = y ** 2 * (h1x * h2y - h1y * h2x)
    return float(abs(poisson - hamiltonian_halfplane(g1.bracket(g2), w)))


# ---------------------------------------------------------------------------
# PU(1,1)


def _canonical_pair(a: complex, b: complex) -> tuple[complex, complex]:
    det = abs(a) ** 2 - abs(b) ** 2
    if not det > 0:
        raise GeometryError(f'not an element of PU(1,1): |a|^2-|b|^2 = {det}')
    n = np.sqrt(det)
    a, b = complex(a) / n, complex(b) / n
    if a.real < 0 or (a.real == 0 and a.imag < 0):
        a, b = -a, -b
    return a, b


@dataclass(frozen=True)
class MoebiusMap:
    """Element [[a, b], [conj(b), conj(a)]] of PU(1,1), stored in canonical sign."""
    a: complex = 1.0
    b: complex = 0.0

    def __post_init__(self):
        a, b = _canonical_pair(self.a, self.b)
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    @classmethod
    def identity(cls) -> 'MoebiusMap':
        return cls(1.0, 0.0)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> 'MoebiusMap':
        """Read an element from any nonzero complex multiple of its matrix."""
        m = np.asarray(m, dtype=complex)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        m = m / np.sqrt(det)
        a = 0.5 * (m[0, 0] + np.conj(m[1, 1]))
        b = 0.5 * (m[0, 1] + np.conj(m[1, 0]))
        return cls(a, b)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [np.conj(self.b), np.conj(self.a)]], dtype=complex)

    @property
    def trace(self) -> float:
        return 2.0 * self.a.real

    def compose(self, other: 'MoebiusMap') -> 'MoebiusMap':
        """self after other."""
        a = self.a * other.a + self.b * np.conj(other.b)
        b = self.a * other.b + self.b * np.conj(other.a)
        return MoebiusMap(a, b)

    def inverse(self) -> 'MoebiusMap':
        return MoebiusMap(np.conj(self.a), -self.b)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        return (self.a * w + self.b) / (np.conj(self.b) * w + np.conj(self.a))

    def distance(self, other: 'MoebiusMap') -> float:
        """Frobenius distance of matrix representatives after sign alignment."""
        m, n = self.matrix(), other.matrix()
        return float(min(np.linalg.norm(m - n), np.linalg.norm(m + n)))


@dataclass(frozen=True)
class LieElement:
    """Element of su(1,1); see the module docstring for the convention."""
    alpha: float = 0.0
    beta: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'alpha', float(self.alpha))
        object.__setattr__(self, 'beta', complex(self.beta))

    def __add__(self, other: 'LieElement') -> 'LieElement':
        return LieElement(self.alpha + other.alpha, self.beta + other.beta)

    def __sub__(self, other: 'LieElement') -> 'LieElement':
        return self + (-other)

    def __neg__(self) -> 'LieElement':
        return LieElement(-self.alpha, -self.beta)

    def __mul__(self, c: float) -> 'LieElement':
        return LieElement(c * self.alpha, c * self.beta)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.hypot(self.alpha, abs(self.beta)))

    def matrix(self) -> np.ndarray:
        """Generating matrix of the flow in the fractional-linear action."""
        return np.array([[1j * self.alpha, np.conj(self.beta)],
                         [self.beta, -1j * self.alpha]], dtype=complex)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> 'LieElement':
        m = np.asarray(m, dtype=complex)
        alpha = 0.5 * (m[0, 0].imag - m[1, 1].imag)
        beta = 0.5 * (m[1, 0] + np.conj(m[0, 1]))
        return cls(alpha, beta)

    def exp(self, t: float = 1.0) -> MoebiusMap:
        return exp_lie(self, t)

    def bracket(self, other: 'LieElement') -> 'LieElement':
        return lie_bracket(self, other)

    def adjoint(self, g: MoebiusMap) -> 'LieElement':
        """Ad_g of this element."""
        m = g.matrix()
        return LieElement.from_matrix(m @ self.matrix() @ np.linalg.inv(m))

    def vector_field(self, w):
        return disc_field(self.alpha, self.beta, w)

    def hamiltonian(self, w):
        return disc_hamiltonian(self.alpha, self.beta, w)

    def boundary_speed(self, p: BoundaryPoint) -> float:
        """Angular velocity of the boundary flow at p: 2(alpha - im(beta w))."""
        return float(2.0 * (self.alpha - (self.beta * p.complex).imag))


# ---------------------------------------------------------------------------
# vectorized field helpers (arrays of alpha/beta and w broadcast together)


def disc_field(alpha, beta, w):
    w = np.asarray(w, dtype=complex)
    return -beta * w ** 2 + 2j * alpha * w + np.conj(beta)


def disc_hamiltonian(alpha, beta, w):
    w = np.asarray(w, dtype=complex)
    q = np.abs(w) ** 2
    if np.any(q >= 1.0):
        raise DomainError('disc Hamiltonian is defined on |w| < 1')
    return (0.5 * (1.0 + q) * alpha - (beta * w).imag) / (1.0 - q)


def disc_hamiltonian_gradient(alpha, beta, w):
    """(dH/dx, dH/dy) of the disc Hamiltonian."""
    w = np.asarray(w, dtype=complex)
    x, y = w.real, w.imag
    q = x ** 2 + y ** 2
    d = 1.0 - q
    beta = np.asarray(beta, dtype=complex)
    num = 0.5 * (1.0 + q) * alpha - (beta.real * y + beta.imag * x)
    hx = ((alpha * x - beta.imag) * d + 2.0 * x * num) / d ** 2
    hy = ((alpha * y - beta.real) * d + 2.0 * y * num) / d ** 2
    return hx, hy


def halfplane_field(scale_rate, shift_rate, w):
    return scale_rate * np.asarray(w, dtype=complex) + shift_rate


def halfplane_hamiltonian(scale_rate, shift_rate, w):
    w = np.asarray(w, dtype=complex)
    return (scale_rate * w.real + shift_rate) / w.imag


def moebius_arrays(a, b, w):
    """Apply arrays of PU(1,1) coefficients to arrays of points."""
    return (a * w + b) / (np.conj(b) * w + np.conj(a))


# ---------------------------------------------------------------------------
# operations


def compose(g: MoebiusMap, h: MoebiusMap) -> MoebiusMap:
    return g.compose(h)


def inverse(g: MoebiusMap) -> MoebiusMap:
    return g.inverse()


def act_disc(g: MoebiusMap, w: complex) -> complex:
    if abs(w) >= 1.0:
        raise DomainError(f'act_disc needs |w| < 1, got |w| = {abs(w)}')
    return complex(g(w))


def act_boundary(g: MoebiusMap, p: BoundaryPoint) -> BoundaryPoint:
    w = complex(g(p.complex))
    drift = abs(abs(w) - 1.0)
    if drift > NORM_TOL * max(1.0, abs(g.a) ** 2):
        raise ConsistencyError(f'boundary image left the unit circle by {drift:.3e}')
    return BoundaryPoint(float(np.angle(w)))


def classify(g: MoebiusMap, tol: float = DEFAULT_CLASSIFY_TOL) -> IsometryClass:
    if not tol > 0:
        raise PreconditionError('classification tolerance must be positive')
    if g.distance(MoebiusMap.identity()) < tol:
        return IsometryClass.IDENTITY
    tr = abs(g.trace)
    if tr > 2.0 + tol:
        return IsometryClass.HYPERBOLIC
    if tr < 2.0 - tol:
        return IsometryClass.ELLIPTIC
    return IsometryClass.PARABOLIC


def fixed_points(g: MoebiusMap, tol: float = DEFAULT_CLASSIFY_TOL) -> tuple[BoundaryPoint, BoundaryPoint]:
    """(l_small, l_big): boundary fixed points for the eigenvalues of modulus < 1 and > 1."""
    if classify(g, tol) is not IsometryClass.HYPERBOLIC:
        raise NotHyperbolicError(f'fixed_points needs a hyperbolic element (trace {g.trace:.6g})')
    c = g.a.real
    root = np.sqrt(c * c - 1.0)
    small = g.b / ((c - root) - g.a)
    big = g.b / ((c + root) - g.a)
    return BoundaryPoint(float(np.angle(small))), BoundaryPoint(float(np.angle(big)))


def exp_lie(gamma: LieElement, t: float = 1.0) -> MoebiusMap:
    """Closed-form exponential of t*gamma."""
    delta = abs(gamma.beta) ** 2 - gamma.alpha ** 2
    x = t * np.sqrt(complex(delta))
    if abs(x) < SMALL_ARG:
        c, sc = 1.0 + x * x / 2.0, 1.0 + x * x / 6.0
    else:
        c, sc = np.cosh(x), np.sinh(x) / x
    c, sc = float(np.real(c)), float(np.real(sc))
    a = c + 1j * gamma.alpha * t * sc
    b = np.conj(gamma.beta) * t * sc
    return MoebiusMap(a, b)


def log_moebius(g: MoebiusMap) -> LieElement:
    """Principal logarithm; valid away from elements with trace -2."""
    c = g.a.real
    if c > 1.0 + SMALL_ARG:
        k = np.arccosh(c)
        f = k / np.sinh(k)
    elif c < 1.0 - SMALL_ARG:
        k = np.arccos(c)
        f = k / np.sin(k)
    else:
        f = 1.0
    return LieElement(f * g.a.imag, f * np.conj(g.b))


def lie_bracket(g1: LieElement, g2: LieElement) -> LieElement:
    alpha = 2.0 * (g1.beta * np.conj(g2.beta)).imag
    beta = 2j * (g1.alpha * g2.beta - g2.alpha * g1.beta)
    return LieElement(alpha, beta)


def hamiltonian_disc(gamma: LieElement, w: complex) -> float:
    if abs(w) >= 1.0:
        raise DomainError(f'hamiltonian_disc needs |w| < 1, got |w| = {abs(w)}')
    return float(disc_hamiltonian(gamma.alpha, gamma.beta, w))


def vector_field_disc(gamma: LieElement, w: complex) -> complex:
    if abs(w) > 1.0 + NORM_TOL:
        raise DomainError('vector_field_disc is defined on the closed disc')
    return complex(disc_field(gamma.alpha, gamma.beta, w))


def vector_field_halfplane(gamma: AffLieElement, w: complex) -> complex:
    return complex(gamma.vector_field(w))


def poisson_bracket_disc(g1: LieElement, g2: LieElement, w, method: str = 'analytic', step: float = 1e-6):
    """{H_g1, H_g2}(w) for omega_B = d re ^ d im / (1-|w|^2)^2."""
    w = np.asarray(w, dtype=complex)
    if method == 'analytic':
        h1x, h1y = disc_hamiltonian_gradient(g1.alpha, g1.beta, w)
        h2x, h2y = disc_hamiltonian_gradient(g2.alpha, g2.beta, w)
    elif method == 'fd':
        def grad(g):
            hx = (disc_hamiltonian(g.alpha, g.beta, w + step) - disc_hamiltonian(g.alpha, g.beta, w - step)) / (2 * step)
            hy = (disc_hamiltonian(g.alpha, g.beta, w + 1j * step) - disc_hamiltonian(g.alpha, g.beta, w - 1j * step)) / (2 * step)
            return hx, hy
        h1x, h1y = grad(g1)
        h2x, h2y = grad(g2)
    else:
        raise ValueError(f'unknown gradient method {method!r}')
    return (1.0 - np.abs(w) ** 2) ** 2 * (h1x * h2y - h1y * h2x)


def poisson_residual(g1: LieElement, g2: LieElement, w, method: str = 'analytic'):
    if np.any(np.abs(w) >= 1.0):
        raise DomainError('poisson_residual needs |w| < 1')
    bracket = lie_bracket(g1, g2)
    return np.abs(poisson_bracket_disc(g1, g2, w, method) - disc_hamiltonian(bracket.alpha, bracket.beta, w))


# ---------------------------------------------------------------------------
# disc <-> half-plane


def cayley(w, allow_boundary: bool = False):
    """Biholomorphism B -> W with 0 -> i, 1 -> infinity, -1 -> 0."""
    w = np.asarray(w, dtype=complex)
    limit = np.abs(w) > 1.0 if allow_boundary else np.abs(w) >= 1.0
    if np.any(limit) or np.any(w == 1.0):
        raise DomainError('cayley is defined on the open disc')
    out = 1j * (1.0 + w) / (1.0 - w)
    return complex(out) if out.ndim == 0 else out


def cayley_inverse(z, allow_boundary: bool = False):
    z = np.asarray(z, dtype=complex)
    bad = z.imag < 0 if allow_boundary else z.imag <= 0
    if np.any(bad):
        raise DomainError('cayley_inverse is defined on the upper half-plane')
    out = (z - 1j) / (z + 1j)
    return complex(out) if out.ndim == 0 else out


_CAYLEY = np.array([[1j, 1j], [-1.0, 1.0]], dtype=complex)
_CAYLEY_INV = np.linalg.inv(_CAYLEY)


def affine_to_disc(g: AffMap) -> MoebiusMap:
    """Conjugate an affine map of W into the disc; the image fixes the boundary point 1."""
    return MoebiusMap.from_matrix(_CAYLEY_INV @ g.matrix().astype(complex) @ _CAYLEY)


def aff_lie_to_disc(gamma: AffLieElement) -> LieElement:
    traceless = np.array([[0.5 * gamma.scale_rate, gamma.shift_rate],
                          [0.0, -0.5 * gamma.scale_rate]], dtype=complex)
    return LieElement.from_matrix(_CAYLEY_INV @ traceless @ _CAYLEY)


def halfplane_angle(x):
    """Boundary angle in (0, 2pi) of a real point under the disc identification."""
    w = cayley_inverse(np.asarray(x, dtype=float) + 0j, allow_boundary=True)
    return np.mod(np.angle(w), TWO_PI)
