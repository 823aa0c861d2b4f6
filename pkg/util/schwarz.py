# Schwarz integral on the half-plane, Schwarz-Pick ratios, cylinder-length bound
import logging
import warnings
from typing import Callable, Sequence, Union

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from util.hyperbolic import DomainError, GeometryError

logger = logging.getLogger(__name__)

QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 1000
DECAY_RADIUS = 200.0

BoundaryFunction = Union[Callable[[float], float], tuple]


class QuadratureError(GeometryError):
    """Adaptive quadrature did not reach the requested accuracy."""


def _as_callable(gamma: BoundaryFunction) -> tuple[Callable[[float], float], tuple[float, float] | None]:
    """Callables pass through; (xs, values) samples become a piecewise-linear function supported on xs."""
    if callable(gamma):
        return gamma, None
    xs, values = (np.asarray(v, dtype=float) for v in gamma)
    if xs.ndim != 1 or xs.shape != values.shape or xs.size < 2:
        raise GeometryError('sampled boundary function needs matching 1-D arrays')
    return (lambda x: float(np.interp(x, xs, values, left=0.0, right=0.0))), (float(xs[0]), float(xs[-1]))


def _integrate(f: Callable[[float], float], a: float, b: float, breaks: Sequence[float]) -> float:
    inner = [p for p in breaks if a < p < b]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', IntegrationWarning)
        value, error = quad(f, a, b, points=inner or None, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    for w in caught:
        if not issubclass(w.category, IntegrationWarning):
            continue
        # roundoff means the tolerance is below what double precision resolves; the value is still usable
        if 'roundoff' in str(w.message):
            logger.debug('quadrature on [%g, %g] hit roundoff, error estimate %.2e', a, b, error)
            continue
        raise QuadratureError(f'quadrature on [{a}, {b}] did not converge: {w.message}')
    return value


def schwarz_integral(gamma: BoundaryFunction, z: complex, support: tuple[float, float] | None = None) -> complex:
    """(i/pi) * integral of gamma(x) dx / (z - x) over the support of gamma."""
    if z.imag <= 0:
        raise DomainError('the Schwarz integral is evaluated at im(z) > 0')
    f, sampled_support = _as_callable(gamma)
    support = support or sampled_support
    if support is None:
        raise GeometryError('a callable boundary function needs an explicit support interval')
    a, b = support
    x, y = z.real, z.imag

    def real_part(s):
        return f(s) * y / ((x - s) ** 2 + y ** 2)

    def imag_part(s):
        return f(s) * (x - s) / ((x - s) ** 2 + y ** 2)

    return complex(_integrate(real_part, a, b, [x]), _integrate(imag_part, a, b, [x])) / np.pi


def schwarz_integral_decaying(gamma: Callable[[float], float], z: complex, radius: float = DECAY_RADIUS,
                              extrapolate: bool = True) -> complex:
    """Schwarz integral of a function decaying like |x|^-2, truncated at +-R.

    With ``extrapolate`` the truncations at R and 2R are combined to cancel
    the leading R^-3 tail term.
    """
    near = schwarz_integral(gamma, z, (-radius, radius))
    if not extrapolate:
        return near
    far = schwarz_integral(gamma, z, (-2 * radius, 2 * radius))
    return (8 * far - near) / 7


def bump(x: float, center: float = 0.0, width: float = 1.0) -> float:
    """Smooth compactly supported test function on (center - width, center + width)."""
    r = (x - center) / width
    return float(np.exp(-1.0 / (1.0 - r * r))) if abs(r) < 1 else 0.0


def schwarz_pick_ratio(u: complex, du: complex, z: complex) -> float:
    """||Du||_W (1 - |z|^2) / 2 for a holomorphic u with derivative du at z."""
    if abs(z) >= 1:
        raise DomainError('Schwarz-Pick ratios are taken inside the unit disc')
    if u.imag <= 0:
        raise DomainError('u must take values in the upper half-plane')
    return float(abs(du) / u.imag * (1 - abs(z) ** 2) / 2)


def extremal_map(z):
    """The equality case u(z) = i(1+z)/(1-z) and its derivative."""
    z = np.asarray(z, dtype=complex)
    return 1j * (1 + z) / (1 - z), 2j / (1 - z) ** 2


def cylinder_bound(tau: float) -> float:
    """Length pi / (2 log(tau/2 + sqrt(tau^2/4 - 1))) beyond which no solution exists."""
    if not tau > 2:
        raise DomainError(f'cylinder_bound needs tau > 2, got {tau}')
    eps = tau - 2.0
    return float(np.pi / (2.0 * np.log1p(eps / 2.0 + np.sqrt(eps + eps * eps / 4.0))))
