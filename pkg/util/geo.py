# hyperbolic distances, geodesic germs, geodesic arcs for rendering
import logging

import numpy as np

from util.hyperbolic import BoundaryPoint, DomainError, GeometryError, MoebiusMap

logger = logging.getLogger(__name__)

# germ_point clips tanh(sigma) this far from the unit circle
EDGE_EPS = 1e-15


def hyperbolic_distance_disc(p: complex, q: complex) -> float:
    """Distance for the metric |dw|/(1-|w|^2), i.e. half the curvature -1 distance."""
    if abs(p) >= 1 or abs(q) >= 1:
        raise DomainError('disc distance needs points with |w| < 1')
    ratio = abs(p - q) / abs(1 - np.conj(p) * q)
    return float(np.arctanh(ratio))


def hyperbolic_distance_halfplane(p: complex, q: complex) -> float:
    """Distance for the metric |dw|/im(w)."""
    if p.imag <= 0 or q.imag <= 0:
        raise DomainError('half-plane distance needs im(w) > 0')
    return float(np.arccosh(1 + abs(p - q) ** 2 / (2 * p.imag * q.imag)))


def germ_frame(endpoint: BoundaryPoint, anchor: complex) -> MoebiusMap:
    """Isometry taking 0 to the anchor and the boundary point 1 to the endpoint."""
    if abs(anchor) >= 1:
        raise DomainError(f'germ anchor must lie in the open disc, got {anchor}')
    e = endpoint.complex
    zeta = (e - anchor) / (1 - e * np.conj(anchor))
    half = np.sqrt(zeta)
    return MoebiusMap(half, anchor / half)


def germ_point(endpoint: BoundaryPoint, anchor: complex, sigma):
    """Point at signed arclength sigma from the anchor, positive towards the endpoint.

    Vectorized over sigma and, by broadcasting, over arrays of anchors and
    endpoint angles given as ``BoundaryPoint`` objects or raw angles.
    """
    angle = endpoint.angle if isinstance(endpoint, BoundaryPoint) else np.asarray(endpoint)
    anchor = np.asarray(anchor, dtype=complex)
    e = np.exp(1j * angle)
    zeta = (e - anchor) / (1 - e * np.conj(anchor))
    r = np.clip(np.tanh(sigma), -1 + EDGE_EPS, 1 - EDGE_EPS) * zeta
    return (r + anchor) / (1 + np.conj(anchor) * r)


def germ_coordinate(endpoint: BoundaryPoint, anchor: complex, w):
    """Signed arclength of the projection of w onto the germ's geodesic."""
    angle = endpoint.angle if isinstance(endpoint, BoundaryPoint) else np.asarray(endpoint)
    anchor = np.asarray(anchor, dtype=complex)
    e = np.exp(1j * angle)
    zeta = (e - anchor) / (1 - e * np.conj(anchor))
    moved = (np.asarray(w, dtype=complex) - anchor) / (1 - np.conj(anchor) * w)
    x = np.clip((np.conj(zeta) * moved).real, -1 + 1e-15, 1 - 1e-15)
    return np.arctanh(x)


def geodesic_arc(p: complex, q: complex):
    """Circle carrying the geodesic through p and q (points of the closed disc).

    Returns (center, radius), or None when the geodesic is a diameter.
    """
    # inversion of p in the unit circle lies on the same orthogonal circle
    if abs(p) < 1e-14:
        p, q = q, p
    if abs(p) < 1e-14 or abs((np.conj(p) * q).imag) < 1e-14 * max(abs(p), abs(q)):
        return None
    on_circle_p, on_circle_q = abs(abs(p) - 1) < 1e-12, abs(abs(q) - 1) < 1e-12
    if on_circle_p and on_circle_q:
        half_angle = 0.5 * abs(np.angle(q / p))
        mid = (p + q) / abs(p + q)
        return complex(mid / np.cos(half_angle)), float(np.tan(half_angle))
    pts = [p, q, p / abs(p) ** 2 if not on_circle_p else q / abs(q) ** 2]
    (x1, y1), (x2, y2), (x3, y3) = [(z.real, z.imag) for z in pts]
    d = 2 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2))
    if abs(d) < 1e-14:
        raise GeometryError('degenerate geodesic arc')
    s1, s2, s3 = x1 ** 2 + y1 ** 2, x2 ** 2 + y2 ** 2, x3 ** 2 + y3 ** 2
    cx = (s1 * (y2 - y3) + s2 * (y3 - y1) + s3 * (y1 - y2)) / d
    cy = (s1 * (x3 - x2) + s2 * (x1 - x3) + s3 * (x2 - x1)) / d
    center = complex(cx, cy)
    return center, float(abs(p - center))


def geodesic_segment_points(p: complex, q: complex, n: int = 64) -> np.ndarray:
    """Sample n points along the geodesic segment from p to q (closed disc)."""
    arc = geodesic_arc(p, q)
    if arc is None:
        return p + (q - p) * np.linspace(0, 1, n)
    center, radius = arc
    a0, a1 = np.angle(p - center), np.angle(q - center)
    delta = np.angle(np.exp(1j * (a1 - a0)))
    return center + radius * np.exp(1j * (a0 + delta * np.linspace(0, 1, n)))


def geodesic_between(e1: BoundaryPoint, e2: BoundaryPoint, n: int = 128) -> np.ndarray:
    """Full geodesic joining two boundary points."""
    return geodesic_segment_points(e1.complex, e2.complex, n)
