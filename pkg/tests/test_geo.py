import numpy as np
import pytest

from util.geo import (
    geodesic_arc, geodesic_between, geodesic_segment_points, germ_coordinate, germ_frame, germ_point,
    hyperbolic_distance_disc, hyperbolic_distance_halfplane,
)
from util.hyperbolic import BoundaryPoint, DomainError


def test_disc_distance_from_origin():
    assert hyperbolic_distance_disc(0j, np.tanh(0.8)) == pytest.approx(0.8)


def test_halfplane_distance_on_imaginary_axis():
    assert hyperbolic_distance_halfplane(1j, np.exp(1.3) * 1j) == pytest.approx(1.3)


def test_distance_domain():
    with pytest.raises(DomainError):
        hyperbolic_distance_disc(0j, 1.0 + 0j)


def test_standard_germ_is_the_real_diameter():
    sigma = np.array([-1.0, 0.0, 0.5, 2.0])
    np.testing.assert_allclose(germ_point(BoundaryPoint(0.0), 0j, sigma), np.tanh(sigma), atol=1e-15)


def test_germ_frame_takes_standard_germ_to_germ():
    endpoint, anchor = BoundaryPoint(2.0), 0.3 - 0.4j
    k = germ_frame(endpoint, anchor)
    assert complex(k(0.0)) == pytest.approx(anchor)
    assert complex(k(1.0)) == pytest.approx(endpoint.complex)


def test_germ_frame_rejects_boundary_anchor():
    with pytest.raises(DomainError):
        germ_frame(BoundaryPoint(0.0), 1.0 + 0j)


def test_germ_point_is_arclength_parametrized():
    endpoint, anchor = BoundaryPoint(4.0), -0.2 + 0.5j
    for sigma in (0.3, 1.0, 2.5):
        w = complex(germ_point(endpoint, anchor, sigma))
        assert hyperbolic_distance_disc(anchor, w) == pytest.approx(sigma, rel=1e-9)


def test_germ_coordinate_inverts_germ_point(rng):
    endpoint = BoundaryPoint(rng.uniform(0, 2 * np.pi))
    anchor = 0.5 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
    sigma = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(germ_coordinate(endpoint, anchor, germ_point(endpoint, anchor, sigma)), sigma,
                               atol=1e-9)


def test_germ_point_tends_to_endpoint():
    endpoint = BoundaryPoint(1.0)
    assert abs(complex(germ_point(endpoint, 0.2j, 20.0)) - endpoint.complex) < 1e-12


def test_geodesic_between_boundary_points_is_orthogonal():
    center, radius = geodesic_arc(np.exp(0.3j), np.exp(2.0j))
    assert abs(center) ** 2 == pytest.approx(1 + radius ** 2)


def test_diameter_has_no_circle():
    assert geodesic_arc(-0.5 + 0j, 0.7 + 0j) is None


def test_segment_endpoints():
    p, q = 0.1 + 0.2j, -0.4 + 0.3j
    pts = geodesic_segment_points(p, q, 16)
    assert pts[0] == pytest.approx(p)
    assert pts[-1] == pytest.approx(q)
    assert np.all(np.abs(pts) < 1)


def test_full_geodesic_stays_in_closed_disc():
    pts = geodesic_between(BoundaryPoint(0.5), BoundaryPoint(3.5))
    assert np.all(np.abs(pts) <= 1 + 1e-12)
