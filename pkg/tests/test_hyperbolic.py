import numpy as np
import pytest

from tests.conftest import random_disc_points, random_lie
from util.hyperbolic import (
    AffLieElement, AffMap, BoundaryPoint, DomainError, GeometryError, IsometryClass, LieElement, LiftedPoint,
    MoebiusMap, act_boundary, aff_lie_to_disc, affine_to_disc, cayley, cayley_inverse, classify, disc_field,
    disc_hamiltonian, exp_lie, fixed_points, halfplane_angle, halfplane_hamiltonian, lie_bracket, log_moebius,
    act_disc, hamiltonian_disc, hamiltonian_halfplane, on_open_arc, poisson_residual, poisson_residual_halfplane,
    vector_field_disc, vector_field_halfplane,
)


@pytest.mark.parametrize('s', [0.1, 1.0, 2.5])
def test_exp_of_translation_generator(s):
    g = exp_lie(LieElement(0.0, 1.0), s)
    assert g.a == pytest.approx(np.cosh(s))
    assert g.b == pytest.approx(np.sinh(s))


def test_exp_of_rotation_generator():
    g = exp_lie(LieElement(1.0, 0.0), 0.7)
    assert g.a == pytest.approx(np.exp(0.7j))
    assert abs(g.b) < 1e-15


def test_classification(h_family):
    g = h_family(1.0)
    assert classify(g) is IsometryClass.HYPERBOLIC
    assert abs(g.trace) == pytest.approx(2 * np.cosh(1.0))
    assert classify(exp_lie(LieElement(1.0, 0.0), 0.5)) is IsometryClass.ELLIPTIC
    assert classify(exp_lie(LieElement(1.0, 1j), 0.4)) is IsometryClass.PARABOLIC
    assert classify(MoebiusMap.identity()) is IsometryClass.IDENTITY


def test_classify_rejects_non_positive_tolerance(h_family):
    with pytest.raises(GeometryError):
        classify(h_family(1.0), tol=0.0)


def test_not_an_isometry():
    with pytest.raises(GeometryError):
        MoebiusMap(0.5, 1.0)


def test_fixed_points_of_translation(h_family):
    small, big = fixed_points(h_family(1.0))
    assert small.angle == pytest.approx(np.pi)
    assert np.cos(big.angle) == pytest.approx(1.0)


def test_fixed_points_are_fixed(rng):
    for _ in range(20):
        gamma = LieElement(0.1 * rng.normal(), complex(1.0 + rng.uniform(), rng.normal()))
        g = exp_lie(gamma)
        if classify(g) is not IsometryClass.HYPERBOLIC:
            continue
        for p in fixed_points(g):
            assert np.angle(act_boundary(g, p).complex / p.complex) == pytest.approx(0.0, abs=1e-9)


def test_bracket_example():
    out = lie_bracket(LieElement(1.0, 0.0), LieElement(0.0, 1.0))
    assert out.alpha == pytest.approx(0.0)
    assert out.beta == pytest.approx(2j)


def test_bracket_is_vector_field_bracket(rng):
    """[X1, X2] = X1 X2' - X2 X1' for holomorphic fields on the disc."""
    g1, g2 = random_lie(rng), random_lie(rng)
    w = random_disc_points(rng, 50)
    x1, x2 = disc_field(g1.alpha, g1.beta, w), disc_field(g2.alpha, g2.beta, w)
    d1, d2 = -2 * g1.beta * w + 2j * g1.alpha, -2 * g2.beta * w + 2j * g2.alpha
    b = lie_bracket(g1, g2)
    np.testing.assert_allclose(disc_field(b.alpha, b.beta, w), x1 * d2 - x2 * d1, atol=1e-12)


def test_poisson_homomorphism_analytic(rng):
    worst = 0.0
    for _ in range(1000):
        g1, g2 = random_lie(rng), random_lie(rng)
        w = random_disc_points(rng, 1)[0]
        worst = max(worst, float(poisson_residual(g1, g2, w)))
    assert worst < 1e-6


def test_poisson_homomorphism_finite_differences(rng):
    w = random_disc_points(rng, 200)
    g1, g2 = random_lie(rng), random_lie(rng)
    assert np.max(poisson_residual(g1, g2, w, method='fd')) < 1e-4


def test_poisson_homomorphism_halfplane(rng):
    for _ in range(100):
        g1 = AffLieElement(rng.normal(), rng.normal())
        g2 = AffLieElement(rng.normal(), rng.normal())
        w = complex(rng.normal(), rng.uniform(0.1, 3.0))
        assert poisson_residual_halfplane(g1, g2, w) < 1e-9


def test_hamiltonian_generates_field(rng):
    """dH(v) = omega(v, X) with omega = dx dy / (1 - |w|^2)^2."""
    step = 1e-6
    for _ in range(20):
        gamma = random_lie(rng)
        w = random_disc_points(rng, 1, 0.8)[0]
        x = disc_field(gamma.alpha, gamma.beta, w)
        for v in (1.0, 1j):
            dh = (disc_hamiltonian(gamma.alpha, gamma.beta, w + step * v)
                  - disc_hamiltonian(gamma.alpha, gamma.beta, w - step * v)) / (2 * step)
            omega = (np.conj(v) * x).imag / (1 - abs(w) ** 2) ** 2
            assert dh == pytest.approx(omega, rel=1e-6, abs=1e-7)


def test_hamiltonian_domain():
    with pytest.raises(DomainError):
        disc_hamiltonian(1.0, 0.0, 1.0 + 0j)


def test_log_inverts_exp(rng):
    for _ in range(20):
        gamma = random_lie(rng, 0.5)
        back = log_moebius(exp_lie(gamma))
        assert back.alpha == pytest.approx(gamma.alpha, abs=1e-10)
        assert back.beta == pytest.approx(gamma.beta, abs=1e-10)


def test_adjoint_conjugates_flow(rng):
    gamma = random_lie(rng)
    g = exp_lie(random_lie(rng))
    lhs = exp_lie(gamma.adjoint(g))
    rhs = g.compose(exp_lie(gamma)).compose(g.inverse())
    assert lhs.distance(rhs) < 1e-10


def test_boundary_action_stays_on_circle(h_family):
    p = act_boundary(h_family(2.0), BoundaryPoint(1.0))
    assert 0 <= p.angle < 2 * np.pi


def test_cayley_round_trip(rng):
    w = random_disc_points(rng, 30)
    assert cayley(0j) == pytest.approx(1j)
    np.testing.assert_allclose(cayley_inverse(cayley(w)), w, atol=1e-12)
    with pytest.raises(DomainError):
        cayley(1.0 + 0j)
    with pytest.raises(DomainError):
        cayley_inverse(-1j)


def test_halfplane_angle_increases():
    x = np.linspace(-50, 50, 101)
    angles = halfplane_angle(x)
    assert np.all(np.diff(angles) > 0)
    assert np.all((angles > 0) & (angles < 2 * np.pi))


def test_affine_embedding_pushes_fields_forward(rng):
    gamma = AffLieElement(rng.normal(), rng.normal())
    disc = aff_lie_to_disc(gamma)
    w = random_disc_points(rng, 20, 0.7)
    lhs = 2j / (1 - w) ** 2 * disc_field(disc.alpha, disc.beta, w)
    np.testing.assert_allclose(lhs, gamma.vector_field(cayley(w)), atol=1e-10)


def test_affine_embedding_fixes_one():
    g = affine_to_disc(AffMap(2.0, 0.5))
    assert complex(g(1.0)) == pytest.approx(1.0)


def test_hamiltonians_agree_under_cayley(rng):
    gamma = AffLieElement(0.4, -1.3)
    disc = aff_lie_to_disc(gamma)
    w = random_disc_points(rng, 10, 0.8)
    diff = halfplane_hamiltonian(gamma.scale_rate, gamma.shift_rate, cayley(w)) - 4 * disc_hamiltonian(
        disc.alpha, disc.beta, w)
    np.testing.assert_allclose(diff, diff[0], atol=1e-9)


def test_arcs_run_counterclockwise():
    assert on_open_arc(np.pi / 2, 0.0, np.pi)
    assert not on_open_arc(3 * np.pi / 2, 0.0, np.pi)
    assert on_open_arc(0.1, 3 * np.pi / 2, 0.5)


def test_lifted_points():
    p = LiftedPoint(1.0).shifted(2)
    assert p.value == pytest.approx(1.0 + 4 * np.pi)
    assert p.project().angle == pytest.approx(1.0)


def test_act_disc_domain():
    g = exp_lie(LieElement(0.3, 0.5 - 0.1j))
    assert abs(act_disc(g, 0.4 + 0.2j)) < 1
    with pytest.raises(DomainError):
        act_disc(g, 1.0 + 0j)


def test_disc_hamiltonian_values():
    assert hamiltonian_disc(LieElement(1.0, 0.0), 0j) == pytest.approx(0.5)
    assert hamiltonian_disc(LieElement(-0.7, 2 - 1j), 0j) == pytest.approx(-0.35)
    values = [hamiltonian_disc(LieElement(1.0, 0.0), complex(r)) for r in (0.9, 0.99, 0.999)]
    assert values[0] < values[1] < values[2]
    with pytest.raises(DomainError):
        hamiltonian_disc(LieElement(1.0, 0.0), 1j)


def test_translation_hamiltonian_vanishes_on_its_axis():
    x = np.linspace(-0.95, 0.95, 41)
    assert max(abs(hamiltonian_disc(LieElement(0.0, 0.8), complex(v))) for v in x) < 1e-10


@pytest.mark.parametrize('gamma, expected', [
    (AffLieElement(0.0, 1.0), lambda w: 1 / w.imag),
    (AffLieElement(1.0, 0.0), lambda w: w.real / w.imag),
    (AffLieElement(0.0, 0.0), lambda w: 0.0),
])
def test_halfplane_hamiltonian_values(gamma, expected):
    for w in (0.3 + 1j, -2 + 0.1j, 5 + 3j):
        assert hamiltonian_halfplane(gamma, w) == pytest.approx(expected(w))
    with pytest.raises(DomainError):
        hamiltonian_halfplane(gamma, 1.0 + 0j)


def test_disc_vector_field_is_the_flow_derivative(rng):
    step = 1e-5
    for _ in range(10):
        gamma = random_lie(rng, 1.0)
        w = complex(random_disc_points(rng, 1, 0.8)[0])
        fd = (act_disc(exp_lie(gamma, step), w) - act_disc(exp_lie(gamma, -step), w)) / (2 * step)
        assert abs(fd - vector_field_disc(gamma, w)) < 1e-6 * max(1.0, abs(fd))
    assert vector_field_disc(LieElement(1.0, 0.0), 0j) == 0
    assert vector_field_disc(LieElement(0.0, 1.0), 0j) == pytest.approx(1.0)
    assert vector_field_disc(LieElement(0.0, 1.0j), 0j) == pytest.approx(-1j)


def test_halfplane_vector_field_is_the_flow_derivative():
    gamma, w, step = AffLieElement(0.4, -1.3), 0.5 + 2j, 1e-6

    def flow(t):
        scale = np.exp(t * gamma.scale_rate)
        shift = gamma.shift_rate * np.expm1(t * gamma.scale_rate) / gamma.scale_rate
        return scale * w + shift

    fd = (flow(step) - flow(-step)) / (2 * step)
    assert vector_field_halfplane(gamma, w) == pytest.approx(fd, rel=1e-8)
