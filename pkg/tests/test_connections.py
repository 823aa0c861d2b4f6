import numpy as np
import pytest

from tests.conftest import random_disc_points, random_lie
from util.connections import (
    GaugeGrid, GaugePath, GridConnection, PathConnection, commutator_defect, concatenate_loops, flatness_residual,
    gauge_derivative, gauge_transform, holonomy, hyperbolic_generator, integrate_transport, lifted_holonomy_from_path,
    lifted_shift, manufactured_rotation_loop, manufactured_rotation_path, plaquette_curvature, reverse_connection,
    transport_path, transport_with_error, trivializing_gauge, unwind_trajectory,
)
from util.hyperbolic import (
    TWO_PI, AffLieElement, LieElement, LiftError, LiftedPoint, MoebiusMap, PreconditionError, exp_lie, on_open_arc,
)


def wobbly(t: float) -> LieElement:
    return LieElement(np.cos(TWO_PI * t), 0.5 * np.sin(TWO_PI * t) + 0.3j)


def test_constant_connection_transports_to_exponential():
    gamma = LieElement(0.4, 0.7 - 0.2j)
    g = integrate_transport(PathConnection.constant(gamma, 16))
    assert g.distance(exp_lie(gamma)) < 1e-12


def test_affine_constant_transport():
    gamma = AffLieElement(0.5, 1.0)
    g = integrate_transport(PathConnection.constant(gamma, 32))
    assert g.distance(gamma.exp()) < 1e-12


def polynomial(t: float) -> LieElement:
    return LieElement(0.5 * t, 0.8 * t ** 2 + 0.2j)


def spiral(t: float) -> LieElement:
    return LieElement(np.sin(3 * t), 0.6 * np.exp(2.5j * t))


def affine_wave(t: float) -> AffLieElement:
    return AffLieElement(np.cos(2 * t), np.sin(3 * t) + 0.5)


def rotation_loop(n: int) -> PathConnection:
    return manufactured_rotation_loop(LieElement(0.0, 0.7 + 0.2j), n)


TRANSPORT_CASES = {
    'wobbly': lambda n: PathConnection.from_function(wobbly, n + 1),
    'polynomial': lambda n: PathConnection.from_function(polynomial, n + 1),
    'spiral': lambda n: PathConnection.from_function(spiral, n + 1),
    'affine': lambda n: PathConnection.from_function(affine_wave, n + 1),
    'rotation-loop': rotation_loop,
}


@pytest.mark.parametrize('case', TRANSPORT_CASES)
def test_transport_is_second_order(case):
    build = TRANSPORT_CASES[case]
    if case == 'rotation-loop':
        reference = manufactured_rotation_path(LieElement(0.0, 0.7 + 0.2j), 1.0)
    else:
        reference = integrate_transport(build(2048))
    errors = [integrate_transport(build(n)).distance(reference) for n in (64, 128)]
    assert 3.0 <= errors[0] / errors[1] <= 5.0


@pytest.mark.parametrize('case', ['wobbly', 'spiral', 'affine'])
def test_fourth_order_transport(case):
    build = TRANSPORT_CASES[case]
    reference = transport_path(build(2048), order=4).end
    errors = [transport_path(build(n), order=4).end.distance(reference) for n in (32, 64)]
    assert 12.0 <= errors[0] / errors[1] <= 20.0


def test_quadratic_gauge_path_is_transported_exactly():
    gamma = LieElement(0.4, -0.3 + 0.6j)
    A = PathConnection.from_function(lambda t: gamma * (2 * t), 65)
    for t in (0.3, 0.5, 0.77, 1.0):
        assert integrate_transport(A, 0.0, t).distance(exp_lie(gamma, t * t)) < 1e-12


def test_richardson_estimate_tracks_error():
    A = PathConnection.from_function(wobbly, 65)
    reference = integrate_transport(A, substeps=32)
    g, estimate = transport_with_error(A)
    assert 0.5 * estimate < g.distance(reference) < 2 * estimate


def test_transport_concatenates_at_a_node():
    A = PathConnection.from_function(wobbly, 65)
    whole = integrate_transport(A)
    split = integrate_transport(A, 0.5, 1.0).compose(integrate_transport(A, 0.0, 0.5))
    assert whole.distance(split) < 1e-12


@pytest.mark.parametrize('t1', [0.1234, 0.5001, 0.87654])
def test_transport_concatenates_between_nodes(t1):
    A = PathConnection.from_function(wobbly, 4097)
    whole = integrate_transport(A)
    split = integrate_transport(A, t1, 1.0).compose(integrate_transport(A, 0.0, t1))
    assert whole.distance(split) < 1e-10


def test_transport_rejects_bad_times():
    A = PathConnection.constant(LieElement(0.0, 1.0), 8)
    with pytest.raises(PreconditionError):
        integrate_transport(A, 0.5, 1.5)
    with pytest.raises(PreconditionError):
        integrate_transport(A, 0.7, 0.2)


def test_reversed_connection_transports_to_inverse():
    A = PathConnection.from_function(wobbly, 65)
    g = integrate_transport(A)
    assert integrate_transport(reverse_connection(A)).distance(g.inverse()) < 1e-10


def test_mixed_samples_rejected():
    with pytest.raises(PreconditionError):
        PathConnection((LieElement(0.0, 1.0), AffLieElement(0.0, 1.0)))


@pytest.mark.parametrize('tau', [2.1, 3.0, 10.0])
def test_manufactured_loop_holonomy(tau):
    h = holonomy(manufactured_rotation_loop(hyperbolic_generator(tau)))
    assert abs(h.element.trace) == pytest.approx(tau, rel=1e-3)
    assert h.rotation_number == 1


def test_winding_two_loop():
    h = holonomy(manufactured_rotation_loop(hyperbolic_generator(3.0), 512, winding=2))
    assert h.rotation_number == 2


def test_concatenated_loop_squares_holonomy():
    A = manufactured_rotation_loop(hyperbolic_generator(3.0))
    h = holonomy(A)
    twice = holonomy(concatenate_loops(A, A))
    assert twice.element.distance(h.element.compose(h.element)) < 1e-9
    assert twice.rotation_number == 2


def test_holonomy_needs_a_loop():
    with pytest.raises(PreconditionError):
        holonomy(PathConnection.constant(LieElement(0.0, 1.0), 8))


@pytest.mark.parametrize('n, tol', [(257, 1e-3), (2048, 1e-6)])
def test_trivializing_gauge_kills_connection(n, tol):
    A = PathConnection.from_function(wobbly, n)
    moved = gauge_transform(trivializing_gauge(A), A)
    assert max(a.norm() for a in moved.samples) < tol


def test_gauge_derivative_is_fourth_order():
    gamma = LieElement(0.4, 0.2 + 0.1j)

    def residual(n):
        t = np.linspace(0.0, 1.0, n)
        phi = GaugePath(tuple(exp_lie(gamma, float(np.sin(2 * x))) for x in t))
        exact = [gamma * (2 * np.cos(2 * x)) for x in t]
        return max((d - e).norm() for d, e in zip(gauge_derivative(phi), exact))

    assert residual(65) / residual(129) == pytest.approx(16.0, rel=0.25)


def test_gauge_derivative_needs_five_nodes():
    with pytest.raises(PreconditionError):
        gauge_derivative(GaugePath(tuple(MoebiusMap.identity() for _ in range(4))))


def interval_gauge(n: int) -> GaugePath:
    gamma, base = LieElement(0.4, 0.2 + 0.1j), exp_lie(LieElement(-0.2, 0.3 + 0.3j))
    t = np.linspace(0.0, 1.0, n)
    return GaugePath(tuple(exp_lie(gamma, 0.3 * np.sin(TWO_PI * x) + x).compose(base) for x in t))


def test_gauge_covariance_on_an_interval():
    n = 2049
    A = PathConnection.from_function(spiral, n)
    phi = interval_gauge(n)
    moved = gauge_transform(phi, A)
    before, after = transport_path(A, order=4).samples, transport_path(moved, order=4).samples
    for k0, k1 in [(0, n - 1), (512, 1536), (100, 1900)]:
        expected = phi.samples[k1].compose(before[k1]).compose(before[k0].inverse()).compose(phi.samples[k0].inverse())
        assert after[k1].compose(after[k0].inverse()).distance(expected) < 1e-8


@pytest.mark.parametrize('offset', [None, LieElement(0.3, 0.5 - 0.4j)])
def test_loop_gauge_conjugates_holonomy(offset):
    n = 2048
    A = manufactured_rotation_loop(hyperbolic_generator(3.0), n)
    g = MoebiusMap.identity() if offset is None else exp_lie(offset)
    gamma = LieElement(0.4, 0.2 + 0.1j)
    phi = GaugePath(tuple(exp_lie(gamma, 0.3 * np.sin(TWO_PI * k / n)).compose(g) for k in range(n)), 'circle')
    moved = gauge_transform(phi, A)
    h, k = holonomy(A, order=4), holonomy(moved, order=4)
    assert k.element.distance(g.compose(h.element).compose(g.inverse())) < 1e-6
    assert k.rotation_number == h.rotation_number


def test_trivializing_gauge_needs_an_interval():
    with pytest.raises(PreconditionError):
        trivializing_gauge(manufactured_rotation_loop(hyperbolic_generator(3.0), 16))


def test_constant_gauge_conjugates_holonomy():
    A = manufactured_rotation_loop(hyperbolic_generator(3.0))
    g = exp_lie(LieElement(0.3, 0.5 - 0.4j))
    moved = gauge_transform(GaugePath(tuple(g for _ in range(A.n)), 'circle'), A)
    h, k = holonomy(A), holonomy(moved)
    assert k.element.distance(g.compose(h.element).compose(g.inverse())) < 1e-9
    assert k.rotation_number == h.rotation_number


def test_gauge_path_must_match():
    A = PathConnection.constant(LieElement(0.0, 1.0), 8)
    with pytest.raises(PreconditionError):
        gauge_transform(GaugePath(tuple(MoebiusMap.identity() for _ in range(5))), A)


def translation_holonomy():
    return lifted_holonomy_from_path(transport_path(PathConnection.constant(LieElement(0.0, 1.0), 64)))


def test_lifted_shift_signs():
    h = translation_holonomy()
    assert h.rotation_number == 0
    assert lifted_shift(h, LiftedPoint(np.pi / 2)) < 0
    assert lifted_shift(h, LiftedPoint(3 * np.pi / 2)) > 0


def test_fixed_points_shift_by_full_turns():
    h = holonomy(manufactured_rotation_loop(hyperbolic_generator(3.0)))
    for p in h.fixed_points():
        assert lifted_shift(h, LiftedPoint(p.angle)) == pytest.approx(TWO_PI, abs=1e-6)


def test_shift_trichotomy(rng):
    h = holonomy(manufactured_rotation_loop(hyperbolic_generator(3.0)))
    small, big = h.fixed_points()
    x = rng.uniform(0, TWO_PI, 1000)
    gap = np.minimum(np.abs(np.angle(np.exp(1j * (x - small.angle)))), np.abs(np.angle(np.exp(1j * (x - big.angle)))))
    x = x[gap > 1e-3]
    excess = h.apply(x) - x - TWO_PI * h.rotation_number
    inside = on_open_arc(x, big.angle, small.angle)
    assert np.all(excess[inside] < 0)
    assert np.all(excess[~inside] > 0)


def test_inverse_apply_undoes_apply():
    h = holonomy(manufactured_rotation_loop(hyperbolic_generator(3.0)))
    x = np.linspace(-4, 9, 11)
    np.testing.assert_allclose(h.inverse_apply(h.apply(x)), x, atol=1e-9)


def test_unwinding_refuses_coarse_paths():
    half_turn = exp_lie(LieElement(np.pi / 2, 0.0))
    with pytest.raises(LiftError):
        unwind_trajectory([MoebiusMap.identity(), half_turn], 0.0)
    with pytest.raises(PreconditionError):
        unwind_trajectory([half_turn, MoebiusMap.identity()], 0.0)


def test_pure_gauge_field_is_flat(rng):
    g1, g2 = LieElement(0.3, 0.2 + 0.1j), LieElement(-0.2, 0.4j)
    grid = GaugeGrid.build(lambda s, t: exp_lie(g1, s).compose(exp_lie(g2, t)), (33, 33))
    nodes = [(int(i), int(j)) for i, j in rng.integers(1, 32, size=(25, 2))]
    residual = flatness_residual(grid, nodes, random_disc_points(rng, 25, 0.5))
    assert np.max(residual) < 1e-3


def test_pure_gauge_plaquettes_close():
    g1, g2 = LieElement(0.3, 0.2 + 0.1j), LieElement(-0.2, 0.4j)
    grid = GaugeGrid.build(lambda s, t: exp_lie(g1, s).compose(exp_lie(g2, t)), (9, 9))
    assert plaquette_curvature(grid) < 1e-6


def test_constant_connection_curvature_is_commutator():
    g1, g2 = LieElement(0.5, 0.3j), LieElement(0.0, 0.8 - 0.1j)
    conn = GridConnection.constant(g1, g2, (3, 3))
    assert plaquette_curvature(conn, 0.01, 0.01) == pytest.approx(commutator_defect(g1, g2), rel=0.1)


def test_interior_nodes_only():
    grid = GaugeGrid.build(lambda s, t: exp_lie(LieElement(0.0, 1.0), s + t), (5, 5))
    with pytest.raises(PreconditionError):
        flatness_residual(grid, [(0, 2)], [0j])


def test_reversed_loop_negates_rotation_number():
    A = manufactured_rotation_loop(hyperbolic_generator(3.0))
    h, r = holonomy(A), holonomy(reverse_connection(A))
    assert r.rotation_number == -h.rotation_number == -1
    assert r.element.distance(h.element.inverse()) < 1e-9


def test_shift_trichotomy_across_holonomies(rng):
    for _ in range(10):
        tau = rng.uniform(2.1, 10.0)
        frame = exp_lie(random_lie(rng, 0.5))
        h = holonomy(manufactured_rotation_loop(hyperbolic_generator(tau), frame=frame))
        small, big = h.fixed_points()
        x = rng.uniform(-TWO_PI, 2 * TWO_PI, 100)
        gap = np.minimum(np.abs(np.angle(np.exp(1j * (x - small.angle)))),
                         np.abs(np.angle(np.exp(1j * (x - big.angle)))))
        x = x[gap > 1e-3]
        excess = h.apply(x) - x - TWO_PI * h.rotation_number
        inside = on_open_arc(x, big.angle, small.angle)
        assert np.all((-TWO_PI < excess[inside]) & (excess[inside] < 0))
        assert np.all((0 < excess[~inside]) & (excess[~inside] < TWO_PI))


def twisted_field(s: float, t: float) -> MoebiusMap:
    return exp_lie(LieElement(0.3, 0.2 + 0.1j), s + t * t).compose(exp_lie(LieElement(-0.2, 0.4j), s * t))


def test_plaquette_curvature_refines_at_second_order():
    curvature = [plaquette_curvature(GaugeGrid.build(twisted_field, (n, n))) for n in (9, 17, 33)]
    for coarse, fine in zip(curvature[:-1], curvature[1:]):
        assert 3.0 <= coarse / fine <= 5.0


def test_flatness_residual_refines_at_second_order():
    w = np.array([0.3 + 0.2j, -0.4j])
    residuals = []
    for n in (9, 17, 33):
        grid = GaugeGrid.build(twisted_field, (n, n))
        residuals.append(flatness_residual(grid, [(n // 2, n // 2)] * 2, w))
    for coarse, fine in zip(residuals[:-1], residuals[1:]):
        np.testing.assert_array_less(3.0, coarse / fine)
        np.testing.assert_array_less(coarse / fine, 5.0)
