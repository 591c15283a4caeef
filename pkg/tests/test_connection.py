"""Tangent splitting, parallel transport, holonomy, and Chern numbers."""

import numpy as np
import numpy.testing as npt
import pytest

from hopfsim import (
    ATOL,
    BaseLoop,
    ChernField,
    Direction,
    LoopClosureError,
    MeshRefinementError,
    ORIENTATION_SIGN,
    Ray,
    StateVector,
    TangencyError,
    TangentVector,
    TransportError,
    chern_field,
    chern_number,
    circular_distance,
    connection_form,
    dual_frame,
    expected_latitude_holonomy,
    holonomy,
    include_ray,
    include_sphere,
    latitude_curve,
    latitude_solid_angle,
    parallel_transport,
    parallel_transport_ode,
    power_frame,
    ray_of,
    spinor_of,
    split_tangent,
    tautological_frame,
    tensor_frame,
    trivial_frame,
    wrap_angle,
)
from hopfsim.sampling import random_state, stream

Z_AXIS = Direction(0.0, 0.0, 1.0)
UP = ray_of(StateVector(np.array([1.0, 0.0], dtype=complex)))
DOWN = ray_of(StateVector(np.array([0.0, 1.0], dtype=complex)))


def _tangent_at(z, rng):
    v = rng.standard_normal(z.dim) + 1j * rng.standard_normal(z.dim)
    v = v - np.real(np.vdot(z.components, v)) * z.components
    return TangentVector(z, v)


# -- splitting ---------------------------------------------------------------


def test_split_vertical_vector_on_sphere7():
    z = StateVector(np.array([1.0, 0.0, 0.0, 0.0], dtype=complex))
    x = np.array([2.5j, 0.0, 0.0, 0.0], dtype=complex)
    parts = split_tangent(TangentVector(z, x))
    npt.assert_array_equal(parts.vertical, x)
    npt.assert_array_equal(parts.horizontal, np.zeros(4, dtype=complex))


def test_split_horizontal_vector():
    z = StateVector(np.array([1.0, 0.0], dtype=complex))
    x = np.array([0.0, 3.0 + 1.0j], dtype=complex)
    parts = split_tangent(TangentVector(z, x))
    npt.assert_array_equal(parts.vertical, np.zeros(2, dtype=complex))
    npt.assert_array_equal(parts.horizontal, x)


def test_split_mixed_vector():
    z = StateVector(np.array([1.0, 0.0], dtype=complex))
    parts = split_tangent(TangentVector(z, np.array([1.0j, 1.0])))
    npt.assert_array_equal(parts.vertical, np.array([1.0j, 0.0]))
    npt.assert_array_equal(parts.horizontal, np.array([0.0, 1.0 + 0.0j]))


def test_split_exact_at_first_basis_vector():
    # at e_0 the arithmetic involves no cancellation; demand near-exactness
    for dim in (2, 4):
        e0 = np.zeros(dim, dtype=complex)
        e0[0] = 1.0
        z = StateVector(e0)
        x = np.zeros(dim, dtype=complex)
        x[0] = 0.75j
        x[1] = 1.0 - 2.0j
        parts = split_tangent(TangentVector(z, x))
        want_v = np.zeros(dim, dtype=complex)
        want_v[0] = 0.75j
        assert np.max(np.abs(parts.vertical - want_v)) <= 1e-14
        assert np.max(np.abs(parts.horizontal - (x - want_v))) <= 1e-14


def test_connection_form_examples():
    z2 = StateVector(np.array([1.0, 0.0], dtype=complex))
    assert connection_form(TangentVector(z2, np.array([1.0j, 1.0]))) == 1.0j
    assert connection_form(TangentVector(z2, np.array([0.0, 3.0 + 1.0j]))) == 0.0
    z4 = StateVector(np.array([1.0, 0.0, 0.0, 0.0], dtype=complex))
    assert connection_form(TangentVector(z4, np.array([2.5j, 0, 0, 0]))) == 2.5j


def test_tangent_vector_rejects_radial_component():
    z = StateVector(np.array([1.0, 0.0], dtype=complex))
    with pytest.raises(TangencyError):
        TangentVector(z, np.array([1.0, 0.0], dtype=complex))


def test_tangent_vector_rejects_dimension_mismatch():
    z = StateVector(np.array([1.0, 0.0], dtype=complex))
    with pytest.raises(TangencyError):
        TangentVector(z, np.array([1.0j, 0.0, 0.0], dtype=complex))


@pytest.mark.parametrize("dim", [2, 4])
def test_split_properties_random(dim):
    rng = stream(31, 930, dim)
    for _ in range(500):
        z = random_state(rng, dim)
        t = _tangent_at(z, rng)
        parts = split_tangent(t)
        # recomposition
        npt.assert_allclose(parts.vertical + parts.horizontal, t.vec, atol=1e-12)
        # vertical is (i real) z, horizontal is orthogonal to z
        omega = connection_form(t)
        assert abs(omega.real) <= 1e-12
        npt.assert_allclose(parts.vertical, omega * z.components, atol=1e-12)
        assert abs(np.vdot(z.components, parts.horizontal)) <= 1e-12
        assert abs(np.vdot(parts.vertical, parts.horizontal)) <= 1e-11
        # splitting a horizontal vector is the identity on it
        again = split_tangent(TangentVector(z, parts.horizontal, tol=1e-9))
        npt.assert_allclose(again.vertical, 0.0, atol=1e-11)
        npt.assert_allclose(again.horizontal, parts.horizontal, atol=1e-11)


# -- parallel transport ------------------------------------------------------


def test_transport_constant_path_is_identity():
    start = UP.representative()
    loop = BaseLoop.from_rays([UP, UP, UP])
    end = parallel_transport(start, loop)
    npt.assert_array_equal(end.components, start.components)


def test_transport_around_equator_flips_sign():
    loop = BaseLoop.latitude(Z_AXIS, np.pi / 2, 10_000)
    start = loop.rays[0].representative()
    end = parallel_transport(start, loop)
    assert np.max(np.abs(end.components + start.components)) <= 1e-9


def test_transport_preserves_norm_and_phase_equivariance():
    loop = BaseLoop.latitude(Z_AXIS, np.pi / 3, 5_000)
    start = loop.rays[0].representative()
    end = parallel_transport(start, loop)
    assert abs(np.linalg.norm(end.components) - 1.0) <= 1e-9
    rho = np.exp(0.7j)
    rotated = parallel_transport(StateVector(rho * start.components), loop)
    assert np.max(np.abs(rotated.components - rho * end.components)) <= 1e-9


def test_transport_commutes_with_sphere_inclusion():
    loop2 = BaseLoop.latitude(Z_AXIS, np.pi / 3, 5_000)
    start2 = loop2.rays[0].representative()
    end2 = parallel_transport(start2, loop2)
    loop4 = BaseLoop.from_rays([include_ray(r) for r in loop2.rays])
    end4 = parallel_transport(include_sphere(start2), loop4)
    assert np.max(np.abs(end4.components - include_sphere(end2).components)) <= 1e-9


def test_transport_rejects_start_off_first_ray():
    loop = BaseLoop.latitude(Z_AXIS, np.pi / 3, 100)
    with pytest.raises(TransportError):
        parallel_transport(DOWN.representative(), loop)


def test_coarse_path_rejected():
    # one quarter-circle hop between orthogonal rays cannot be lifted
    with pytest.raises(MeshRefinementError):
        BaseLoop.from_rays([UP, DOWN, UP])


def test_path_needs_two_points():
    with pytest.raises(MeshRefinementError):
        BaseLoop.from_rays([UP])


def test_latitude_needs_three_steps():
    with pytest.raises(MeshRefinementError):
        BaseLoop.latitude(Z_AXIS, np.pi / 3, 2)


def test_discrete_and_ode_transport_agree():
    cases = [(np.pi / 2, 10_000, 1e-8), (np.pi / 3, 40_000, 1e-8)]
    for theta, steps, tol in cases:
        curve, curve_dot = latitude_curve(Z_AXIS, theta)
        start = StateVector(curve(0.0))
        end_d = parallel_transport(start, BaseLoop.latitude(Z_AXIS, theta, steps))
        end_o = parallel_transport_ode(start, curve, curve_dot, steps=steps)
        assert np.max(np.abs(end_d.components - end_o.components)) <= tol


def test_ode_transport_rejects_start_off_curve():
    curve, curve_dot = latitude_curve(Z_AXIS, np.pi / 3)
    with pytest.raises(TransportError):
        parallel_transport_ode(DOWN.representative(), curve, curve_dot)


# -- holonomy ----------------------------------------------------------------


def test_point_loop_has_zero_holonomy():
    assert holonomy(BaseLoop.from_rays([UP] * 5)) == 0.0


def test_open_loop_rejected():
    lat = BaseLoop.latitude(Z_AXIS, np.pi / 3, 100)
    with pytest.raises(LoopClosureError):
        holonomy(BaseLoop.from_rays(lat.rays[:50]))


def test_orientation_convention():
    assert ORIENTATION_SIGN == -1
    assert latitude_solid_angle(np.pi / 2) == pytest.approx(2.0 * np.pi, abs=1e-15)
    assert expected_latitude_holonomy(np.pi / 3) == pytest.approx(
        -np.pi / 2, abs=1e-12
    )
    # solid angle 3 pi wraps to +pi/2
    assert expected_latitude_holonomy(2 * np.pi / 3) == pytest.approx(
        np.pi / 2, abs=1e-12
    )


@pytest.mark.parametrize(
    "theta",
    [np.pi / 6, np.pi / 3, np.pi / 2, 2 * np.pi / 3],
)
def test_latitude_holonomy_matches_half_solid_angle(theta):
    phase = holonomy(BaseLoop.latitude(Z_AXIS, theta, 10_000))
    assert circular_distance(phase, expected_latitude_holonomy(theta)) <= 1e-6


def test_holonomy_value_at_sixty_degrees():
    phase = holonomy(BaseLoop.latitude(Z_AXIS, np.pi / 3, 10_000))
    assert abs(phase - (-np.pi / 2)) <= 1e-6


def test_holonomy_off_axis_latitude():
    axis = Direction.from_array(np.array([1.0, 1.0, 1.0]), normalize=True)
    phase = holonomy(BaseLoop.latitude(axis, np.pi / 3, 10_000))
    assert circular_distance(phase, -np.pi / 2) <= 1e-6


def test_holonomy_discretization_error_shrinks_quadratically():
    target = expected_latitude_holonomy(np.pi / 3)
    coarse = circular_distance(
        holonomy(BaseLoop.latitude(Z_AXIS, np.pi / 3, 1_000)), target
    )
    fine = circular_distance(
        holonomy(BaseLoop.latitude(Z_AXIS, np.pi / 3, 10_000)), target
    )
    assert fine < coarse
    assert coarse / fine >= 50.0


def test_wrap_angle_and_circular_distance():
    assert wrap_angle(0.0) == 0.0
    assert wrap_angle(np.pi) == -np.pi
    assert wrap_angle(3 * np.pi) == -np.pi
    assert wrap_angle(np.pi + 0.1) == pytest.approx(-np.pi + 0.1, abs=1e-12)
    assert circular_distance(np.pi, -np.pi) == 0.0
    assert circular_distance(0.1, -0.1) == pytest.approx(0.2, abs=1e-12)


# -- Chern numbers -----------------------------------------------------------


def test_chern_numbers_of_named_bundles():
    for mesh in (16, 32):
        assert chern_number(trivial_frame, mesh) == 0
        assert chern_number(tautological_frame, mesh) == -1
        assert chern_number(dual_frame, mesh) == 1


def test_chern_number_of_powers():
    for k in (-2, -1, 0, 1, 2):
        assert chern_number(power_frame(k), 16) == k


def test_chern_additivity_under_tensor():
    mixed = tensor_frame(power_frame(2), power_frame(-1))
    assert chern_number(mixed, 16) == 1
    square = tensor_frame(dual_frame, dual_frame)
    assert chern_number(square, 16) == 2


def test_chern_number_is_mesh_stable():
    values = {chern_number(tautological_frame, mesh) for mesh in (16, 32, 64)}
    assert values == {-1}


def test_chern_field_details():
    field = chern_field(dual_frame, 32)
    assert isinstance(field, ChernField)
    assert field.number == 1
    assert abs(field.total_over_2pi - 1.0) <= 1e-6
    assert field.phases.shape == (32, 32)
    assert field.max_abs_phase < np.pi / 2
    # one extra theta row: plaquette rows run pole to pole
    assert field.thetas.shape[0] == 33
    assert field.phis.shape[0] == 32


def test_chern_mesh_too_coarse():
    with pytest.raises(MeshRefinementError):
        chern_field(tautological_frame, 4)


def test_chern_high_power_needs_fine_mesh():
    # |k| = 10 concentrates pi/2-sized plaquette phases at mesh 8
    with pytest.raises(MeshRefinementError):
        chern_number(power_frame(10), 8)
    assert chern_number(power_frame(10), 64) == 10


def test_chern_rejects_vanishing_frame():
    def bad(point):
        return np.zeros(2, dtype=complex)

    with pytest.raises(MeshRefinementError):
        chern_number(bad, 16)
