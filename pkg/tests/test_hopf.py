"""Hopf projections, inclusions, and the Bloch correspondence."""

import numpy as np
import pytest

from hopfsim import (
    BundleSpec,
    Direction,
    StateVector,
    bloch_point,
    fiber_at,
    hopf_project,
    include_ray,
    include_sphere,
    max_bloch_roundtrip_deviation,
    max_fibration_deviation,
    max_inclusion_square_deviation,
    ray_from_bloch,
    ray_of,
)
from hopfsim.sampling import random_direction, random_phase, random_state, stream

UP = StateVector(np.array([1.0, 0.0], dtype=complex))
PLUS = StateVector(np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0))


def test_bundle_spec_dimensions():
    small, large = BundleSpec(2), BundleSpec(4)
    assert (small.sphere_dim, small.projective_dim) == (3, 1)
    assert (large.sphere_dim, large.projective_dim) == (7, 3)
    assert small.fibre_group == large.fibre_group == "U(1)"


def test_project_basis_vector():
    e1 = StateVector(np.array([1.0, 0.0, 0.0, 0.0], dtype=complex))
    np.testing.assert_array_equal(hopf_project(e1).projector, np.diag([1.0, 0, 0, 0]))


def test_project_phase_invariance():
    rng = stream(12, 910)
    for _ in range(200):
        z = random_state(rng, 4)
        rotated = StateVector(np.exp(1j * random_phase(rng)) * z.components)
        np.testing.assert_allclose(
            hopf_project(rotated).projector, hopf_project(z).projector, atol=1e-12
        )


def test_project_antisymmetric_state():
    state = StateVector(np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0))
    p = hopf_project(state).projector
    middle = np.array([[0.5, -0.5], [-0.5, 0.5]])
    np.testing.assert_allclose(p[1:3, 1:3], middle, atol=1e-15)
    mask = np.ones((4, 4), dtype=bool)
    mask[1:3, 1:3] = False
    assert np.max(np.abs(p[mask])) == 0.0


def test_fiber_at_phase_orbit():
    samples = fiber_at(ray_of(UP), 4)
    expected = [1.0, 1.0j, -1.0, -1.0j]
    assert len(samples) == 4
    for sample, phase in zip(samples, expected):
        np.testing.assert_allclose(sample.components, [phase, 0.0], atol=1e-12)
        np.testing.assert_allclose(
            hopf_project(sample).projector, ray_of(UP).projector, atol=1e-12
        )


def test_fiber_at_gauge_fixed_single_sample():
    samples = fiber_at(ray_of(PLUS), 1)
    assert len(samples) == 1
    np.testing.assert_allclose(samples[0].components, PLUS.components, atol=1e-12)


def test_fiber_at_rejects_zero_samples():
    with pytest.raises(ValueError):
        fiber_at(ray_of(UP), 0)


def test_include_sphere_oracles():
    np.testing.assert_array_equal(
        include_sphere(UP).components, [1.0, 0.0, 0.0, 0.0]
    )
    circular = StateVector(np.array([1.0, 1.0j]) / np.sqrt(2.0))
    embedded = include_sphere(circular).components
    np.testing.assert_allclose(embedded[:2], circular.components, atol=1e-15)
    assert embedded[2] == embedded[3] == 0.0


def test_include_ray_block_embedding():
    np.testing.assert_array_equal(
        include_ray(ray_of(UP)).projector, np.diag([1.0, 0, 0, 0])
    )
    big = include_ray(ray_of(PLUS)).projector
    np.testing.assert_allclose(big[:2, :2], ray_of(PLUS).projector, atol=1e-15)
    assert np.max(np.abs(big[2:, :])) == 0.0
    assert np.max(np.abs(big[:, 2:])) == 0.0


def test_inclusion_square_commutes_pointwise():
    # both composites computed independently on random points of S^3
    rng = stream(12, 911)
    for _ in range(200):
        z = random_state(rng, 2)
        left = include_ray(hopf_project(z)).projector
        right = hopf_project(include_sphere(z)).projector
        np.testing.assert_allclose(left, right, atol=1e-12)


def test_bloch_point_oracles():
    down = StateVector(np.array([0.0, 1.0], dtype=complex))
    circular = StateVector(np.array([1.0, 1.0j]) / np.sqrt(2.0))
    assert bloch_point(ray_of(UP)).as_array() == pytest.approx([0.0, 0.0, 1.0])
    assert bloch_point(ray_of(down)).as_array() == pytest.approx([0.0, 0.0, -1.0])
    assert bloch_point(ray_of(circular)).as_array() == pytest.approx(
        [0.0, 1.0, 0.0], abs=1e-12
    )


def test_bloch_roundtrip_both_ways():
    rng = stream(12, 912)
    for _ in range(200):
        n = random_direction(rng)
        back = bloch_point(ray_from_bloch(n))
        np.testing.assert_allclose(back.as_array(), n.as_array(), atol=1e-10)
        ray = ray_of(random_state(rng, 2))
        np.testing.assert_allclose(
            ray_from_bloch(bloch_point(ray)).projector, ray.projector, atol=1e-10
        )


def test_deviation_suites_near_machine_epsilon():
    assert max_fibration_deviation(2, 300, 5) <= 1e-12
    assert max_fibration_deviation(4, 300, 5) <= 1e-12
    assert max_inclusion_square_deviation(300, 5) <= 1e-12
    assert max_bloch_roundtrip_deviation(300, 5) <= 1e-10
