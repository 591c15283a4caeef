"""Associated and tautological line bundles with the psi isomorphism."""

import numpy as np
import pytest

from hopfsim import (
    AssociatedPoint,
    ContainmentError,
    StateVector,
    TautologicalPoint,
    bundle_projection,
    hopf_project,
    include_tautological,
    psi,
    psi_inverse,
    ray_of,
)
from hopfsim.sampling import random_phase, random_state, stream

E1 = StateVector(np.array([1.0, 0.0], dtype=complex))


def test_psi_zero_section():
    image = psi(AssociatedPoint(E1, 0.0))
    np.testing.assert_array_equal(image.base.projector, [[1.0, 0.0], [0.0, 0.0]])
    np.testing.assert_array_equal(image.vector, [0.0, 0.0])


def test_psi_unit_fibre():
    image = psi(AssociatedPoint(E1, 1.0))
    np.testing.assert_array_equal(image.base.projector, [[1.0, 0.0], [0.0, 0.0]])
    np.testing.assert_allclose(image.vector, [1.0, 0.0], atol=1e-15)


def test_psi_representative_independence():
    phase = np.exp(1j * np.pi / 5.0)
    one = psi(AssociatedPoint(E1, 1.0))
    other = psi(
        AssociatedPoint(StateVector(phase * E1.components), 1.0 / phase)
    )
    assert one.isclose(other, tol=1e-12)


def test_psi_well_defined_on_random_classes():
    rng = stream(13, 920)
    for _ in range(1000):
        z = random_state(rng, 2 if rng.random() < 0.5 else 4)
        w = complex(rng.normal(), rng.normal())
        rho = np.exp(1j * random_phase(rng))
        a = psi(AssociatedPoint(z, w))
        b = psi(AssociatedPoint(StateVector(rho * z.components), w / rho))
        assert a.isclose(b, tol=1e-12)


def test_psi_inverse_solves_for_fibre_coordinate():
    point = TautologicalPoint(ray_of(E1), np.array([3.0 + 4.0j, 0.0]))
    back = psi_inverse(point)
    np.testing.assert_allclose(back.rep_z.components, [1.0, 0.0], atol=1e-12)
    assert back.rep_w == pytest.approx(3.0 + 4.0j, abs=1e-12)


def test_psi_inverse_zero_vector():
    point = TautologicalPoint(ray_of(E1), np.zeros(2, dtype=complex))
    back = psi_inverse(point)
    assert back.rep_w == 0.0
    np.testing.assert_allclose(back.rep_z.components, [1.0, 0.0], atol=1e-12)


def test_tautological_point_rejects_off_line_vector():
    with pytest.raises(ContainmentError):
        TautologicalPoint(ray_of(E1), np.array([0.0, 1.0], dtype=complex))


def test_roundtrips_both_ways():
    rng = stream(13, 921)
    for _ in range(1000):
        z = random_state(rng, 2 if rng.random() < 0.5 else 4)
        w = complex(rng.normal(), rng.normal())
        assoc = AssociatedPoint(z, w)
        taut = psi(assoc)
        again = psi(psi_inverse(taut))
        assert taut.isclose(again, tol=1e-12)
        assert psi_inverse(taut).same_class(assoc, tol=1e-12)


def test_projection_square():
    rng = stream(13, 922)
    for _ in range(200):
        z = random_state(rng, 4)
        w = complex(rng.normal(), rng.normal())
        via_bundle = bundle_projection(psi(AssociatedPoint(z, w)))
        np.testing.assert_allclose(
            via_bundle.projector, hopf_project(z).projector, atol=1e-12
        )


def test_fibre_linearity():
    rng = stream(13, 923)
    for _ in range(200):
        z = random_state(rng, 2)
        w1 = complex(rng.normal(), rng.normal())
        w2 = complex(rng.normal(), rng.normal())
        alpha = complex(rng.normal(), rng.normal())
        beta = complex(rng.normal(), rng.normal())
        combined = psi(AssociatedPoint(z, alpha * w1 + beta * w2)).vector
        split = alpha * psi(AssociatedPoint(z, w1)).vector + beta * psi(
            AssociatedPoint(z, w2)
        ).vector
        np.testing.assert_allclose(combined, split, atol=1e-12)


def test_class_equality_across_representatives():
    rng = stream(13, 924)
    for _ in range(100):
        z = random_state(rng, 2)
        w = complex(rng.normal(), rng.normal())
        rho = np.exp(1j * random_phase(rng))
        assert AssociatedPoint(z, w) == AssociatedPoint(
            StateVector(rho * z.components), w / rho
        )
        assert AssociatedPoint(z, w) != AssociatedPoint(z, w + 1.0)


def test_include_tautological_lands_in_block():
    point = TautologicalPoint(ray_of(E1), np.array([2.0j, 0.0]))
    big = include_tautological(point)
    assert big.base.dim == 4
    np.testing.assert_allclose(big.vector, [2.0j, 0.0, 0.0, 0.0], atol=1e-15)
    projected = bundle_projection(big)
    np.testing.assert_allclose(
        projected.projector[:2, :2], ray_of(E1).projector, atol=1e-15
    )
