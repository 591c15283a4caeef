"""The complex Hopf maps S^3 -> CP^1 and S^7 -> CP^3.

The projection sends a unit vector to its complex line, realized numerically
as the rank-one projector z z^dagger, so invariance under the U(1) fibre
action z -> e^(i rho) z is exact.  The module also provides the standard
inclusions S^3 -> S^7 and CP^1 -> CP^3 (first two coordinates / top-left
block), the Bloch chart identifying CP^1 with the 2-sphere, and batch
deviation checks used by the ``fibration-check`` command and the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .rays import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Direction,
    Ray,
    StateVector,
    ray_of,
)
from .sampling import (
    PURPOSE_CHECK,
    random_direction,
    random_phase,
    random_state,
    stream,
)


@dataclass(frozen=True)
class BundleSpec:
    """Shape data of the U(1) bundle S^(2n-1) -> CP^(n-1).

    ``n = 2`` is the classic Hopf fibration S^3 -> CP^1, ``n = 4`` its
    two-spin analogue S^7 -> CP^3.
    """

    n: int

    def __post_init__(self) -> None:
        if int(self.n) < 1:
            raise ValueError("bundle needs n >= 1")
        object.__setattr__(self, "n", int(self.n))

    @property
    def sphere_dim(self) -> int:
        """Real dimension of the total space S^(2n-1)."""
        return 2 * self.n - 1

    @property
    def projective_dim(self) -> int:
        """Complex dimension of the base CP^(n-1)."""
        return self.n - 1

    @property
    def fibre_group(self) -> str:
        return "U(1)"


def hopf_project(z: StateVector) -> Ray:
    """Bundle projection: the complex line of ``z``, equal to ``ray_of(z)``."""
    return ray_of(z)


def fiber_at(p: Ray, samples: int) -> list[StateVector]:
    """Evenly spaced points of the U(1) fibre over ``p``.

    Returns ``samples`` vectors ``e^(2 pi i k / samples) z0`` for
    ``k = 0 .. samples - 1``, where ``z0`` is the gauge-fixed representative.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    z0 = p.representative().components
    return [
        StateVector(np.exp(2j * np.pi * k / samples) * z0) for k in range(samples)
    ]


def include_sphere(z: StateVector) -> StateVector:
    """Standard inclusion S^3 -> S^7, ``(z1, z2) -> (z1, z2, 0, 0)``."""
    if z.dim != 2:
        raise DimensionMismatchError(f"include_sphere expects dim 2, got {z.dim}")
    return StateVector(np.concatenate([z.components, np.zeros(2, dtype=complex)]))


def include_ray(p: Ray) -> Ray:
    """Standard inclusion CP^1 -> CP^3: the projector in the top-left block."""
    if p.dim != 2:
        raise DimensionMismatchError(f"include_ray expects dim 2, got {p.dim}")
    block = np.zeros((4, 4), dtype=complex)
    block[:2, :2] = p.projector
    return Ray(block)


def bloch_point(p: Ray) -> Direction:
    """Bloch chart CP^1 -> S^2: ``(tr P sigma_x, tr P sigma_y, tr P sigma_z)``."""
    if p.dim != 2:
        raise DimensionMismatchError(f"bloch_point expects dim 2, got {p.dim}")
    arr = p.projector
    return Direction(
        float(np.trace(arr @ PAULI_X).real),
        float(np.trace(arr @ PAULI_Y).real),
        float(np.trace(arr @ PAULI_Z).real),
        tol=1e-9,
    )


def ray_from_bloch(n: Direction) -> Ray:
    """Inverse Bloch chart: ``P = (1 + n . sigma) / 2``."""
    eye = np.eye(2, dtype=complex)
    return Ray(0.5 * (eye + n.x * PAULI_X + n.y * PAULI_Y + n.z * PAULI_Z))


def max_fibration_deviation(n: int, trials: int, seed: int) -> float:
    """Worst entrywise deviation of ``ray(e^(i rho) z)`` from ``ray(z)``.

    Draws ``trials`` random pairs (z, rho) on S^(2n-1) x [0, 2 pi).
    """
    rng = stream(seed, PURPOSE_CHECK, 0, n)
    worst = 0.0
    for _ in range(trials):
        z = random_state(rng, n)
        rho = random_phase(rng)
        shifted = StateVector(np.exp(1j * rho) * z.components)
        dev = float(
            np.max(np.abs(hopf_project(shifted).projector - hopf_project(z).projector))
        )
        worst = max(worst, dev)
    return worst


def max_inclusion_square_deviation(trials: int, seed: int) -> float:
    """Worst deviation of ``include_ray . hopf`` from ``hopf . include_sphere``.

    Both composites send S^3 into CP^3; on ``trials`` random points their
    projectors are compared entrywise.
    """
    rng = stream(seed, PURPOSE_CHECK, 1)
    worst = 0.0
    for _ in range(trials):
        z = random_state(rng, 2)
        left = include_ray(hopf_project(z)).projector
        right = hopf_project(include_sphere(z)).projector
        worst = max(worst, float(np.max(np.abs(left - right))))
    return worst


def max_bloch_roundtrip_deviation(trials: int, seed: int) -> float:
    """Worst deviation of ``bloch_point(ray_from_bloch(n))`` from ``n``."""
    rng = stream(seed, PURPOSE_CHECK, 2)
    worst = 0.0
    for _ in range(trials):
        n = random_direction(rng)
        back = bloch_point(ray_from_bloch(n))
        worst = max(worst, float(np.max(np.abs(back.as_array() - n.as_array()))))
    return worst
