"""State vectors, projective rays, and measurement directions.

Conventions fixed here and relied on everywhere else in the package:

* Hermitian inner products are conjugate linear in the *first* slot,
  ``<a, b> = sum_i conj(a_i) b_i``.
* Two-spin tensor components are ordered lexicographically,
  ``(i, j) -> 2 i + j``, i.e. basis order (uu, ud, du, dd).
* Gauge fixing: the canonical representative of a ray is scaled by a phase
  so that its first component of modulus above ``GAUGE_THRESHOLD`` becomes
  real and non-negative.

Rays are stored as rank-one Hermitian projectors rather than as gauge-fixed
vectors.  That makes phase invariance exact by construction and turns ray
equality into a plain matrix comparison.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from .errors import DimensionMismatchError, NormalizationError

#: Default tolerance for algebraic identities.
ATOL = 1e-12

#: Modulus below which a component counts as zero during gauge fixing.
GAUGE_THRESHOLD = 1e-10

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def fix_phase(vector: np.ndarray, threshold: float = GAUGE_THRESHOLD) -> np.ndarray:
    """Rotate a global phase so the first non-negligible component is real >= 0.

    The first component with modulus above ``threshold`` is the pivot; the
    whole vector is multiplied by the conjugate of the pivot's phase.  Applied
    to two representatives of the same ray this yields identical arrays up to
    roundoff, which is what makes the representative of a :class:`Ray`
    canonical.
    """
    v = np.asarray(vector, dtype=complex)
    above = np.flatnonzero(np.abs(v) > threshold)
    j = int(above[0]) if above.size else int(np.argmax(np.abs(v)))
    pivot = v[j]
    if pivot == 0:
        return v.copy()
    return v * (np.conj(pivot) / abs(pivot))


@dataclass(frozen=True, eq=False)
class StateVector:
    """A unit vector in C^n, i.e. a point of the sphere S^(2n-1).

    Parameters
    ----------
    components : array_like of complex, shape (n,)
        Coordinates in the standard basis.  Must have unit norm within
        ``tol``; no silent renormalization is performed.
    """

    components: np.ndarray
    tol: InitVar[float] = ATOL

    def __post_init__(self, tol: float) -> None:
        arr = np.array(self.components, dtype=complex).reshape(-1)
        if arr.size == 0:
            raise DimensionMismatchError("a state vector needs at least one component")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > tol:
            raise NormalizationError(f"|z| = {norm!r}, expected 1 within {tol!r}")
        object.__setattr__(self, "components", _frozen(arr))

    @property
    def dim(self) -> int:
        return int(self.components.size)

    def __repr__(self) -> str:  # keeps test failure output readable
        return f"StateVector({np.array2string(self.components, precision=6)})"


@dataclass(frozen=True, eq=False)
class Ray:
    """A point of complex projective space, stored as a rank-one projector.

    The projector form z z^dagger of a unit vector z is invariant under
    z -> e^(i rho) z, so two state vectors project to equal rays exactly when
    they differ by a global phase.

    Parameters
    ----------
    projector : array_like of complex, shape (n, n)
        Hermitian idempotent matrix of unit trace, validated within ``tol``.
    """

    projector: np.ndarray
    tol: InitVar[float] = ATOL

    def __post_init__(self, tol: float) -> None:
        arr = np.array(self.projector, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatchError(f"projector must be square, got shape {arr.shape}")
        if np.max(np.abs(arr - arr.conj().T)) > tol:
            raise NormalizationError("projector is not Hermitian")
        if np.max(np.abs(arr @ arr - arr)) > tol:
            raise NormalizationError("projector is not idempotent")
        if abs(np.trace(arr).real - 1.0) > tol or abs(np.trace(arr).imag) > tol:
            raise NormalizationError("projector must have unit trace (rank one)")
        object.__setattr__(self, "projector", _frozen(arr))

    @property
    def dim(self) -> int:
        return int(self.projector.shape[0])

    def representative(self, threshold: float = GAUGE_THRESHOLD) -> StateVector:
        """Gauge-fixed unit vector spanning the line of this ray.

        Extracted from the dominant column of the projector, then phase
        fixed; independent of which unit vector produced the projector.
        """
        diag = np.real(np.diag(self.projector))
        j = int(np.argmax(diag))
        column = np.asarray(self.projector[:, j])
        return StateVector(fix_phase(column / np.linalg.norm(column), threshold))

    def __repr__(self) -> str:
        return f"Ray(dim={self.dim})"


@dataclass(frozen=True)
class Direction:
    """A unit vector in R^3, used as a spin measurement axis."""

    x: float
    y: float
    z: float
    tol: InitVar[float] = ATOL

    def __post_init__(self, tol: float) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))
        norm = float(np.sqrt(self.x**2 + self.y**2 + self.z**2))
        if abs(norm - 1.0) > tol:
            raise NormalizationError(f"|n| = {norm!r}, expected 1 within {tol!r}")

    @classmethod
    def from_array(cls, values, *, normalize: bool = False, tol: float = ATOL) -> "Direction":
        v = np.asarray(values, dtype=float).reshape(-1)
        if v.size != 3:
            raise DimensionMismatchError("a direction needs exactly three components")
        if normalize:
            norm = float(np.linalg.norm(v))
            if norm == 0.0:
                raise NormalizationError("cannot normalize the zero vector")
            v = v / norm
        return cls(v[0], v[1], v[2], tol)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def hermitian_inner(a: StateVector, b: StateVector) -> complex:
    """Inner product ``sum_i conj(a_i) b_i``, conjugate linear in ``a``."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.components, b.components))


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    """Two-spin composite ``a (x) b`` with index order (i, j) -> 2 i + j."""
    if a.dim != 2 or b.dim != 2:
        raise DimensionMismatchError("tensor_product combines two single-spin states")
    return StateVector(np.kron(a.components, b.components))


def ray_of(z: StateVector) -> Ray:
    """Projective class of ``z`` as the projector ``z z^dagger``."""
    v = z.components
    return Ray(np.outer(v, np.conj(v)))


def ray_overlap(p: Ray, q: Ray) -> float:
    """Transition probability ``trace(P Q)``, clipped into [0, 1]."""
    if p.dim != q.dim:
        raise DimensionMismatchError(f"dimensions differ: {p.dim} vs {q.dim}")
    val = float(np.real(np.trace(p.projector @ q.projector)))
    return min(max(val, 0.0), 1.0)


def fubini_study_distance(p: Ray, q: Ray) -> float:
    """Geodesic distance ``arccos(sqrt(trace(P Q)))`` in [0, pi/2]."""
    return float(np.arccos(np.sqrt(ray_overlap(p, q))))


def pauli_dot(n: Direction) -> np.ndarray:
    """The 2x2 Hermitian matrix ``n . sigma`` (standard Pauli matrices)."""
    return n.x * PAULI_X + n.y * PAULI_Y + n.z * PAULI_Z


def spinor_of(n: Direction, sign: int) -> StateVector:
    """Gauge-fixed eigenspinor of ``n . sigma`` with eigenvalue ``sign``.

    Parameters
    ----------
    n : Direction
        Measurement axis.
    sign : int
        +1 or -1, the requested eigenvalue.

    Returns
    -------
    StateVector
        Unit eigenvector, phase fixed so its first component of modulus
        above ``GAUGE_THRESHOLD`` is real and non-negative.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    _, vectors = np.linalg.eigh(pauli_dot(n))
    # eigh returns eigenvalues in ascending order: column 0 <-> -1, column 1 <-> +1
    column = vectors[:, 1 if sign > 0 else 0]
    return StateVector(fix_phase(column))
