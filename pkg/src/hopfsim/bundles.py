"""Line bundles over projective space and the fibrewise isomorphism psi.

Two models of the same line bundle:

* the *associated* bundle ``S^(2l-1) x_U(1) C``, whose points are classes
  ``[(z, w)] = {(z e^(i rho), e^(-i rho) w)}`` of a sphere point and a fibre
  coordinate;
* the *tautological* bundle, whose points are pairs (ray, vector on that
  line) inside the trivial C^l bundle.

``psi([(z, w)]) = (ray(z), w z)`` maps one to the other; it is well defined
because ``(z e^(i rho), e^(-i rho) w)`` produces the same pair.  The inverse
reads the coefficient of the vector against the gauge-fixed representative
of the base ray.  Equality of associated points is *defined* through psi, so
any representatives of the same class compare equal.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from .errors import ContainmentError, DimensionMismatchError
from .hopf import include_ray
from .rays import ATOL, Ray, StateVector, ray_of


@dataclass(frozen=True, eq=False)
class TautologicalPoint:
    """A base ray together with a vector lying on its line.

    ``vector`` may be zero (the zero section); otherwise it must satisfy
    ``P v = v`` for the base projector ``P`` within ``tol``.
    """

    base: Ray
    vector: np.ndarray
    tol: InitVar[float] = ATOL

    def __post_init__(self, tol: float) -> None:
        vec = np.array(self.vector, dtype=complex).reshape(-1)
        if vec.size != self.base.dim:
            raise DimensionMismatchError(
                f"vector dim {vec.size} does not match base dim {self.base.dim}"
            )
        residue = float(np.max(np.abs(self.base.projector @ vec - vec)))
        if residue > tol:
            raise ContainmentError(
                f"vector is off the base line by {residue!r} (tol {tol!r})"
            )
        vec.setflags(write=False)
        object.__setattr__(self, "vector", vec)

    def isclose(self, other: "TautologicalPoint", tol: float = ATOL) -> bool:
        if self.base.dim != other.base.dim:
            return False
        return (
            float(np.max(np.abs(self.base.projector - other.base.projector))) <= tol
            and float(np.max(np.abs(self.vector - other.vector))) <= tol
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TautologicalPoint):
            return NotImplemented
        return self.isclose(other)


@dataclass(frozen=True, eq=False)
class AssociatedPoint:
    """A class ``[(z, w)]`` of the associated bundle, stored by representative.

    Any ``(z e^(i rho), e^(-i rho) w)`` represents the same point; equality
    therefore compares images under :func:`psi` rather than raw fields.
    """

    rep_z: StateVector
    rep_w: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "rep_w", complex(self.rep_w))

    def same_class(self, other: "AssociatedPoint", tol: float = ATOL) -> bool:
        return psi(self).isclose(psi(other), tol)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AssociatedPoint):
            return NotImplemented
        return self.same_class(other)


def psi(point: AssociatedPoint) -> TautologicalPoint:
    """Fibrewise isomorphism ``[(z, w)] -> (ray(z), w z)``."""
    return TautologicalPoint(
        ray_of(point.rep_z), point.rep_w * point.rep_z.components
    )


def psi_inverse(point: TautologicalPoint, *, tol: float = ATOL) -> AssociatedPoint:
    """Inverse isomorphism: representative ``(z0, lambda)`` with ``v = lambda z0``.

    ``z0`` is the gauge-fixed representative of the base ray and ``lambda``
    its coefficient in the stored vector.  Raises ``ContainmentError`` if the
    vector has drifted off the base line.
    """
    z0 = point.base.representative()
    residue = float(np.max(np.abs(point.base.projector @ point.vector - point.vector)))
    if residue > tol:
        raise ContainmentError(f"vector is off the base line by {residue!r}")
    coefficient = complex(np.vdot(z0.components, point.vector))
    return AssociatedPoint(z0, coefficient)


def bundle_projection(point: TautologicalPoint) -> Ray:
    """Bundle projection onto the base ray."""
    return point.base


def include_tautological(point: TautologicalPoint) -> TautologicalPoint:
    """Block inclusion of a CP^1 tautological point into the CP^3 bundle."""
    if point.base.dim != 2:
        raise DimensionMismatchError("include_tautological expects a CP^1 point")
    padded = np.concatenate([point.vector, np.zeros(2, dtype=complex)])
    return TautologicalPoint(include_ray(point.base), padded)
