"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for domain errors raised by hopfsim."""


class DimensionMismatchError(GeometryError):
    """Operands live in spaces of incompatible dimension."""


class NormalizationError(GeometryError):
    """A vector or direction fails its unit-norm requirement."""


class TangencyError(GeometryError):
    """A putative tangent vector is not tangent to the sphere."""


class ContainmentError(GeometryError):
    """A fibre vector does not lie on the line of its base ray."""


class MeshRefinementError(GeometryError):
    """A discretisation is too coarse for an unambiguous result."""


class LoopClosureError(GeometryError):
    """An operation requiring a closed loop received an open path."""


class TransportError(GeometryError):
    """A transport start vector does not sit over the path start."""


class InconsistentRecordError(GeometryError):
    """Fields of a measurement record contradict each other."""
