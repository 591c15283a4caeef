"""Metric connection on the Hopf bundles.

The round metric ``<z, z'> = sum_i conj(z_i) z'_i`` splits each tangent
space of S^(2n-1) into a vertical line along the fibre direction ``i z`` and
its orthogonal horizontal complement:

* ``vertical(X) = <z, X> z``  (the connection form is ``omega(X) = <z, X>``,
  purely imaginary on tangent vectors);
* ``horizontal(X) = X - vertical(X)``.

Parallel transport moves a lift along a path of base rays while keeping its
velocity horizontal.  Two independent schemes are provided: the discrete
projector scheme (project onto the next line, renormalize) and a classic
RK4 integration of the horizontal-lift ODE along a smooth representative
curve.  They are cross-checked in the tests; neither is derived from the
other.

The loop holonomy of a latitude circle at polar angle theta about any axis
is ``ORIENTATION_SIGN * Omega / 2`` with ``Omega = 2 pi (1 - cos theta)``
the enclosed solid angle, for counterclockwise traversal seen from the
+axis pole.  The sign was measured once with the conventions above and is
pinned by the tests.

First Chern numbers of line bundles over CP^1 are computed on a
latitude-longitude mesh with triangulated polar caps, from the angles of
plaquette link products.  Each link is shared by two plaquettes with
opposite orientation, so the phase sum over the closed surface is an exact
multiple of 2 pi and the integer is read off by rounding.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    LoopClosureError,
    MeshRefinementError,
    TangencyError,
    TransportError,
)
from .rays import ATOL, Direction, Ray, StateVector, ray_of, spinor_of

#: Maximum Fubini-Study gap between consecutive path points.
MAX_STEP_GAP = np.pi / 4

#: Measured holonomy orientation: counterclockwise latitude loops (seen from
#: the +axis pole) multiply the transported lift by exp(-i Omega / 2).
ORIENTATION_SIGN = -1

#: Plaquette phases at or beyond this modulus abort a Chern evaluation.
MAX_PLAQUETTE_PHASE = np.pi / 2

FrameRule = Callable[[Direction], np.ndarray]


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A tangent vector ``vec`` of S^(2n-1) at the point ``base``.

    Tangency means ``Re <base, vec> = 0``; the magnitude is unconstrained.
    """

    base: StateVector
    vec: np.ndarray
    tol: InitVar[float] = ATOL

    def __post_init__(self, tol: float) -> None:
        arr = np.array(self.vec, dtype=complex).reshape(-1)
        if arr.size != self.base.dim:
            raise TangencyError(
                f"vector dim {arr.size} does not match base dim {self.base.dim}"
            )
        radial = float(np.real(np.vdot(self.base.components, arr)))
        if abs(radial) > tol:
            raise TangencyError(f"Re<z, X> = {radial!r}, not tangent within {tol!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "vec", arr)


@dataclass(frozen=True, eq=False)
class SplitTangent:
    """Vertical and horizontal parts of a tangent vector."""

    vertical: np.ndarray
    horizontal: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.vertical, dtype=complex).reshape(-1)
        h = np.array(self.horizontal, dtype=complex).reshape(-1)
        v.setflags(write=False)
        h.setflags(write=False)
        object.__setattr__(self, "vertical", v)
        object.__setattr__(self, "horizontal", h)


def connection_form(t: TangentVector) -> complex:
    """Connection one-form ``omega(X) = <z, X>``, purely imaginary."""
    return complex(np.vdot(t.base.components, t.vec))


def split_tangent(t: TangentVector) -> SplitTangent:
    """Orthogonal splitting ``X = <z, X> z + (X - <z, X> z)``."""
    z = t.base.components
    vertical = np.vdot(z, t.vec) * z
    return SplitTangent(vertical, t.vec - vertical)


def _validate_gaps(stack: np.ndarray) -> None:
    # trace(P_k P_{k+1}) for consecutive projectors, vectorized
    overlaps = np.einsum("kij,kji->k", stack[:-1], stack[1:]).real
    overlaps = np.clip(overlaps, 0.0, 1.0)
    gaps = np.arccos(np.sqrt(overlaps))
    worst = float(np.max(gaps)) if gaps.size else 0.0
    if worst >= MAX_STEP_GAP:
        raise MeshRefinementError(
            f"consecutive Fubini-Study gap {worst!r} >= pi/4; refine the path"
        )


def latitude_curve(
    axis: Direction, theta: float
) -> tuple[Callable[[float], np.ndarray], Callable[[float], np.ndarray]]:
    """Smooth closed representative of the latitude circle about ``axis``.

    Returns callables ``(c, c_dot)`` of the azimuth ``phi`` in [0, 2 pi].
    ``c(phi) = cos(theta/2) xi_plus + e^(i phi) sin(theta/2) xi_minus`` in
    the eigenframe of the axis; its Bloch point moves counterclockwise
    around the +axis pole as ``phi`` increases.
    """
    xi_plus = spinor_of(axis, +1).components
    xi_minus = spinor_of(axis, -1).components
    a = np.cos(0.5 * theta)
    b = np.sin(0.5 * theta)

    def curve(phi: float) -> np.ndarray:
        return a * xi_plus + b * np.exp(1j * phi) * xi_minus

    def curve_dot(phi: float) -> np.ndarray:
        return 1j * b * np.exp(1j * phi) * xi_minus

    return curve, curve_dot


@dataclass(frozen=True, eq=False)
class BaseLoop:
    """A chain of base rays, each Fubini-Study gap below pi/4.

    Despite the name the chain may be open; ``holonomy`` insists on closure
    (first ray equal to last) while ``parallel_transport`` does not.
    """

    rays: tuple[Ray, ...]
    axis: Direction | None = None
    theta: float | None = None
    _stack: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        rays = tuple(self.rays)
        if len(rays) < 2:
            raise MeshRefinementError("a path needs at least two points")
        dim = rays[0].dim
        for r in rays:
            if r.dim != dim:
                raise MeshRefinementError("all path points must share one dimension")
        object.__setattr__(self, "rays", rays)
        stack = np.stack([r.projector for r in rays])
        _validate_gaps(stack)
        stack.setflags(write=False)
        object.__setattr__(self, "_stack", stack)

    @classmethod
    def from_rays(cls, rays: Iterable[Ray]) -> "BaseLoop":
        return cls(tuple(rays))

    @classmethod
    def latitude(cls, axis: Direction, theta: float, steps: int) -> "BaseLoop":
        """Closed latitude loop at polar angle ``theta`` about ``axis``.

        ``steps`` equal azimuth increments, counterclockwise seen from the
        +axis pole; the last point repeats the first exactly.
        """
        if steps < 3:
            raise MeshRefinementError("a latitude loop needs at least three steps")
        curve, _ = latitude_curve(axis, float(theta))
        phis = np.linspace(0.0, 2.0 * np.pi, steps + 1)
        rays = [ray_of(StateVector(curve(p))) for p in phis[:-1]]
        rays.append(rays[0])
        return cls(tuple(rays), axis=axis, theta=float(theta))

    @property
    def projectors(self) -> np.ndarray:
        return self._stack

    @property
    def is_closed(self) -> bool:
        return float(np.max(np.abs(self._stack[0] - self._stack[-1]))) <= ATOL

    def __len__(self) -> int:
        return len(self.rays)


def _path_stack(path: "BaseLoop | Sequence[Ray]") -> np.ndarray:
    if isinstance(path, BaseLoop):
        return path.projectors
    stack = np.stack([r.projector for r in path])
    if stack.shape[0] < 2:
        raise MeshRefinementError("a path needs at least two points")
    _validate_gaps(stack)
    return stack


def parallel_transport(
    start: StateVector, path: "BaseLoop | Sequence[Ray]", *, start_tol: float = 1e-10
) -> StateVector:
    """Horizontal transport of ``start`` along a path of base rays.

    Discrete projector scheme: project the current lift onto the next line
    and renormalize.  Each step overlap is real positive, so the step
    velocity carries no vertical component; with step gaps below pi/4 the
    projection never vanishes.
    """
    stack = _path_stack(path)
    z = start.components
    if z.size != stack.shape[1]:
        raise TransportError(
            f"start dim {z.size} does not match path dim {stack.shape[1]}"
        )
    residue = float(np.max(np.abs(stack[0] @ z - z)))
    if residue > start_tol:
        raise TransportError(f"start vector is off the first ray by {residue!r}")
    for k in range(1, stack.shape[0]):
        w = stack[k] @ z
        z = w / np.linalg.norm(w)
    return StateVector(z)


def parallel_transport_ode(
    start: StateVector,
    curve: Callable[[float], np.ndarray],
    curve_dot: Callable[[float], np.ndarray],
    *,
    t_end: float = 2.0 * np.pi,
    steps: int = 10_000,
) -> StateVector:
    """RK4 horizontal lift along a smooth unit-norm representative curve.

    Integrates ``z' = <c, z> c' - <c, c'> z`` from 0 to ``t_end``; the lift
    stays a phase multiple of ``c(t)`` with its velocity horizontal.  This
    is the independent cross-check for :func:`parallel_transport`.
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    z = start.components.astype(complex)
    c0 = curve(0.0)
    residue = float(np.linalg.norm(np.outer(c0, np.conj(c0)) @ z - z))
    if residue > 1e-10:
        raise TransportError(f"start vector is off the curve start by {residue!r}")

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        c = curve(t)
        cd = curve_dot(t)
        return np.vdot(c, y) * cd - np.vdot(c, cd) * y

    h = t_end / steps
    t = 0.0
    for _ in range(steps):
        k1 = rhs(t, z)
        k2 = rhs(t + 0.5 * h, z + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, z + 0.5 * h * k2)
        k4 = rhs(t + h, z + h * k3)
        z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        z = z / np.linalg.norm(z)
        t += h
    return StateVector(z)


def holonomy(loop: "BaseLoop | Sequence[Ray]") -> float:
    """Holonomy phase of a closed loop, in (-pi, pi].

    Transports the gauge-fixed representative of the first ray around the
    loop; the result is ``e^(i phase)`` times the start.
    """
    rays = loop.rays if isinstance(loop, BaseLoop) else tuple(loop)
    stack = _path_stack(loop)
    closure = float(np.max(np.abs(stack[0] - stack[-1])))
    if closure > ATOL:
        raise LoopClosureError(f"loop endpoints differ by {closure!r}")
    z0 = rays[0].representative()
    end = parallel_transport(z0, loop)
    return float(np.angle(np.vdot(z0.components, end.components)))


def latitude_solid_angle(theta: float) -> float:
    """Solid angle ``2 pi (1 - cos theta)`` enclosed by a latitude circle."""
    return float(2.0 * np.pi * (1.0 - np.cos(theta)))


def expected_latitude_holonomy(theta: float) -> float:
    """Principal value of ``ORIENTATION_SIGN * Omega / 2`` for a latitude loop."""
    return wrap_angle(ORIENTATION_SIGN * 0.5 * latitude_solid_angle(theta))


def wrap_angle(angle: float) -> float:
    """Reduce an angle into [-pi, pi)."""
    return float(np.remainder(angle + np.pi, 2.0 * np.pi) - np.pi)


def circular_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle, in [0, pi]."""
    return abs(wrap_angle(a - b))


# ---------------------------------------------------------------------------
# first Chern numbers on a sphere mesh
# ---------------------------------------------------------------------------


def trivial_frame(point: Direction) -> np.ndarray:
    """Frame rule of the trivial bundle: the constant section 1."""
    return np.ones(1, dtype=complex)


def tautological_frame(point: Direction) -> np.ndarray:
    """Frame rule of the tautological bundle: a vector spanning the line.

    The line over the base point with Bloch vector ``point`` is spanned by
    the +1 eigenspinor; the gauge is irrelevant for the link method.
    """
    return spinor_of(point, +1).components


def dual_frame(point: Direction) -> np.ndarray:
    """Frame rule of the dual bundle: conjugate of the tautological frame."""
    return np.conj(spinor_of(point, +1).components)


def tensor_frame(f: FrameRule, g: FrameRule) -> FrameRule:
    """Frame rule of a tensor product: pointwise Kronecker product."""

    def rule(point: Direction) -> np.ndarray:
        return np.kron(f(point), g(point))

    return rule


def power_frame(k: int) -> FrameRule:
    """Frame rule of the k-th tensor power of the dual bundle (Chern +k).

    Follows the O(k) numbering: ``power_frame(1)`` is the dual,
    ``power_frame(-1)`` the tautological bundle, ``k = 0`` the trivial one.
    """
    k = int(k)
    if k == 0:
        return trivial_frame
    base = dual_frame if k > 0 else tautological_frame
    rule: FrameRule = base
    for _ in range(abs(k) - 1):
        rule = tensor_frame(rule, base)
    return rule


def _mesh_direction(theta: float, phi: float) -> Direction:
    return Direction(
        float(np.sin(theta) * np.cos(phi)),
        float(np.sin(theta) * np.sin(phi)),
        float(np.cos(theta)),
        tol=1e-9,
    )


@dataclass(frozen=True, eq=False)
class ChernField:
    """Lattice field strength of a line bundle and its integrated charge."""

    number: int
    total_over_2pi: float
    phases: np.ndarray
    thetas: np.ndarray
    phis: np.ndarray

    @property
    def max_abs_phase(self) -> float:
        return float(np.max(np.abs(self.phases)))


def chern_field(frame: FrameRule, mesh: int, *, integer_tol: float = 1e-6) -> ChernField:
    """Plaquette phases and first Chern number of a frame rule over CP^1.

    Latitude-longitude mesh with ``mesh`` bands in each angle; the polar
    rows collapse to a single frame evaluation, triangulating the caps.
    Raises ``MeshRefinementError`` when any plaquette phase reaches pi/2 or
    the phase sum fails to land on an integer multiple of 2 pi.
    """
    mesh = int(mesh)
    if mesh < 8:
        raise MeshRefinementError(f"mesh must be at least 8, got {mesh}")
    thetas = np.linspace(0.0, np.pi, mesh + 1)
    phis = np.linspace(0.0, 2.0 * np.pi, mesh, endpoint=False)

    north = np.asarray(frame(_mesh_direction(0.0, 0.0)), dtype=complex)
    dim = north.size
    vertices = np.empty((mesh + 1, mesh, dim), dtype=complex)
    vertices[0, :] = _unit_frame(north)
    vertices[mesh, :] = _unit_frame(
        np.asarray(frame(_mesh_direction(np.pi, 0.0)), dtype=complex)
    )
    for i in range(1, mesh):
        for j in range(mesh):
            vec = np.asarray(frame(_mesh_direction(thetas[i], phis[j])), dtype=complex)
            vertices[i, j] = _unit_frame(vec)

    # link variables along theta and phi edges
    link_theta = np.einsum("ijk,ijk->ij", np.conj(vertices[:-1]), vertices[1:])
    link_phi = np.einsum(
        "ijk,ijk->ij", np.conj(vertices), np.roll(vertices, -1, axis=1)
    )
    smallest = min(float(np.min(np.abs(link_theta))), float(np.min(np.abs(link_phi))))
    if smallest < 1e-12:
        raise MeshRefinementError("orthogonal neighbouring frames; refine the mesh")
    link_theta = link_theta / np.abs(link_theta)
    link_phi = link_phi / np.abs(link_phi)

    # plaquette (i, j): phi edge, theta edge, then both reversed.  This
    # traversal fixes the orientation so the tautological frame reports -1.
    product = (
        link_phi[:-1]
        * np.roll(link_theta, -1, axis=1)
        * np.conj(link_phi[1:])
        * np.conj(link_theta)
    )
    phases = np.angle(product)
    worst = float(np.max(np.abs(phases)))
    if worst >= MAX_PLAQUETTE_PHASE:
        raise MeshRefinementError(
            f"plaquette phase {worst!r} >= pi/2; refine the mesh"
        )
    total = float(np.sum(phases)) / (2.0 * np.pi)
    nearest = int(np.round(total))
    if abs(total - nearest) > integer_tol:
        raise MeshRefinementError(
            f"phase sum / 2 pi = {total!r} is not an integer within {integer_tol!r}"
        )
    phases.setflags(write=False)
    return ChernField(nearest, total, phases, thetas, phis)


def _unit_frame(vec: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vec))
    if norm < 1e-12:
        raise MeshRefinementError("frame rule vanishes at a mesh vertex")
    return vec / norm


def chern_number(frame: FrameRule, mesh: int) -> int:
    """First Chern number of a frame rule over CP^1 on the given mesh."""
    return chern_field(frame, mesh).number
