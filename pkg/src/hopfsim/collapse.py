"""Singlet measurement, collapse bookkeeping, correlations, and CHSH.

The pipeline follows one story: the two-spin singlet lives on S^7 over
CP^3; measuring particle 2 along an axis n with outcome -1/2 collapses it
to the product state ``(+n)_1 (x) (-n)_2``, which lies in an embedded
CP^1 inside CP^3.  :func:`measure_particle2` performs the Born-rule draw
and records every stage; :func:`align_embedding` builds the embedded CP^1
for the measured branch; :func:`collapse_transition` checks that the
recorded embedding agrees with directly projecting the product state (the
collapse square commutes) and reports the Fubini-Study jump.

Monte Carlo statistics (outcome frequencies, correlations, CHSH) draw from
the block-seeded streams of :mod:`hopfsim.sampling`, so every estimate is
reproducible bit for bit and independent of the worker count.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass

import numpy as np

from .errors import DimensionMismatchError, InconsistentRecordError
from .hopf import hopf_project
from .rays import (
    ATOL,
    Direction,
    Ray,
    StateVector,
    fix_phase,
    fubini_study_distance,
    ray_of,
    spinor_of,
    tensor_product,
)
from .sampling import (
    PURPOSE_CHECK,
    PURPOSE_COLLAPSE,
    PURPOSE_CORRELATION,
    map_blocks,
    random_direction,
    stream,
    validate_seed,
)

#: Joint outcome order used by the Monte Carlo samplers: (s1, s2) signs.
JOINT_ORDER = ((+1, +1), (+1, -1), (-1, +1), (-1, -1))

#: Product of mapped outcomes (+-1/2 -> +-1) for each joint index.
JOINT_PRODUCTS = np.array([+1, -1, -1, +1])

_SWAP_INDEX = np.array([0, 2, 1, 3])


def singlet() -> StateVector:
    """The two-spin singlet ``(ud - du) / sqrt 2 = (0, 1/sqrt2, -1/sqrt2, 0)``."""
    up = StateVector(np.array([1.0, 0.0], dtype=complex))
    down = StateVector(np.array([0.0, 1.0], dtype=complex))
    ud = tensor_product(up, down).components
    du = tensor_product(down, up).components
    return StateVector((ud - du) / np.sqrt(2.0))


def swap_particles(state: StateVector) -> StateVector:
    """Exchange the tensor factors of a two-spin state."""
    if state.dim != 4:
        raise DimensionMismatchError("swap_particles expects a two-spin state")
    return StateVector(state.components[_SWAP_INDEX])


def align_embedding(
    axis: Direction, effective: Ray, outcome: float = -0.5
) -> Ray:
    """Embed a particle-1 ray into CP^3 along the measured branch.

    The embedded CP^1 for the branch with particle-2 outcome ``outcome`` is
    ``{w (x) chi2}`` with ``chi2`` the measured particle-2 eigenspinor
    ``spinor_of(axis, sign(outcome))``: a block inclusion conjugated into
    the axis eigenframe, carrying the branch's fixed particle-2 factor.
    The default branch is the ``-1/2`` outcome.
    """
    if effective.dim != 2:
        raise DimensionMismatchError("align_embedding expects a CP^1 ray")
    sign = _outcome_sign(outcome)
    w = effective.representative()
    chi2 = spinor_of(axis, sign)
    return ray_of(tensor_product(w, chi2))


def _outcome_sign(outcome: float) -> int:
    if not math.isclose(abs(float(outcome)), 0.5, rel_tol=0.0, abs_tol=1e-12):
        raise ValueError(f"outcome must be +-1/2, got {outcome!r}")
    return 1 if outcome > 0 else -1


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """Everything produced by one particle-2 spin measurement.

    ``post_product_state`` keeps the discarded particle-2 factor; the
    effective state of the unmeasured particle is ``post_effective_ray``
    and its branch embedding into CP^3 is ``embedded_post_ray``.
    """

    axis: Direction
    outcome: float
    probability: float
    pre_ray: Ray
    post_product_state: StateVector
    post_effective_ray: Ray
    embedded_post_ray: Ray
    tol: InitVar[float] = ATOL

    def __post_init__(self, tol: float) -> None:
        object.__setattr__(self, "outcome", 0.5 * _outcome_sign(self.outcome))
        p = float(self.probability)
        if not -tol <= p <= 1.0 + tol:
            raise InconsistentRecordError(f"probability {p!r} outside [0, 1]")
        object.__setattr__(self, "probability", min(max(p, 0.0), 1.0))
        if self.pre_ray.dim != 4 or self.post_product_state.dim != 4:
            raise DimensionMismatchError("measurement records hold two-spin states")
        if self.post_effective_ray.dim != 2 or self.embedded_post_ray.dim != 4:
            raise DimensionMismatchError("effective ray is CP^1, embedded ray CP^3")
        # Schmidt rank one: the post state must factor into a product.
        matrix = self.post_product_state.components.reshape(2, 2)
        second = float(np.linalg.svd(matrix, compute_uv=False)[1])
        if second > tol:
            raise InconsistentRecordError(
                f"post state is not a product (second singular value {second!r})"
            )


def measure_particle2(
    state: StateVector, axis: Direction, draw: float, *, tol: float = ATOL
) -> MeasurementRecord:
    """Born-rule spin measurement of particle 2 along ``axis``.

    ``draw`` in [0, 1) selects the branch: outcome +1/2 exactly when
    ``draw < p(+1/2)``.  The post state is the renormalized projection
    ``(1 (x) Pi) state`` written as a gauge-canonical product.
    """
    if state.dim != 4:
        raise DimensionMismatchError("measure_particle2 expects a two-spin state")
    draw = float(draw)
    if not 0.0 <= draw < 1.0:
        raise ValueError(f"draw must lie in [0, 1), got {draw!r}")
    matrix = state.components.reshape(2, 2)
    chi = {s: spinor_of(axis, s) for s in (+1, -1)}
    # amplitude of particle 1 on each branch: a_s = matrix conj(chi_s)
    amplitude = {s: matrix @ np.conj(chi[s].components) for s in (+1, -1)}
    prob = {s: float(np.sum(np.abs(amplitude[s]) ** 2)) for s in (+1, -1)}
    sign = +1 if draw < prob[+1] else -1
    branch = amplitude[sign]
    effective = StateVector(fix_phase(branch / np.linalg.norm(branch)))
    effective_ray = ray_of(effective)
    return MeasurementRecord(
        axis=axis,
        outcome=0.5 * sign,
        probability=prob[sign],
        pre_ray=hopf_project(state),
        post_product_state=tensor_product(effective, chi[sign]),
        post_effective_ray=effective_ray,
        embedded_post_ray=align_embedding(axis, effective_ray, 0.5 * sign),
        tol=tol,
    )


def measure_particle1(
    state: StateVector, axis: Direction, draw: float, *, tol: float = ATOL
) -> MeasurementRecord:
    """Spin measurement of particle 1, implemented by factor symmetry.

    Swaps the tensor factors, measures "particle 2", and swaps the record
    back; the effective ray then belongs to the unmeasured particle 2.
    """
    mirrored = measure_particle2(swap_particles(state), axis, draw, tol=tol)
    post = swap_particles(mirrored.post_product_state)
    embedded = ray_of(swap_particles(mirrored.embedded_post_ray.representative()))
    return MeasurementRecord(
        axis=axis,
        outcome=mirrored.outcome,
        probability=mirrored.probability,
        pre_ray=hopf_project(state),
        post_product_state=post,
        post_effective_ray=mirrored.post_effective_ray,
        embedded_post_ray=embedded,
        tol=tol,
    )


@dataclass(frozen=True, eq=False)
class TransitionReport:
    """Before/after geometry of one collapse event.

    The pre-measurement ray lives over CP^3, the post-collapse ray in the
    embedded CP^1; the report records both with the Fubini-Study jump and
    whether the collapse square commutes.  No physical interpretation of
    the bundle change is attached; this is bookkeeping.
    """

    axis: Direction
    outcome: float
    pre_ray: Ray
    post_effective_ray: Ray
    embedded_post_ray: Ray
    jump_distance: float
    diagram_commutes: bool


def collapse_transition(record: MeasurementRecord, *, tol: float = ATOL) -> TransitionReport:
    """Validate a measurement record and report its collapse geometry.

    Expects a record from :func:`measure_particle2` (the effective ray is
    the particle-1 factor).  Raises ``InconsistentRecordError`` when the
    record's fields contradict each other: effective ray not the particle-1
    factor, or embedding not the branch embedding of the effective ray.
    """
    matrix = record.post_product_state.components.reshape(2, 2)
    reduced = matrix @ matrix.conj().T  # particle-1 density, rank one for products
    if float(np.max(np.abs(reduced - record.post_effective_ray.projector))) > max(tol, 1e-10):
        raise InconsistentRecordError("effective ray is not the particle-1 factor")
    expected = align_embedding(record.axis, record.post_effective_ray, record.outcome)
    if float(np.max(np.abs(expected.projector - record.embedded_post_ray.projector))) > max(tol, 1e-10):
        raise InconsistentRecordError("embedded ray is not the branch embedding")
    direct = hopf_project(record.post_product_state)
    deviation = float(np.max(np.abs(record.embedded_post_ray.projector - direct.projector)))
    return TransitionReport(
        axis=record.axis,
        outcome=record.outcome,
        pre_ray=record.pre_ray,
        post_effective_ray=record.post_effective_ray,
        embedded_post_ray=record.embedded_post_ray,
        jump_distance=fubini_study_distance(record.pre_ray, record.embedded_post_ray),
        diagram_commutes=deviation <= tol,
    )


def max_collapse_diagram_deviation(trials: int, seed: int) -> float:
    """Worst embedding-vs-projection deviation over random collapse events.

    Each trial measures the singlet along a random axis with a random draw
    and compares the recorded branch embedding against ``hopf_project`` of
    the branch product state, entrywise.
    """
    rng = stream(seed, PURPOSE_CHECK, 3)
    state = singlet()
    worst = 0.0
    for _ in range(trials):
        axis = random_direction(rng)
        record = measure_particle2(state, axis, float(rng.random()))
        direct = hopf_project(record.post_product_state)
        dev = float(
            np.max(np.abs(record.embedded_post_ray.projector - direct.projector))
        )
        worst = max(worst, dev)
    return worst


# ---------------------------------------------------------------------------
# correlations and CHSH
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """Axes, shot count, and seed of one two-axis correlation experiment."""

    axis_a: Direction
    axis_b: Direction
    shots: int
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "shots", int(self.shots))
        if self.shots < 1:
            raise ValueError("shots must be at least 1")
        object.__setattr__(self, "seed", validate_seed(self.seed))


@dataclass(frozen=True)
class CorrelationEstimate:
    """Monte Carlo correlation with its standard error."""

    value: float
    stderr: float | None
    shots: int
    seed: int


def joint_probabilities(
    state: StateVector, axis_a: Direction, axis_b: Direction
) -> np.ndarray:
    """Born probabilities of the four joint outcomes, in ``JOINT_ORDER``.

    Particle 1 is measured along ``axis_a``, particle 2 along ``axis_b``;
    each probability is ``|<chi_a (x) chi_b, state>|^2``.
    """
    if state.dim != 4:
        raise DimensionMismatchError("joint_probabilities expects a two-spin state")
    chi_a = {s: spinor_of(axis_a, s) for s in (+1, -1)}
    chi_b = {s: spinor_of(axis_b, s) for s in (+1, -1)}
    probs = np.empty(4)
    for idx, (sa, sb) in enumerate(JOINT_ORDER):
        product = tensor_product(chi_a[sa], chi_b[sb])
        amplitude = np.vdot(product.components, state.components)
        probs[idx] = float(np.abs(amplitude) ** 2)
    return probs


def correlation_exact(axis_a: Direction, axis_b: Direction) -> float:
    """Exact singlet correlation ``sum (+-1)(+-1) p(joint)``."""
    probs = joint_probabilities(singlet(), axis_a, axis_b)
    return float(np.dot(JOINT_PRODUCTS, probs))


def _joint_counts(
    probs: np.ndarray, shots: int, seed: int, stream_index: int, workers: int
) -> np.ndarray:
    cumulative = np.cumsum(probs)
    cumulative[-1] = 1.0  # guard the float tail

    def block(index: int, count: int) -> np.ndarray:
        rng = stream(seed, PURPOSE_CORRELATION, stream_index, index)
        u = rng.random(count)
        categories = np.searchsorted(cumulative, u, side="right")
        return np.bincount(categories, minlength=4)

    parts = map_blocks(block, shots, workers)
    return np.sum(np.stack(parts), axis=0)


def correlation_mc(
    config: ExperimentConfig, *, workers: int = 1, stream_index: int = 0
) -> CorrelationEstimate:
    """Monte Carlo singlet correlation: sample mean of outcome products.

    Joint outcomes are drawn from the Born distribution in fixed-size
    blocks; integer per-block counts are merged in block order, so the
    estimate is bit-identical for every worker count.
    """
    probs = joint_probabilities(singlet(), config.axis_a, config.axis_b)
    counts = _joint_counts(probs, config.shots, config.seed, stream_index, workers)
    value = float(np.dot(JOINT_PRODUCTS, counts) / config.shots)
    if config.shots > 1:
        stderr = float(np.sqrt(max(1.0 - value**2, 0.0) / (config.shots - 1)))
    else:
        stderr = None
    return CorrelationEstimate(value, stderr, config.shots, config.seed)


def correlation(
    config: ExperimentConfig, *, method: str = "exact", workers: int = 1
) -> float:
    """Correlation of spin outcomes for the singlet, in [-1, 1]."""
    if method == "exact":
        return correlation_exact(config.axis_a, config.axis_b)
    if method == "mc":
        return correlation_mc(config, workers=workers).value
    raise ValueError(f"method must be 'exact' or 'mc', got {method!r}")


@dataclass(frozen=True)
class ChshResult:
    """The four correlations and the CHSH combination S."""

    s_value: float
    correlations: tuple[float, float, float, float]
    stderrs: tuple[float | None, float | None, float | None, float | None]
    method: str
    shots: int | None
    seed: int | None


def _chsh_combination(e: tuple[float, float, float, float]) -> float:
    return abs(e[0] - e[1]) + abs(e[2] + e[3])


def chsh_exact(a: Direction, ap: Direction, b: Direction, bp: Direction) -> ChshResult:
    """Exact CHSH value ``|E(a,b) - E(a,b')| + |E(a',b) + E(a',b')|``."""
    e = (
        correlation_exact(a, b),
        correlation_exact(a, bp),
        correlation_exact(ap, b),
        correlation_exact(ap, bp),
    )
    return ChshResult(_chsh_combination(e), e, (None,) * 4, "exact", None, None)


def chsh_mc(
    a: Direction,
    ap: Direction,
    b: Direction,
    bp: Direction,
    shots: int,
    seed: int,
    *,
    workers: int = 1,
) -> ChshResult:
    """Monte Carlo CHSH: four correlations on derived streams, same seed."""
    pairs = ((a, b), (a, bp), (ap, b), (ap, bp))
    estimates = [
        correlation_mc(
            ExperimentConfig(pa, pb, shots, seed), workers=workers, stream_index=index
        )
        for index, (pa, pb) in enumerate(pairs)
    ]
    values = tuple(est.value for est in estimates)
    stderrs = tuple(est.stderr for est in estimates)
    return ChshResult(_chsh_combination(values), values, stderrs, "monte_carlo", shots, seed)


def chsh(
    a: Direction,
    ap: Direction,
    b: Direction,
    bp: Direction,
    shots: int | None = None,
    seed: int = 0,
    *,
    workers: int = 1,
) -> float:
    """CHSH value; exact when ``shots`` is None, Monte Carlo otherwise."""
    if shots is None:
        return chsh_exact(a, ap, b, bp).s_value
    return chsh_mc(a, ap, b, bp, shots, seed, workers=workers).s_value


def sample_singlet_outcomes(
    axis: Direction, shots: int, seed: int, *, workers: int = 1
) -> np.ndarray:
    """Particle-2 outcome signs (+-1) for ``shots`` singlet measurements.

    Same branch rule as :func:`measure_particle2` (+1 when the uniform draw
    is below p(+1/2)), drawn from the block streams in shot order.
    """
    matrix = singlet().components.reshape(2, 2)
    chi_plus = spinor_of(axis, +1)
    p_plus = float(np.sum(np.abs(matrix @ np.conj(chi_plus.components)) ** 2))

    def block(index: int, count: int) -> np.ndarray:
        rng = stream(seed, PURPOSE_COLLAPSE, index)
        u = rng.random(count)
        return np.where(u < p_plus, 1, -1).astype(np.int8)

    parts = map_blocks(block, shots, workers)
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int8)


def branch_records(axis: Direction) -> dict[int, MeasurementRecord]:
    """The two singlet branch records for an axis, keyed by outcome sign."""
    state = singlet()
    matrix = state.components.reshape(2, 2)
    chi_plus = spinor_of(axis, +1)
    p_plus = float(np.sum(np.abs(matrix @ np.conj(chi_plus.components)) ** 2))
    return {
        +1: measure_particle2(state, axis, 0.0),
        -1: measure_particle2(state, axis, p_plus),
    }
