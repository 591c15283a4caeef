"""Seeded randomness and the worker-independent block scheme.

Every stochastic path in the package draws from numpy's PCG64 through an
explicit SeedSequence spawn key ``[seed, purpose, indices...]``.  Monte Carlo
draws are split into fixed-size blocks, each with its own stream derived from
the block index, and per-block partial results are reduced in block order.
The merged result is therefore bit-identical for any worker count, and any
run can be replayed exactly from its seed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from .rays import Direction, StateVector

#: Shots per RNG block; fixed so results do not depend on worker count.
BLOCK_SHOTS = 1 << 16

#: Stream purpose tags, the spawn-key component right after the seed.
PURPOSE_COLLAPSE = 1
PURPOSE_CORRELATION = 2
PURPOSE_CHECK = 3

RNG_DESCRIPTION = "numpy PCG64, SeedSequence key [seed, purpose, indices..., block]"

MAX_SEED = 2**64 - 1


def stream(seed: int, *key: int) -> np.random.Generator:
    """PCG64 generator for the spawn key ``[seed, *key]``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *[int(k) for k in key]]))


def blocks(shots: int, block: int = BLOCK_SHOTS) -> list[tuple[int, int]]:
    """Partition ``shots`` into (index, count) blocks of at most ``block``."""
    if shots < 0:
        raise ValueError("shots must be non-negative")
    out = []
    index = 0
    remaining = shots
    while remaining > 0:
        count = min(block, remaining)
        out.append((index, count))
        index += 1
        remaining -= count
    return out


def map_blocks(
    fn: Callable[[int, int], object],
    shots: int,
    workers: int = 1,
    block: int = BLOCK_SHOTS,
) -> list:
    """Apply ``fn(block_index, count)`` to every block, results in block order.

    ``workers > 1`` fans the blocks out over a thread pool; the ordered
    result list makes the reduction independent of completion order.
    """
    work = blocks(shots, block)
    if workers <= 1 or len(work) <= 1:
        return [fn(index, count) for index, count in work]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda item: fn(item[0], item[1]), work))


def random_phase(rng: np.random.Generator) -> float:
    return float(rng.uniform(0.0, 2.0 * np.pi))


def random_direction(rng: np.random.Generator) -> Direction:
    """Uniform direction: a normalized 3-vector of standard normals."""
    while True:
        v = rng.standard_normal(3)
        if np.linalg.norm(v) > 1e-8:
            return Direction.from_array(v, normalize=True)


def random_state(rng: np.random.Generator, dim: int) -> StateVector:
    """Uniform point of S^(2 dim - 1): normalized complex normal vector."""
    while True:
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            return StateVector(v / norm)


def random_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random SU(2) matrix built from a unit quaternion."""
    q = rng.standard_normal(4)
    q = q / np.linalg.norm(q)
    a = q[0] + 1j * q[1]
    b = q[2] + 1j * q[3]
    return np.array([[a, -np.conj(b)], [b, np.conj(a)]])


def validate_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be in [0, 2^64), got {seed}")
    return seed
