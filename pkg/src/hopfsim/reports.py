"""Result builders behind the command line: pure computation, no I/O.

Each ``run_*`` function returns a JSON-ready dictionary (plain Python
scalars and lists, complex entries as ``[re, im]`` pairs downstream).
Anything a figure needs beyond the report itself is returned alongside.
"""

from __future__ import annotations

import numpy as np

from .collapse import (
    branch_records,
    chsh_exact,
    chsh_mc,
    collapse_transition,
    correlation_exact,
    correlation_mc,
    ExperimentConfig,
    max_collapse_diagram_deviation,
    sample_singlet_outcomes,
)
from .connection import (
    BaseLoop,
    ChernField,
    chern_field,
    circular_distance,
    dual_frame,
    expected_latitude_holonomy,
    FrameRule,
    holonomy,
    latitude_solid_angle,
    power_frame,
    tautological_frame,
    trivial_frame,
)
from .hopf import (
    max_bloch_roundtrip_deviation,
    max_fibration_deviation,
    max_inclusion_square_deviation,
)
from .rays import Direction

BUNDLE_FRAMES: dict[str, FrameRule] = {
    "tautological": tautological_frame,
    "dual": dual_frame,
    "trivial": trivial_frame,
}


def coplanar_direction(angle: float) -> Direction:
    """Measurement direction at polar angle ``angle`` in the x-z plane."""
    return Direction(float(np.sin(angle)), 0.0, float(np.cos(angle)), tol=1e-9)


def run_fibration_check(n: int, trials: int, seed: int, tolerance: float) -> dict:
    """Property-suite deviations for the sphere of dimension ``2n - 1``.

    n = 2 runs the fibration and Bloch round-trip suites; n = 4 adds the
    inclusion-square and collapse-diagram suites instead of the round trip.
    """
    suites = {"fibration": max_fibration_deviation(n, trials, seed)}
    if n == 2:
        suites["bloch_roundtrip"] = max_bloch_roundtrip_deviation(trials, seed)
    else:
        suites["inclusion_square"] = max_inclusion_square_deviation(trials, seed)
        suites["collapse_diagram"] = max_collapse_diagram_deviation(trials, seed)
    worst = max(suites.values())
    return {
        "n": n,
        "trials": trials,
        "seed": seed,
        "tolerance": tolerance,
        "suites": suites,
        "max_deviation": worst,
        "passed": bool(worst <= tolerance),
    }


def run_collapse(
    axis: Direction, shots: int, seed: int, *, workers: int = 1, tolerance: float
) -> dict:
    """Singlet measurement run: per-shot branch records plus a summary.

    The singlet has exactly two branches per axis, so each event carries
    the precomputed record of its outcome; only the outcome sequence is
    sampled (from the block streams, worker-count independent).
    """
    outcomes = sample_singlet_outcomes(axis, shots, seed, workers=workers)
    records = branch_records(axis)
    branch = {}
    for sign in (+1, -1):
        record = records[sign]
        report = collapse_transition(record, tol=tolerance)
        branch[sign] = {
            "outcome": record.outcome,
            "probability": record.probability,
            "jump_rad": report.jump_distance,
            "diagram_commutes": report.diagram_commutes,
            "post_state": [complex(c) for c in record.post_product_state.components],
            "effective_state": [
                complex(c)
                for c in record.post_effective_ray.representative().components
            ],
        }
    events = [dict(shot=i, **branch[int(s)]) for i, s in enumerate(outcomes)]
    count_plus = int(np.sum(outcomes == 1))
    jumps = [branch[int(s)]["jump_rad"] for s in outcomes]
    return {
        "axis": list(axis.as_array()),
        "shots": shots,
        "seed": seed,
        "events": events,
        "summary": {
            "count_plus": count_plus,
            "count_minus": shots - count_plus,
            "freq_plus": count_plus / shots,
            "freq_minus": (shots - count_plus) / shots,
            "mean_jump_rad": float(np.mean(jumps)),
            "diagram_all_commute": all(b["diagram_commutes"] for b in branch.values()),
        },
    }


def collapse_csv_rows(results: dict) -> list[list]:
    """Event rows matching ``COLLAPSE_CSV_HEADER``."""
    rows = []
    for event in results["events"]:
        row = [
            event["shot"],
            event["outcome"],
            event["probability"],
            event["jump_rad"],
            event["diagram_commutes"],
        ]
        for component in event["post_state"]:
            row.extend((component.real, component.imag))
        rows.append(row)
    return rows


def run_correlation_sweep(
    start: float,
    stop: float,
    count: int,
    shots: int | None,
    seed: int,
    *,
    workers: int = 1,
) -> list[tuple[float, float, float, float]]:
    """Sweep rows (theta_rad, E_exact, E_mc, mc_stderr) over an angle grid.

    One axis is fixed at +z, the other sweeps the x-z plane.  Without
    ``shots`` the Monte Carlo columns are NaN; each grid row samples its
    own derived stream, so rows are independent of grid size ordering.
    """
    if count < 1:
        raise ValueError("angle grid must contain at least one point")
    fixed = Direction(0.0, 0.0, 1.0)
    rows = []
    for index, theta in enumerate(np.linspace(start, stop, count)):
        moving = coplanar_direction(float(theta))
        exact = correlation_exact(fixed, moving)
        if shots is None:
            mc_value, mc_stderr = float("nan"), float("nan")
        else:
            estimate = correlation_mc(
                ExperimentConfig(fixed, moving, shots, seed),
                workers=workers,
                stream_index=index,
            )
            mc_value = estimate.value
            mc_stderr = estimate.stderr if estimate.stderr is not None else float("nan")
        rows.append((float(theta), exact, mc_value, mc_stderr))
    return rows


PAIR_LABELS = ("ab", "ab_prime", "a_prime_b", "a_prime_b_prime")


def run_chsh(
    angles: tuple[float, float, float, float],
    shots: int | None,
    seed: int,
    *,
    workers: int = 1,
) -> dict:
    """CHSH report for four x-z plane angles (a, a', b, b')."""
    a, ap, b, bp = (coplanar_direction(angle) for angle in angles)
    if shots is None:
        result = chsh_exact(a, ap, b, bp)
    else:
        result = chsh_mc(a, ap, b, bp, shots, seed, workers=workers)
    correlations = {
        label: {"value": value, "stderr": stderr}
        for label, value, stderr in zip(
            PAIR_LABELS, result.correlations, result.stderrs
        )
    }
    return {
        "angles_rad": [float(angle) for angle in angles],
        "method": result.method,
        "shots": result.shots,
        "seed": seed if shots is not None else None,
        "correlations": correlations,
        "s_value": result.s_value,
        "violates_classical_bound": bool(result.s_value > 2.0),
        "quantum_bound": float(2.0 * np.sqrt(2.0)),
    }


def run_holonomy(
    axis: Direction, theta: float, steps: int, tolerance: float
) -> dict:
    """Latitude-loop holonomy phase against the solid-angle prediction."""
    loop = BaseLoop.latitude(axis, theta, steps)
    phase = holonomy(loop)
    expected = expected_latitude_holonomy(theta)
    deviation = circular_distance(phase, expected)
    return {
        "axis": list(axis.as_array()),
        "theta_rad": float(theta),
        "steps": steps,
        "phase_rad": phase,
        "expected_phase_rad": expected,
        "solid_angle_sr": latitude_solid_angle(theta),
        "deviation_rad": deviation,
        "tolerance": tolerance,
        "passed": bool(deviation <= tolerance),
    }


def run_chern(bundle: str, k: int | None, mesh: int) -> tuple[dict, ChernField]:
    """Lattice Chern number report plus the plaquette field for plotting."""
    if bundle == "power":
        if k is None:
            raise ValueError("bundle 'power' needs an exponent k")
        frame = power_frame(k)
    else:
        if k is not None:
            raise ValueError("exponent k only applies to bundle 'power'")
        frame = BUNDLE_FRAMES[bundle]
    field = chern_field(frame, mesh)
    results = {
        "bundle": bundle,
        "k": k,
        "mesh": mesh,
        "chern_number": field.number,
        "total_over_2pi": field.total_over_2pi,
        "integer_residue": abs(field.total_over_2pi - field.number),
        "max_plaquette_phase_rad": field.max_abs_phase,
    }
    return results, field
