"""Figure renderers for the command line report path.

Imported lazily by the CLI, only when a figure is actually requested, so
headless runs that skip plotting never touch matplotlib.  All renderers
take the already-computed report data; nothing here recomputes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # file output only, no display

import matplotlib.pyplot as plt
import numpy as np

from .connection import ChernField

DPI = 150


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def render_fibration_check(results: dict, path: Path) -> None:
    """Log-scale bars of the per-suite deviations against the tolerance."""
    names = sorted(results["suites"])
    values = [max(results["suites"][name], 1e-18) for name in names]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(names, values, color="tab:blue")
    ax.axhline(results["tolerance"], color="tab:red", linestyle="--", label="tolerance")
    ax.set_yscale("log")
    ax.set_ylabel("max deviation")
    ax.set_title(f"Fibration checks, n={results['n']}, {results['trials']} trials")
    ax.legend()
    _save(fig, path)


def render_collapse(results: dict, path: Path) -> None:
    """Outcome frequencies with the Born value and the mean jump."""
    summary = results["summary"]
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.bar(["+1/2", "-1/2"], [summary["freq_plus"], summary["freq_minus"]],
           color=["tab:blue", "tab:orange"])
    ax.axhline(0.5, color="tab:red", linestyle="--", label="Born 1/2")
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("frequency")
    ax.set_title(
        f"{results['shots']} singlet shots, "
        f"mean jump {summary['mean_jump_rad']:.6f} rad"
    )
    ax.legend()
    _save(fig, path)


def render_correlation_sweep(rows: list[tuple], path: Path) -> None:
    """Exact correlation curve with Monte Carlo error bars when present."""
    data = np.asarray(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(data[:, 0], data[:, 1], color="tab:blue", label="exact")
    if not np.all(np.isnan(data[:, 2])):
        ax.errorbar(data[:, 0], data[:, 2], yerr=data[:, 3], fmt=".",
                    color="tab:orange", label="Monte Carlo")
    ax.set_xlabel("angle between axes (rad)")
    ax.set_ylabel("correlation E")
    ax.set_title("Singlet correlation sweep")
    ax.legend()
    _save(fig, path)


def render_chsh(results: dict, path: Path) -> None:
    """The four correlations with the classical and quantum bounds."""
    labels = ["ab", "ab_prime", "a_prime_b", "a_prime_b_prime"]
    values = [results["correlations"][label]["value"] for label in labels]
    errors = [results["correlations"][label]["stderr"] or 0.0 for label in labels]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(labels, values, yerr=errors, color="tab:blue")
    ax.set_ylim(-1.1, 1.1)
    ax.set_ylabel("correlation E")
    ax.set_title(
        f"S = {results['s_value']:.6f} "
        f"(classical 2, quantum {results['quantum_bound']:.6f})"
    )
    _save(fig, path)


def render_holonomy(results: dict, path: Path) -> None:
    """Measured and expected holonomy phases on the unit circle."""
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    circle = np.linspace(0.0, 2.0 * np.pi, 256)
    ax.plot(np.cos(circle), np.sin(circle), color="0.8")
    for angle, color, label in (
        (results["expected_phase_rad"], "tab:red", "expected"),
        (results["phase_rad"], "tab:blue", "measured"),
    ):
        ax.annotate(
            "", xy=(np.cos(angle), np.sin(angle)), xytext=(0.0, 0.0),
            arrowprops=dict(arrowstyle="->", color=color),
        )
        ax.plot([], [], color=color, label=label)
    ax.set_aspect("equal")
    ax.set_title(
        f"theta = {results['theta_rad']:.4f} rad, "
        f"deviation {results['deviation_rad']:.2e}"
    )
    ax.legend(loc="lower right")
    _save(fig, path)


def render_chern(results: dict, field: ChernField, path: Path) -> None:
    """Heatmap of the plaquette phases whose sum gives the integer."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    image = ax.imshow(
        field.phases,
        origin="upper",
        extent=(0.0, 2.0 * np.pi, np.pi, 0.0),
        aspect="auto",
        cmap="RdBu_r",
    )
    fig.colorbar(image, ax=ax, label="plaquette phase (rad)")
    ax.set_xlabel("phi (rad)")
    ax.set_ylabel("theta (rad)")
    ax.set_title(f"{results['bundle']} bundle, c1 = {results['chern_number']}")
    _save(fig, path)
