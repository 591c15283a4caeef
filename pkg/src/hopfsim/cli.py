"""Command line surface.

Every command is deterministic given its arguments and ``--seed``; the
Monte Carlo commands are additionally independent of ``--workers``.  With
``--out`` the data file is accompanied by a ``.manifest.json`` sidecar
(command, full parameters, seed, version, duration, SHA-256 of the data
bytes) and, unless ``--no-plot`` is given, a rendered figure next to it;
``replay`` re-executes a manifest and verifies the bytes.  Option
defaults can be overridden through ``HOPFSIM_<COMMAND>_<OPTION>``
environment variables.

Exit codes: 0 success, 1 property or statistical failure (and replay
mismatch), 2 usage error.
"""

from __future__ import annotations

import time
from pathlib import Path
from typing import Callable

import click
import numpy as np

from . import __version__
from .errors import GeometryError
from .manifest import RunManifest, load_manifest, manifest_path_for, write_manifest
from .rays import Direction
from .reports import (
    collapse_csv_rows,
    run_chern,
    run_chsh,
    run_collapse,
    run_correlation_sweep,
    run_fibration_check,
    run_holonomy,
)
from .sampling import MAX_SEED
from .serialization import (
    COLLAPSE_CSV_HEADER,
    SWEEP_CSV_HEADER,
    csv_text,
    dumps,
    sha256_of_bytes,
)

CONTEXT_SETTINGS = {
    "auto_envvar_prefix": "HOPFSIM",
    "help_option_names": ["-h", "--help"],
}

# keys of the result-determining parameters embedded in JSON payloads;
# execution details (workers, format, compact) live only in the manifest
_ENVELOPE_KEYS = {
    "fibration-check": ("n", "trials", "seed", "tolerance"),
    "collapse": ("axis", "shots", "seed", "tolerance"),
    "chsh": ("angles_rad", "shots", "seed"),
    "holonomy": ("axis", "theta_rad", "steps", "tolerance"),
    "chern": ("bundle", "k", "mesh"),
}

FigureFn = Callable[[Path], None]
# payload bytes, property-failure flag, figure renderer, stdout note
BuildResult = tuple[bytes, bool, "FigureFn | None", "bytes | None"]


def _envelope(command: str, params: dict, results: dict) -> bytes:
    doc = {
        "command": command,
        "version": __version__,
        "parameters": {key: params[key] for key in _ENVELOPE_KEYS[command]},
        "results": results,
    }
    return dumps(doc, compact=params.get("compact", False)).encode("utf-8")


def _build_fibration_check(params: dict) -> BuildResult:
    results = run_fibration_check(
        params["n"], params["trials"], params["seed"], params["tolerance"]
    )
    payload = _envelope("fibration-check", params, results)

    def figure(path: Path) -> None:
        from .figures import render_fibration_check

        render_fibration_check(results, path)

    return payload, not results["passed"], figure, None


def _build_collapse(params: dict) -> BuildResult:
    axis = Direction.from_array(np.asarray(params["axis"], dtype=float), normalize=True)
    results = run_collapse(
        axis,
        params["shots"],
        params["seed"],
        workers=params.get("workers", 1),
        tolerance=params["tolerance"],
    )
    note = None
    if params.get("format", "json") == "csv":
        payload = csv_text(COLLAPSE_CSV_HEADER, collapse_csv_rows(results)).encode("utf-8")
        summary_only = {k: v for k, v in results.items() if k != "events"}
        note = _envelope("collapse", params, summary_only)
    else:
        payload = _envelope("collapse", params, results)

    def figure(path: Path) -> None:
        from .figures import render_collapse

        render_collapse(results, path)

    return payload, not results["summary"]["diagram_all_commute"], figure, note


def _build_correlation_sweep(params: dict) -> BuildResult:
    rows = run_correlation_sweep(
        params["start_rad"],
        params["stop_rad"],
        params["count"],
        params["shots"],
        params["seed"],
        workers=params.get("workers", 1),
    )
    payload = csv_text(SWEEP_CSV_HEADER, rows).encode("utf-8")

    def figure(path: Path) -> None:
        from .figures import render_correlation_sweep

        render_correlation_sweep(rows, path)

    return payload, False, figure, None


def _build_chsh(params: dict) -> BuildResult:
    results = run_chsh(
        tuple(params["angles_rad"]),
        params["shots"],
        params["seed"],
        workers=params.get("workers", 1),
    )
    payload = _envelope("chsh", params, results)

    def figure(path: Path) -> None:
        from .figures import render_chsh

        render_chsh(results, path)

    return payload, False, figure, None


def _build_holonomy(params: dict) -> BuildResult:
    axis = Direction.from_array(np.asarray(params["axis"], dtype=float), normalize=True)
    results = run_holonomy(
        axis, params["theta_rad"], params["steps"], params["tolerance"]
    )
    payload = _envelope("holonomy", params, results)

    def figure(path: Path) -> None:
        from .figures import render_holonomy

        render_holonomy(results, path)

    return payload, not results["passed"], figure, None


def _build_chern(params: dict) -> BuildResult:
    results, field = run_chern(params["bundle"], params["k"], params["mesh"])
    payload = _envelope("chern", params, results)

    def figure(path: Path) -> None:
        from .figures import render_chern

        render_chern(results, field, path)

    return payload, False, figure, None


_BUILDERS: dict[str, Callable[[dict], BuildResult]] = {
    "fibration-check": _build_fibration_check,
    "collapse": _build_collapse,
    "correlation-sweep": _build_correlation_sweep,
    "chsh": _build_chsh,
    "holonomy": _build_holonomy,
    "chern": _build_chern,
}


def _check_axis(values: tuple[float, float, float]) -> None:
    """Usage error on degenerate axes, stderr warning on non-unit ones."""
    arr = np.asarray(values, dtype=float)
    norm = float(np.linalg.norm(arr))
    if not np.isfinite(norm) or norm <= 0.0:
        raise click.UsageError("axis must be a nonzero finite vector")
    if abs(norm - 1.0) > 1e-9:
        click.echo(f"warning: axis normalized (length was {norm:.6g})", err=True)


def _execute(
    ctx: click.Context,
    command: str,
    params: dict,
    out: Path | None,
    plot: Path | None,
    no_plot: bool,
) -> None:
    """Build the payload, then write or print it with its sidecars."""
    if plot is not None and no_plot:
        raise click.UsageError("--plot and --no-plot are mutually exclusive")
    started = time.perf_counter()
    try:
        payload, failed, figure, note = _BUILDERS[command](params)
    except GeometryError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(1)
    duration = time.perf_counter() - started
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(payload)
        manifest = RunManifest(
            command=command,
            parameters=params,
            seed=params.get("seed"),
            version=__version__,
            duration_s=duration,
            output=out.name,
            sha256=sha256_of_bytes(payload),
        )
        write_manifest(manifest, manifest_path_for(out))
    else:
        click.echo(payload.decode("utf-8"), nl=False)
    if out is not None and note is not None:
        click.echo(note.decode("utf-8"), nl=False)
    figure_path = plot
    if figure_path is None and out is not None and not no_plot:
        figure_path = out.with_suffix(".png")
    if figure_path is not None and figure is not None:
        figure(figure_path)
    if failed:
        ctx.exit(1)


_seed = click.option(
    "--seed",
    type=click.IntRange(0, MAX_SEED),
    default=0,
    show_default=True,
    help="RNG seed; runs are deterministic given the arguments and this.",
)
_workers = click.option(
    "--workers",
    type=click.IntRange(1, 64),
    default=1,
    show_default=True,
    help="Monte Carlo thread count; results are identical for every value.",
)
_out = click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write here (plus .manifest.json sidecar) instead of stdout.",
)
_compact = click.option(
    "--compact", is_flag=True, help="Single-line JSON instead of pretty-printed."
)
_plot = click.option(
    "--plot",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Render the figure to this path (default: next to --out).",
)
_no_plot = click.option("--no-plot", is_flag=True, help="Skip the figure.")


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option(__version__, "--version")
def main() -> None:
    """Hopf bundle geometry, holonomy, Chern numbers, and a singlet
    measurement simulator with reproducible Monte Carlo statistics."""


@main.command("fibration-check")
@click.option(
    "--n",
    type=click.Choice(["2", "4"]),
    default="2",
    show_default=True,
    help="Ambient complex dimension: 2 checks S^3 over CP^1, 4 checks S^7.",
)
@click.option("--trials", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option(
    "--tolerance", type=click.FloatRange(min=0.0), default=1e-12, show_default=True
)
@_seed
@_out
@_compact
@_plot
@_no_plot
@click.pass_context
def fibration_check(ctx, n, trials, tolerance, seed, out, compact, plot, no_plot):
    """Run the projection and diagram property suites on random inputs."""
    params = {
        "n": int(n),
        "trials": trials,
        "seed": seed,
        "tolerance": tolerance,
        "compact": compact,
    }
    _execute(ctx, "fibration-check", params, out, plot, no_plot)


@main.command()
@click.option(
    "--axis",
    nargs=3,
    type=float,
    default=(0.0, 0.0, 1.0),
    show_default=True,
    help="Measurement direction for particle 2 (normalized if needed).",
)
@click.option("--shots", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "csv"]),
    default="json",
    show_default=True,
    help="Event stream format; csv needs --out.",
)
@click.option(
    "--tolerance", type=click.FloatRange(min=0.0), default=1e-12, show_default=True
)
@_seed
@_workers
@_out
@_compact
@_plot
@_no_plot
@click.pass_context
def collapse(ctx, axis, shots, fmt, tolerance, seed, workers, out, compact, plot, no_plot):
    """Measure the singlet repeatedly: per-shot branch records + summary."""
    if fmt == "csv" and out is None:
        raise click.UsageError("--format csv requires --out")
    _check_axis(axis)
    params = {
        "axis": [float(c) for c in axis],
        "shots": shots,
        "seed": seed,
        "tolerance": tolerance,
        "format": fmt,
        "workers": workers,
        "compact": compact,
    }
    _execute(ctx, "collapse", params, out, plot, no_plot)


@main.command("correlation-sweep")
@click.option("--start", type=float, default=0.0, show_default=True, help="First angle (rad).")
@click.option(
    "--stop", type=float, default=float(np.pi), show_default=True, help="Last angle (rad)."
)
@click.option(
    "--count",
    type=click.IntRange(min=1),
    default=25,
    show_default=True,
    help="Grid points; the grid is inclusive of both ends.",
)
@click.option(
    "--shots",
    type=click.IntRange(min=1),
    default=None,
    help="Monte Carlo shots per angle; omitted = exact only (NaN MC columns).",
)
@_seed
@_workers
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="CSV destination (header theta_rad,E_exact,E_mc,mc_stderr).",
)
@_plot
@_no_plot
@click.pass_context
def correlation_sweep(ctx, start, stop, count, shots, seed, workers, out, plot, no_plot):
    """Sweep the angle between the two axes and tabulate correlations."""
    params = {
        "start_rad": start,
        "stop_rad": stop,
        "count": count,
        "shots": shots,
        "seed": seed,
        "workers": workers,
    }
    _execute(ctx, "correlation-sweep", params, out, plot, no_plot)


@main.command()
@click.option(
    "--angles",
    nargs=4,
    type=float,
    default=(0.0, float(np.pi / 2), float(np.pi / 4), float(3 * np.pi / 4)),
    show_default=True,
    help="The four x-z plane angles a, a', b, b' (default maximizes S).",
)
@click.option("--degrees", is_flag=True, help="Interpret --angles in degrees.")
@click.option(
    "--shots",
    type=click.IntRange(min=1),
    default=None,
    help="Monte Carlo shots per correlation; omitted = exact.",
)
@_seed
@_workers
@_out
@_compact
@_plot
@_no_plot
@click.pass_context
def chsh(ctx, angles, degrees, shots, seed, workers, out, compact, plot, no_plot):
    """Four singlet correlations and their CHSH combination S."""
    angles_rad = [float(np.deg2rad(a)) if degrees else float(a) for a in angles]
    params = {
        "angles_rad": angles_rad,
        "shots": shots,
        "seed": seed,
        "workers": workers,
        "compact": compact,
    }
    _execute(ctx, "chsh", params, out, plot, no_plot)


@main.command()
@click.option(
    "--axis",
    nargs=3,
    type=float,
    default=(0.0, 0.0, 1.0),
    show_default=True,
    help="Loop axis; the loop is the latitude circle about it.",
)
@click.option(
    "--theta",
    type=click.FloatRange(0.0, float(np.pi)),
    required=True,
    help="Polar angle of the latitude circle (rad).",
)
@click.option("--steps", type=click.IntRange(min=3), default=10000, show_default=True)
@click.option(
    "--tolerance", type=click.FloatRange(min=0.0), default=1e-6, show_default=True
)
@_out
@_compact
@_plot
@_no_plot
@click.pass_context
def holonomy(ctx, axis, theta, steps, tolerance, out, compact, plot, no_plot):
    """Transport around a latitude loop; compare with the solid angle."""
    _check_axis(axis)
    params = {
        "axis": [float(c) for c in axis],
        "theta_rad": theta,
        "steps": steps,
        "tolerance": tolerance,
        "compact": compact,
    }
    _execute(ctx, "holonomy", params, out, plot, no_plot)


@main.command()
@click.option(
    "--bundle",
    type=click.Choice(["tautological", "dual", "trivial", "power"]),
    default="tautological",
    show_default=True,
)
@click.option(
    "--k",
    type=int,
    default=None,
    help="Exponent for --bundle power: the k-th dual power, Chern number +k.",
)
@click.option("--mesh", type=click.IntRange(min=8), default=32, show_default=True)
@_out
@_compact
@_plot
@_no_plot
@click.pass_context
def chern(ctx, bundle, k, mesh, out, compact, plot, no_plot):
    """First Chern number of a line bundle from lattice plaquette phases."""
    if bundle == "power" and k is None:
        raise click.UsageError("--bundle power requires --k")
    if bundle != "power" and k is not None:
        raise click.UsageError("--k only applies to --bundle power")
    params = {"bundle": bundle, "k": k, "mesh": mesh, "compact": compact}
    _execute(ctx, "chern", params, out, plot, no_plot)


@main.command()
@click.argument(
    "manifest_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Also write the regenerated bytes here.",
)
@click.option(
    "--workers",
    type=click.IntRange(1, 64),
    default=None,
    help="Override the recorded worker count; the bytes must not change.",
)
@_compact
@click.pass_context
def replay(ctx, manifest_file, out, workers, compact):
    """Re-run a manifest and verify the output is byte-identical."""
    manifest = load_manifest(manifest_file)
    if manifest.command not in _BUILDERS:
        raise click.UsageError(f"manifest names unknown command {manifest.command!r}")
    if manifest.version != __version__:
        click.echo(
            f"warning: manifest written by version {manifest.version}, "
            f"this is {__version__}",
            err=True,
        )
    params = dict(manifest.parameters)
    if workers is not None:
        params["workers"] = workers
    try:
        payload, _, _, _ = _BUILDERS[manifest.command](params)
    except GeometryError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(1)
    digest = sha256_of_bytes(payload)
    match = digest == manifest.sha256
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(payload)
    report = {
        "command": "replay",
        "version": __version__,
        "parameters": {
            "manifest": manifest_file.name,
            "workers": params.get("workers"),
        },
        "results": {
            "replayed_command": manifest.command,
            "match": match,
            "expected_sha256": manifest.sha256,
            "actual_sha256": digest,
            "output": out.name if out is not None else None,
        },
    }
    click.echo(dumps(report, compact=compact), nl=False)
    if not match:
        ctx.exit(1)


if __name__ == "__main__":
    main()
