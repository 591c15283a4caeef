"""Run manifests: the reproducibility sidecar written next to each output.

A manifest records everything needed to regenerate its output file to the
byte: command name, the full parameter set (execution details such as the
worker count included), seed, library version, and the SHA-256 of the
data file.  Wall-clock duration is recorded here and only here, so the
data files themselves stay byte-identical across reruns.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from .sampling import RNG_DESCRIPTION
from .serialization import dumps


@dataclass(frozen=True)
class RunManifest:
    """Provenance of one output file."""

    command: str
    parameters: dict
    seed: int | None
    version: str
    duration_s: float
    output: str
    sha256: str
    rng: str = RNG_DESCRIPTION

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        fields = {k: data[k] for k in (
            "command", "parameters", "seed", "version", "duration_s",
            "output", "sha256", "rng",
        )}
        return cls(**fields)


def manifest_path_for(output: Path) -> Path:
    """Sidecar path: the output file with a ``.manifest.json`` suffix."""
    return output.with_suffix(".manifest.json")


def write_manifest(manifest: RunManifest, path: Path) -> None:
    path.write_text(dumps(manifest.to_dict()), encoding="utf-8")


def load_manifest(path: Path) -> RunManifest:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return RunManifest.from_dict(data)
