"""Byte-stable serialization for reports and sweeps.

Contracts: floats are written with ``repr`` (the shortest digit string
that round-trips to the same double); complex numbers become ``[re, im]``
pairs; JSON is emitted with sorted keys and a trailing newline so every
result has exactly one byte representation; CSV uses fixed headers and a
bare ``\\n`` line terminator.  Checksums in the run manifests are computed
over these exact bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

SWEEP_CSV_HEADER = ("theta_rad", "E_exact", "E_mc", "mc_stderr")
COLLAPSE_CSV_HEADER = (
    "shot",
    "outcome",
    "probability",
    "jump_rad",
    "diagram_commutes",
    "post_uu_re",
    "post_uu_im",
    "post_ud_re",
    "post_ud_im",
    "post_du_re",
    "post_du_im",
    "post_dd_re",
    "post_dd_im",
)


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy scalars, arrays, and complex numbers."""
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):  # before int: bool is an int subtype
        return bool(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if value is None or isinstance(value, str):
        return value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(payload: Any, *, compact: bool = False) -> str:
    """Canonical JSON text: sorted keys, no NaN, newline terminated."""
    data = to_jsonable(payload)
    if compact:
        text = json.dumps(data, sort_keys=True, allow_nan=False, separators=(",", ":"))
    else:
        text = json.dumps(data, sort_keys=True, allow_nan=False, indent=2)
    return text + "\n"


def format_cell(value: Any) -> str:
    """One CSV cell; booleans as 1/0, floats via repr so they round-trip."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV document with the given header and formatted rows."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])
    return buffer.getvalue()


def sha256_of_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_of_file(path: Path | str) -> str:
    return sha256_of_bytes(Path(path).read_bytes())
