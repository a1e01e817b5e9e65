"""State-file parsing and delimited output for the command-line front end.

State files are JSON documents with ``num_qubits`` plus either
``amplitudes`` (2^N [real, imaginary] pairs, qubit 1 = most significant
index bit) or ``dicke`` (N+1 [real, imaginary] pairs of Dicke-basis
coefficients).  Values are parsed by the JSON decoder, i.e. to the nearest
double of the written decimal.

CSV emission is fully deterministic: floats at 17 significant digits,
booleans as true/false, a ``# schema_version=`` line plus run metadata as
leading comment lines, and optional trailing ``#`` summary lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .states import PureState, SymmetricState, symmetric_to_pure

__all__ = [
    "SCHEMA_VERSION",
    "StateFileError",
    "NormalizationError",
    "LoadedState",
    "load_state_file",
    "write_csv",
    "read_csv",
    "format_value",
]

SCHEMA_VERSION = 1

# acceptance tolerance on | norm - 1 | of state-file inputs
NORM_ACCEPT_TOL = 1e-9


class StateFileError(Exception):
    """Unparseable or structurally invalid state file."""


class NormalizationError(Exception):
    """State file holds an unnormalized state and renormalization is off."""

    def __init__(self, norm):
        super().__init__(
            f"state is not normalized: norm = {norm:.17g} "
            f"(deviation {abs(norm - 1.0):.3e}); pass --renormalize to accept"
        )
        self.norm = norm


@dataclass(frozen=True)
class LoadedState:
    pure: PureState
    symmetric: SymmetricState | None
    source: str  # "amplitudes" or "dicke"


def _parse_pairs(raw, count, field, path):
    if not isinstance(raw, list) or len(raw) != count:
        raise StateFileError(
            f"{path}: field '{field}' must be a list of {count} [real, imaginary] pairs"
        )
    values = np.empty(count, dtype=complex)
    for index, pair in enumerate(raw):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        ):
            raise StateFileError(
                f"{path}: entry {index} of '{field}' is not a [real, imaginary] number pair"
            )
        values[index] = complex(pair[0], pair[1])
    return values


def load_state_file(path, renormalize=False, tolerance=NORM_ACCEPT_TOL):
    """Parse a state file; see the module docstring for the format.

    Raises StateFileError on parse/structure problems and
    NormalizationError when the norm deviates by more than ``tolerance``
    and ``renormalize`` is not set.  Accepted states are normalized exactly
    once before use.
    """
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise StateFileError(f"{path}: expected a JSON object at the top level")
    num_qubits = raw.get("num_qubits")
    if not isinstance(num_qubits, int) or isinstance(num_qubits, bool) or num_qubits < 1:
        raise StateFileError(f"{path}: 'num_qubits' must be a positive integer")
    has_amplitudes = "amplitudes" in raw
    has_dicke = "dicke" in raw
    if has_amplitudes == has_dicke:
        raise StateFileError(f"{path}: exactly one of 'amplitudes' or 'dicke' is required")
    if has_amplitudes:
        values = _parse_pairs(raw["amplitudes"], 2 ** num_qubits, "amplitudes", path)
    else:
        values = _parse_pairs(raw["dicke"], num_qubits + 1, "dicke", path)
    norm = float(np.linalg.norm(values))
    if norm == 0.0:
        raise StateFileError(f"{path}: state vector is zero")
    if abs(norm - 1.0) > tolerance and not renormalize:
        raise NormalizationError(norm)
    values = values / norm
    if has_amplitudes:
        return LoadedState(PureState(values, check_norm=False), None, "amplitudes")
    symmetric = SymmetricState(values, check_norm=False)
    return LoadedState(symmetric_to_pure(symmetric), symmetric, "dicke")


def format_value(value):
    """Deterministic text form: 17 significant digits, true/false booleans."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(stream, fieldnames, rows, metadata=None, trailing=()):
    """Write rows of dicts as CSV with comment-line metadata and summaries."""
    stream.write(f"# schema_version={SCHEMA_VERSION}\n")
    for key, value in (metadata or {}).items():
        stream.write(f"# {key}={format_value(value)}\n")
    stream.write(",".join(fieldnames) + "\n")
    for row in rows:
        stream.write(",".join(format_value(row[name]) for name in fieldnames) + "\n")
    for line in trailing:
        stream.write(f"# {line}\n")


def read_csv(path):
    """Inverse of write_csv: (metadata, rows-as-string-dicts, trailing lines)."""
    metadata = {}
    trailing = []
    rows = []
    fieldnames = None
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body and fieldnames is None:
                key, _, value = body.partition("=")
                metadata[key.strip()] = value.strip()
            else:
                trailing.append(body)
            continue
        if fieldnames is None:
            fieldnames = line.split(",")
            continue
        rows.append(dict(zip(fieldnames, line.split(","))))
    return metadata, rows, trailing
