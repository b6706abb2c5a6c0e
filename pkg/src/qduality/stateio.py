"""JSON state files.

A density matrix is ``{"dim": d, "entries": [[re, im], ...]}`` with d*d
row-major entries; a bipartite pure state is ``{"dimA": dA, "dimB": dB,
"amplitudes": [[re, im], ...]}``; a single-system pure state is
``{"dim": d, "amplitudes": [[re, im], ...]}``. Values are parsed as 64-bit
floats; bit-exact decimal round trips are not required.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .states import (
    BipartitePureState,
    DensityMatrix,
    PureStateVector,
    StateValidationError,
    validate_density_matrix,
)

__all__ = [
    "StateFileError",
    "parse_state",
    "load_state",
    "save_state",
    "state_to_json",
]


class StateFileError(ValueError):
    """Malformed or inconsistent state file content."""


def _complex_array(pairs, what: str) -> np.ndarray:
    try:
        arr = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"{what} must be an array of [re, im] pairs: {exc}") from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise StateFileError(f"{what} must be an array of [re, im] pairs, got shape {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


def parse_state(obj):
    """Dict from a state file -> DensityMatrix | BipartitePureState | PureStateVector."""
    if not isinstance(obj, dict):
        raise StateFileError(f"expected a JSON object, got {type(obj).__name__}")
    try:
        if "dimA" in obj or "dimB" in obj:
            dim_a, dim_b = int(obj["dimA"]), int(obj["dimB"])
            amps = _complex_array(obj["amplitudes"], "amplitudes")
            return BipartitePureState(dim_a, dim_b, amps)
        dim = int(obj["dim"])
        if "entries" in obj:
            entries = _complex_array(obj["entries"], "entries")
            if entries.size != dim * dim:
                raise StateFileError(f"expected {dim * dim} entries for dim {dim}, got {entries.size}")
            return validate_density_matrix(entries.reshape(dim, dim))
        amps = _complex_array(obj["amplitudes"], "amplitudes")
        if amps.size != dim:
            raise StateFileError(f"expected {dim} amplitudes, got {amps.size}")
        return PureStateVector(amps)
    except KeyError as exc:
        raise StateFileError(f"missing required key {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (StateFileError, StateValidationError)):
            raise
        raise StateFileError(str(exc)) from None


def load_state(path):
    """Read and parse one state file; raises StateFileError on malformed input."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON in {path}: {exc}") from None
    return parse_state(obj)


def _pairs(values: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).reshape(-1)]


def state_to_json(state) -> dict:
    if isinstance(state, DensityMatrix):
        return {"dim": state.dim, "entries": _pairs(state.matrix)}
    if isinstance(state, BipartitePureState):
        return {"dimA": state.dim_a, "dimB": state.dim_b, "amplitudes": _pairs(state.amplitudes)}
    if isinstance(state, PureStateVector):
        return {"dim": state.dim, "amplitudes": _pairs(state.amplitudes)}
    raise TypeError(f"cannot serialize {type(state).__name__}")


def save_state(state, path) -> None:
    Path(path).write_text(json.dumps(state_to_json(state)) + "\n")
