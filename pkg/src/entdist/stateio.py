"""JSON state files.

Density matrix::

    {"num_qubits": 2, "entries": [[{"re": 0.25, "im": 0.0}, ...], ...]}

Pure state::

    {"num_qubits": 2, "amplitudes": [{"re": 0.7071, "im": 0.0}, ...]}

Entries are row-major. A bare number is accepted as a real entry.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .qstate import BadDimension, DensityMatrix, PureState, StateError, make_density, make_pure


class StateFileError(ValueError):
    """The file could not be read or does not follow the schema."""


def _number(x) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, dict) and "re" in x:
        return complex(float(x["re"]), float(x.get("im", 0.0)))
    raise StateFileError(f"cannot read {x!r} as a complex number")


def _encode(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def state_from_dict(data: dict) -> DensityMatrix | PureState:
    if not isinstance(data, dict) or "num_qubits" not in data:
        raise StateFileError("state object needs a 'num_qubits' field")
    m = data["num_qubits"]
    if not isinstance(m, int) or m < 1:
        raise StateFileError(f"num_qubits must be a positive integer, got {m!r}")
    if "entries" in data:
        rows = data["entries"]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise StateFileError("'entries' must be a list of rows")
        mat = np.array([[_number(x) for x in row] for row in rows], dtype=complex)
        if mat.shape != (2**m, 2**m):
            raise BadDimension(f"entries have shape {mat.shape}, expected {(2**m, 2**m)}")
        return make_density(mat)
    if "amplitudes" in data:
        amps = data["amplitudes"]
        if not isinstance(amps, list):
            raise StateFileError("'amplitudes' must be a list")
        vec = np.array([_number(x) for x in amps], dtype=complex)
        if vec.shape != (2**m,):
            raise BadDimension(f"{len(vec)} amplitudes, expected {2**m}")
        return make_pure(vec)
    raise StateFileError("state object needs 'entries' or 'amplitudes'")


def state_to_dict(state) -> dict:
    if isinstance(state, PureState):
        return {"num_qubits": state.num_qubits, "amplitudes": [_encode(z) for z in state.amplitudes]}
    if isinstance(state, DensityMatrix):
        return {
            "num_qubits": state.num_qubits,
            "entries": [[_encode(z) for z in row] for row in state.matrix],
        }
    raise TypeError(f"cannot serialize {type(state).__name__}")


def load_state(path) -> DensityMatrix | PureState:
    """Read a state file. File and JSON problems raise :class:`StateFileError`
    (or ``OSError``); physical invariant violations raise :class:`StateError`."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: invalid JSON ({exc})") from exc
    return state_from_dict(data)


def dump_state(state, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state), indent=1))


__all__ = ["StateError", "StateFileError", "load_state", "dump_state", "state_from_dict", "state_to_dict"]
