"""JSON encodings shared by the CLI and the library.

Complex matrices are encoded row-major as ``[[[re, im], ...], ...]``.  Floats
are written with 17 significant digits so every double round-trips exactly
and reports are byte-identical across runs.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .costs import CostFunction, cost_function, identity_cost
from .engine import GuessworkReport, NumberingMeasurement
from .ensembles import Ensemble, validate
from .operators import from_bloch


def dumps(obj) -> str:
    """Deterministic JSON text with 17-significant-digit floats."""
    pieces: list[str] = []
    _write(obj, pieces)
    return "".join(pieces)


def _write(obj, pieces: list[str]) -> None:
    if obj is None:
        pieces.append("null")
    elif isinstance(obj, bool):
        pieces.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        pieces.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value) or math.isinf(value):
            pieces.append("null")
        else:
            pieces.append(format(value, ".17g"))
    elif isinstance(obj, str):
        pieces.append(json.dumps(obj))
    elif isinstance(obj, dict):
        pieces.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                pieces.append(", ")
            pieces.append(json.dumps(str(key)))
            pieces.append(": ")
            _write(value, pieces)
        pieces.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        pieces.append("[")
        for i, value in enumerate(obj):
            if i:
                pieces.append(", ")
            _write(value, pieces)
        pieces.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def matrix_to_json(mat) -> list:
    arr = np.asarray(mat, dtype=complex)
    return [[[float(cell.real), float(cell.imag)] for cell in row] for row in arr]


def matrix_from_json(rows) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError):
        raise ValueError("matrix entries must be [re, im] pairs")
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError(f"matrix must be encoded as rows of [re, im] pairs, got shape {arr.shape}")
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def ensemble_to_json(e: Ensemble) -> dict:
    return {"dim": e.dim, "states": [matrix_to_json(s) for s in e.states]}


def ensemble_from_json(doc: dict) -> Ensemble:
    if not isinstance(doc, dict) or "dim" not in doc:
        raise ValueError("ensemble JSON requires a 'dim' key")
    dim = int(doc["dim"])
    if "states" in doc:
        states = [matrix_from_json(rows) for rows in doc["states"]]
        for index, state in enumerate(states):
            if state.shape != (dim, dim):
                raise ValueError(f"state {index} has shape {state.shape}, expected ({dim}, {dim})")
        return validate(states)
    if "bloch" in doc:
        if dim != 2:
            raise ValueError("bloch-form ensembles require dim = 2")
        states = []
        for index, item in enumerate(doc["bloch"]):
            if "trace" not in item or "v" not in item:
                raise ValueError(f"bloch entry {index} requires 'trace' and 'v'")
            states.append(from_bloch(float(item["trace"]), [float(x) for x in item["v"]]))
        return validate(states)
    raise ValueError("ensemble JSON requires 'states' or 'bloch'")


def cost_to_json(c: CostFunction) -> dict:
    return {"values": list(c.values)}


def cost_from_json(doc: dict, size_hint: int | None = None) -> CostFunction:
    if not isinstance(doc, dict):
        raise ValueError("cost JSON must be an object")
    if "values" in doc:
        return cost_function([float(x) for x in doc["values"]])
    if "identity" in doc:
        m = int(doc["identity"])
        if size_hint is not None and m != size_hint:
            raise ValueError(f"identity cost of size {m} does not match ensemble size {size_hint}")
        return identity_cost(m)
    raise ValueError("cost JSON requires 'values' or 'identity'")


def measurement_to_json(m: NumberingMeasurement) -> dict:
    elements = [
        {"numbering": list(numbering), "matrix": matrix_to_json(element)}
        for numbering, element in sorted(m.elements.items())
    ]
    return {"elements": elements}


def measurement_from_json(doc: dict, dim: int) -> NumberingMeasurement:
    if "elements" not in doc:
        raise ValueError("measurement JSON requires 'elements'")
    elements = {}
    for item in doc["elements"]:
        numbering = tuple(int(x) for x in item["numbering"])
        elements[numbering] = matrix_from_json(item["matrix"])
    return NumberingMeasurement(dim=dim, elements=elements)


def report_to_json(r: GuessworkReport) -> dict:
    return {
        "value": r.value,
        "mean_cost": r.mean_cost,
        "trace_norm_term": r.trace_norm_term,
        "numbering": list(r.optimal_numbering),
        "method": r.method,
        "condition_verified": r.condition_verified,
        "measurement": measurement_to_json(r.measurement),
    }
