"""JSON file formats for every exchangeable object, plus atomic writes.

Complex numbers are serialized as two-element arrays [re, im]; matrices as
{"rows": n, "cols": n, "entries": [[re, im], ...]} in row-major order.
Documents are dispatched on their "kind" field. Loaders re-validate
everything they read; a file that parses but violates an invariant is
rejected with SchemaError or the matching typed error.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .errors import SchemaError
from .probability import CondProbMatrix, MicStructure, ProbVector, mic_duals
from .quantum import (
    DensityMatrix,
    OutcomeDistribution,
    Povm,
    Unitary,
    validate_density,
    validate_povm,
    validate_unitary,
)
from .search import SearchResult
from .sic import Fiducial, SicStructure, make_fiducial, sic_from_projectors
from .simulate import SIC_READOUT, Circuit, CircuitStep, TrackReport


def _require(condition: bool, message: str):
    if not condition:
        raise SchemaError(message)


def _get(doc: dict, key: str, kind: str):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{kind} document is missing required field {key!r}")
    return doc[key]


def _get_dim(doc: dict, kind: str) -> int:
    dim = _get(doc, "dim", kind)
    _require(isinstance(dim, int) and not isinstance(dim, bool) and dim >= 2,
             f"{kind} dim must be an integer >= 2, got {dim!r}")
    return dim


def complex_pairs(values: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex).ravel()]


def pairs_to_complex(pairs, what: str) -> np.ndarray:
    _require(isinstance(pairs, list), f"{what} must be a list of [re, im] pairs")
    out = np.empty(len(pairs), dtype=complex)
    for i, pair in enumerate(pairs):
        _require(
            isinstance(pair, list) and len(pair) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair),
            f"{what}[{i}] must be a [re, im] pair of numbers",
        )
        out[i] = complex(pair[0], pair[1])
    return out


def matrix_to_json(matrix: np.ndarray) -> dict:
    m = np.asarray(matrix, dtype=complex)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "entries": complex_pairs(m)}


def matrix_from_json(doc: dict, what: str = "matrix") -> np.ndarray:
    rows = _get(doc, "rows", what)
    cols = _get(doc, "cols", what)
    _require(isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0,
             f"{what} rows/cols must be positive integers")
    flat = pairs_to_complex(_get(doc, "entries", what), f"{what} entries")
    _require(flat.size == rows * cols, f"{what} needs {rows * cols} entries, got {flat.size}")
    return flat.reshape(rows, cols)


def density_to_json(rho: DensityMatrix) -> dict:
    return {"kind": "density", "dim": rho.dim, "matrix": matrix_to_json(rho.matrix)}


def density_from_json(doc: dict) -> DensityMatrix:
    dim = _get_dim(doc, "density")
    matrix = matrix_from_json(_get(doc, "matrix", "density"), "density matrix")
    _require(matrix.shape == (dim, dim), f"density matrix shape {matrix.shape} does not match dim {dim}")
    return validate_density(matrix)


def unitary_to_json(u: Unitary) -> dict:
    return {"kind": "unitary", "dim": u.dim, "matrix": matrix_to_json(u.matrix)}


def unitary_from_json(doc: dict) -> Unitary:
    dim = _get_dim(doc, "unitary")
    matrix = matrix_from_json(_get(doc, "matrix", "unitary"), "unitary matrix")
    _require(matrix.shape == (dim, dim), f"unitary shape {matrix.shape} does not match dim {dim}")
    return validate_unitary(matrix)


def povm_to_json(povm: Povm) -> dict:
    return {
        "kind": "povm",
        "dim": povm.dim,
        "effects": [matrix_to_json(e) for e in povm.effects],
    }


def povm_from_json(doc: dict) -> Povm:
    dim = _get_dim(doc, "povm")
    effects_doc = _get(doc, "effects", "povm")
    _require(isinstance(effects_doc, list) and effects_doc, "povm effects must be a nonempty list")
    effects = np.stack([matrix_from_json(e, f"effect {j}") for j, e in enumerate(effects_doc)])
    _require(effects.shape[1:] == (dim, dim), f"povm effects do not match dim {dim}")
    return validate_povm(effects)


def fiducial_to_json(fiducial: Fiducial) -> dict:
    return {"kind": "fiducial", "dim": fiducial.dim, "vector": complex_pairs(fiducial.vector)}


def fiducial_from_json(doc: dict) -> Fiducial:
    dim = _get_dim(doc, "fiducial")
    vector = pairs_to_complex(_get(doc, "vector", "fiducial"), "fiducial vector")
    _require(vector.size == dim, f"fiducial vector length {vector.size} does not match dim {dim}")
    norm = float(np.linalg.norm(vector))
    _require(abs(norm - 1.0) < 1e-6, f"fiducial vector norm {norm!r} is not 1")
    return make_fiducial(vector)


def sic_to_json(sic: SicStructure) -> dict:
    return {
        "kind": "sic",
        "dim": sic.dim,
        "fiducial": None if sic.fiducial is None else complex_pairs(sic.fiducial.vector),
        "projectors": [matrix_to_json(p) for p in sic.projectors],
        "residual": float(sic.residual),
    }


def sic_from_json(doc: dict) -> SicStructure:
    dim = _get_dim(doc, "sic")
    projectors_doc = _get(doc, "projectors", "sic")
    _require(isinstance(projectors_doc, list) and projectors_doc, "sic projectors must be a nonempty list")
    projectors = np.stack(
        [matrix_from_json(p, f"projector {i}") for i, p in enumerate(projectors_doc)]
    )
    fiducial_doc = doc.get("fiducial")
    fiducial = None
    if fiducial_doc is not None:
        fiducial = make_fiducial(pairs_to_complex(fiducial_doc, "sic fiducial"))
    return sic_from_projectors(projectors, dim, fiducial=fiducial)


def probs_to_json(p: ProbVector) -> dict:
    return {"kind": "probs", "dim": p.dim, "entries": [float(x) for x in p.entries]}


def probs_from_json(doc: dict) -> ProbVector:
    dim = _get_dim(doc, "probs")
    entries = _get(doc, "entries", "probs")
    _require(
        isinstance(entries, list)
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entries),
        "probs entries must be a list of numbers",
    )
    return ProbVector(dim, np.asarray(entries, dtype=float))


def cond_probs_to_json(r: CondProbMatrix) -> dict:
    return {
        "kind": "cond_probs",
        "dim": r.dim,
        "rows": int(r.matrix.shape[0]),
        "cols": int(r.matrix.shape[1]),
        "entries": [float(x) for x in r.matrix.ravel()],
    }


def cond_probs_from_json(doc: dict) -> CondProbMatrix:
    dim = _get_dim(doc, "cond_probs")
    rows = _get(doc, "rows", "cond_probs")
    cols = _get(doc, "cols", "cond_probs")
    _require(isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0,
             "cond_probs rows/cols must be positive integers")
    entries = np.asarray(_get(doc, "entries", "cond_probs"), dtype=float)
    _require(entries.size == rows * cols, "cond_probs entries do not match rows*cols")
    return CondProbMatrix(dim, entries.reshape(rows, cols))


def mic_to_json(mic: MicStructure) -> dict:
    return {
        "kind": "mic",
        "dim": mic.dim,
        "effects": [matrix_to_json(e) for e in mic.effects],
        "duals": [matrix_to_json(m) for m in mic.duals],
    }


def mic_from_json(doc: dict) -> MicStructure:
    dim = _get_dim(doc, "mic")
    effects_doc = _get(doc, "effects", "mic")
    _require(isinstance(effects_doc, list) and effects_doc, "mic effects must be a nonempty list")
    effects = np.stack([matrix_from_json(e, f"effect {j}") for j, e in enumerate(effects_doc)])
    # duals are recomputed, never trusted from the file
    return mic_duals(effects, dim)


def search_result_to_json(result: SearchResult, dim: int) -> dict:
    return {
        "kind": "search_result",
        "dim": dim,
        "status": result.status,
        "fiducial": None if result.fiducial is None else complex_pairs(result.fiducial.vector),
        "residual": float(result.residual),
        "frame_potential_gap": float(result.frame_potential_gap),
        "restarts_used": int(result.restarts_used),
        "iterations_used": int(result.iterations_used),
        "seed": int(result.seed),
    }


def circuit_to_json(circuit: Circuit) -> dict:
    if isinstance(circuit.initial, DensityMatrix):
        initial = density_to_json(circuit.initial)
    else:
        initial = probs_to_json(circuit.initial)
    if circuit.final_measurement == SIC_READOUT:
        final = SIC_READOUT
    else:
        final = povm_to_json(circuit.final_measurement)
    return {
        "kind": "circuit",
        "dim": circuit.dim,
        "initial": initial,
        "steps": [
            {"unitary": matrix_to_json(s.unitary.matrix), "label": s.label}
            for s in circuit.steps
        ],
        "final_measurement": final,
    }


def circuit_from_json(doc: dict) -> Circuit:
    dim = _get_dim(doc, "circuit")
    initial_doc = _get(doc, "initial", "circuit")
    initial_kind = _get(initial_doc, "kind", "circuit initial")
    if initial_kind == "density":
        initial = density_from_json(initial_doc)
    elif initial_kind == "probs":
        initial = probs_from_json(initial_doc)
    else:
        raise SchemaError(f"circuit initial must be a density or probs document, got {initial_kind!r}")

    steps_doc = _get(doc, "steps", "circuit")
    _require(isinstance(steps_doc, list), "circuit steps must be a list")
    steps = []
    for k, step in enumerate(steps_doc):
        matrix = matrix_from_json(_get(step, "unitary", f"step {k}"), f"step {k} unitary")
        label = step.get("label")
        _require(label is None or isinstance(label, str), f"step {k} label must be a string or null")
        steps.append(CircuitStep(unitary=validate_unitary(matrix), label=label))

    final_doc = _get(doc, "final_measurement", "circuit")
    if final_doc == SIC_READOUT:
        final = SIC_READOUT
    elif isinstance(final_doc, dict):
        final = povm_from_json(final_doc)
    else:
        raise SchemaError('circuit final_measurement must be "sic" or a povm document')
    return Circuit(dim=dim, initial=initial, steps=tuple(steps), final_measurement=final)


def _sci17(x: float) -> str:
    """Scientific notation with 17 significant digits."""
    return f"{float(x):.16e}"


def distribution_to_json(dist: OutcomeDistribution) -> dict:
    return {
        "entries": [float(x) for x in dist.entries],
        "pre_clamp_deviation": _sci17(dist.pre_clamp_deviation),
    }


def track_report_to_json(report: TrackReport) -> dict:
    return {
        "kind": "track_report",
        "amplitude_outcome": distribution_to_json(report.amplitude_outcome),
        "probability_outcome": distribution_to_json(report.probability_outcome),
        "max_abs_deviation": _sci17(report.max_abs_deviation),
        "per_step_deviations": [_sci17(x) for x in report.per_step_deviations],
    }


_LOADERS = {
    "density": density_from_json,
    "unitary": unitary_from_json,
    "povm": povm_from_json,
    "fiducial": fiducial_from_json,
    "sic": sic_from_json,
    "probs": probs_from_json,
    "cond_probs": cond_probs_from_json,
    "mic": mic_from_json,
    "circuit": circuit_from_json,
}


def parse_document(doc: dict):
    """Dispatch a parsed JSON document on its "kind" field."""
    kind = _get(doc, "kind", "document")
    if kind not in _LOADERS:
        raise SchemaError(f"unknown document kind {kind!r}")
    return _LOADERS[kind](doc)


def read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{path} must contain a JSON object")
    return doc


def load_document(path: str):
    return parse_document(read_json(path))


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def write_json_atomic(path: str, payload: dict):
    """Write a report without ever leaving a partial file behind."""
    directory = os.path.dirname(os.path.abspath(path))
    handle, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8") as tmp:
            tmp.write(dumps(payload))
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
