"""JSON file formats for graphs, instances, reduction metadata and certificates.

Costs are written as decimal numbers (integers without a fraction part,
other floats in shortest round-trip form) and infinity as the string
``"inf"``.  Output is deterministic: the same object always serializes to
the same bytes, and parse -> serialize reproduces a file exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .core import (
    HmmInstance, KPartiteGraph, ReductionOutput, ValidationError, WalkInstance, ext_cost,
)


def _num(x) -> Any:
    if isinstance(x, (np.integer, int)) and not isinstance(x, bool):
        return int(x)
    x = float(x)
    if math.isinf(x):
        return "inf"
    if x.is_integer() and abs(x) < 2 ** 53:
        return int(x)
    return x


def _rows(M) -> list:
    return [[_num(x) for x in row] for row in np.asarray(M)]


def _dumps(obj, indent: int = 0) -> str:
    """json.dumps with one matrix row per line."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {_dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, list) and obj and all(isinstance(r, list) for r in obj):
        rows = [f"{pad}  {json.dumps(r, separators=(',', ', '))}" for r in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    return json.dumps(obj, separators=(", ", ": "))


def dumps(doc: dict) -> str:
    return _dumps(doc) + "\n"


def _write(path, doc: dict) -> None:
    Path(path).write_text(dumps(doc))


def _read(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: malformed JSON ({e})") from None


def _costs(rows, name: str) -> np.ndarray:
    try:
        return np.array([[ext_cost(x) for x in row] for row in rows], dtype=np.float64)
    except TypeError:
        raise ValidationError(f"{name} must be a list of rows") from None


# -- graphs --------------------------------------------------------------------

def graph_to_doc(G: KPartiteGraph) -> dict:
    weights = {f"{i}-{j}": _rows(w) for (i, j), w in sorted(G.cross_weights.items())}
    return {"part_sizes": list(G.part_sizes), "weights": weights}


def graph_from_doc(doc: dict) -> KPartiteGraph:
    try:
        sizes = tuple(int(s) for s in doc["part_sizes"])
        cross = {}
        for key, rows in doc["weights"].items():
            i, j = (int(x) for x in key.split("-"))
            cross[(i, j)] = np.array(rows, dtype=np.int64).reshape(-1, sizes[j]) if rows else \
                np.zeros((sizes[i], sizes[j]), dtype=np.int64)
    except (KeyError, ValueError, IndexError) as e:
        raise ValidationError(f"malformed graph document: {e}") from None
    return KPartiteGraph(sizes, cross)


def complete_graph_to_doc(weights: np.ndarray) -> dict:
    return {"kind": "complete", "n": int(weights.shape[0]), "weights": _rows(weights)}


def write_graph(path, G) -> None:
    if isinstance(G, KPartiteGraph):
        _write(path, graph_to_doc(G))
    else:
        _write(path, complete_graph_to_doc(np.asarray(G)))


def read_graph(path):
    """A :class:`KPartiteGraph`, or a weight matrix for ``"kind": "complete"`` files."""
    doc = _read(path)
    if doc.get("kind") == "complete":
        return np.array(doc["weights"], dtype=np.int64)
    return graph_from_doc(doc)


# -- instances -------------------------------------------------------------------

def instance_to_doc(instance, obs=None) -> dict:
    if isinstance(instance, WalkInstance):
        return {"kind": "walk", "n": instance.n, "T": instance.T,
                "start_state": instance.start_state, "A": _rows(instance.A)}
    doc = {"kind": "viterbi", "n": instance.n, "sigma": instance.sigma,
           "start_state": instance.start_state,
           "A": _rows(instance.A), "B": _rows(instance.B),
           "obs": [int(s) for s in (obs if obs is not None else [])]}
    if instance.symbol_names:
        doc["symbol_names"] = {str(k): v for k, v in sorted(instance.symbol_names.items())}
    return doc


def instance_from_doc(doc: dict):
    """``(HmmInstance, obs)`` or ``(WalkInstance, None)``."""
    try:
        kind = doc.get("kind", "viterbi")
        A = _costs(doc["A"], "A")
        if A.shape != (doc["n"], doc["n"]):
            raise ValidationError(f"A has shape {A.shape}, expected n={doc['n']}")
        if kind == "walk":
            return WalkInstance(A, int(doc["T"]), int(doc.get("start_state", 0))), None
        B = _costs(doc["B"], "B")
        if B.shape[1:] != (doc["sigma"],):
            raise ValidationError(f"B has shape {B.shape}, expected sigma={doc['sigma']}")
        names = doc.get("symbol_names")
        if names is not None:
            names = {int(k): v for k, v in names.items()}
        inst = HmmInstance(A, B, int(doc.get("start_state", 0)), names)
        return inst, np.array(doc.get("obs", []), dtype=np.int64)
    except KeyError as e:
        raise ValidationError(f"instance document missing field {e}") from None


def write_instance(path, instance, obs=None) -> None:
    _write(path, instance_to_doc(instance, obs))


def read_instance(path):
    return instance_from_doc(_read(path))


# -- reduction metadata ----------------------------------------------------------

def metadata_doc(out: ReductionOutput) -> dict:
    return {
        "reduction": out.params.get("reduction"),
        "cost_offset": _num(out.cost_offset),
        "params": {k: v for k, v in out.params.items() if k != "reduction"},
        "layout": out.layout,
        "witness_map": {str(s): list(pv) for s, pv in sorted(out.witness_map.items())},
    }


def write_reduction(instance_path, meta_path, out: ReductionOutput) -> None:
    write_instance(instance_path, out.instance, out.observations)
    _write(meta_path, metadata_doc(out))


def read_metadata(path) -> dict:
    doc = _read(path)
    doc["cost_offset"] = ext_cost(doc.get("cost_offset", 0))
    return doc


def reduction_from_files(instance_path, meta_path) -> ReductionOutput:
    inst, obs = read_instance(instance_path)
    meta = read_metadata(meta_path)
    params = dict(meta.get("params", {}))
    params["reduction"] = meta.get("reduction")
    witness = {int(s): tuple(pv) for s, pv in meta.get("witness_map", {}).items()}
    return ReductionOutput(inst, obs, meta["cost_offset"], witness, meta.get("layout", {}), params)


# -- certificates -----------------------------------------------------------------

def write_certificate(path, vectors) -> None:
    _write(path, {"vectors": [[_num(x) for x in v] for v in vectors]})


def read_certificate(path) -> list[np.ndarray]:
    doc = _read(path)
    try:
        return [np.array([ext_cost(x) for x in v]) for v in doc["vectors"]]
    except KeyError:
        raise ValidationError("certificate document missing field 'vectors'") from None
