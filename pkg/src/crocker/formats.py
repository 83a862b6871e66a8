"""Readers and writers for every on-disk artifact.

Floats are written with ``repr`` (shortest round-tripping form, ``inf`` for
infinity), files use LF line endings, and JSON key order is fixed, so
writing what was read reproduces the original bytes.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from .analysis import Accuracy, ClusterResult
from .errors import InvalidInput, IoError
from .persistence import Barcode
from .summaries import CrockerStack


def _f(x) -> str:
    return repr(float(x))


def _write_text(path, text: str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n", encoding="ascii") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _read_text(path) -> str:
    try:
        with open(path, "r", newline="", encoding="ascii") as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def _lines(path, header: str | None) -> list[str]:
    lines = _read_text(path).split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if header is not None:
        if not lines or lines[0] != header:
            raise InvalidInput(f"{path}: expected header {header!r}")
        lines = lines[1:]
    return lines


def _json_float(x):
    x = float(x)
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _from_json_float(x) -> float:
    return float(x)


def _dump_json(path, obj) -> None:
    _write_text(path, json.dumps(obj, separators=(",", ":")) + "\n")


def _load_json(path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON ({exc})") from exc


# traces

TRACE_HEADER = "t,id,x,y,theta"


def write_trace(path, frames: np.ndarray) -> None:
    """One row per agent per frame; ``t`` is the integer step index."""
    frames = np.asarray(frames, dtype=float)
    rows = [TRACE_HEADER]
    for t, frame in enumerate(frames):
        for i, (x, y, th) in enumerate(frame.tolist()):
            rows.append(f"{t},{i},{x!r},{y!r},{th!r}")
    _write_text(path, "\n".join(rows) + "\n")


def read_trace(path) -> np.ndarray:
    """Frames array of shape ``(steps + 1, n, 3)``."""
    lines = _lines(path, TRACE_HEADER)
    if not lines:
        raise InvalidInput(f"{path}: empty trace")
    data = np.array([ln.split(",") for ln in lines], dtype=object)
    t = data[:, 0].astype(np.int64)
    ids = data[:, 1].astype(np.int64)
    n = int(ids.max()) + 1
    steps = int(t.max()) + 1
    if len(lines) != n * steps:
        raise InvalidInput(f"{path}: ragged trace")
    frames = np.empty((steps, n, 3))
    frames[t, ids] = data[:, 2:5].astype(float)
    return frames


# order parameter series

ORDER_HEADER = "t,phi"


def write_series(path, times, values) -> None:
    rows = [ORDER_HEADER] + [f"{_f(t)},{_f(v)}" for t, v in zip(times, values)]
    _write_text(path, "\n".join(rows) + "\n")


def read_series(path) -> tuple[np.ndarray, np.ndarray]:
    lines = _lines(path, ORDER_HEADER)
    arr = np.array([[float(x) for x in ln.split(",")] for ln in lines]).reshape(-1, 2)
    return arr[:, 0], arr[:, 1]


# barcodes

BARCODE_HEADER = "dim,birth,death"


def write_barcode(path, barcode: Barcode) -> None:
    rows = [BARCODE_HEADER] + [f"{k},{_f(b)},{_f(d)}" for k, b, d in barcode.intervals]
    _write_text(path, "\n".join(rows) + "\n")


def read_barcode(path, max_scale: float = math.inf) -> Barcode:
    rows = [ln.split(",") for ln in _lines(path, BARCODE_HEADER)]
    return Barcode.from_intervals([(int(k), float(b), float(d)) for k, b, d in rows], max_scale)


def write_barcode_series(directory, times, barcodes) -> None:
    """``index.json`` with times and scale range, plus one CSV per slice."""
    directory = Path(directory)
    files = []
    for k, b in enumerate(barcodes):
        name = f"slice_{k:05d}.csv"
        write_barcode(directory / name, b)
        files.append(name)
    scales = [_json_float(b.max_scale) for b in barcodes]
    _dump_json(directory / "index.json",
               {"times": [float(t) for t in times], "max_scale": scales, "files": files})


def read_barcode_series(directory):
    from .summaries import TimeVaryingBarcode

    directory = Path(directory)
    index = _load_json(directory / "index.json")
    barcodes = [read_barcode(directory / name, _from_json_float(s))
                for name, s in zip(index["files"], index["max_scale"])]
    return TimeVaryingBarcode(np.array(index["times"], dtype=float), barcodes)


# crocker stacks and plots

def write_stack(path, stack: CrockerStack) -> None:
    obj = {
        "times": [float(t) for t in stack.times],
        "epsilons": [float(e) for e in stack.epsilons],
        "alphas": [float(a) for a in stack.alphas],
        "dim": int(stack.dim),
        "max_scale": _json_float(stack.max_scale),
        "values": np.asarray(stack.values, dtype=np.int64).reshape(-1).tolist(),
    }
    _dump_json(path, obj)


def read_stack(path) -> CrockerStack:
    obj = _load_json(path)
    times = np.array(obj["times"], dtype=float)
    eps = np.array(obj["epsilons"], dtype=float)
    alphas = np.array(obj["alphas"], dtype=float)
    values = np.array(obj["values"], dtype=np.int64)
    if values.size != len(times) * len(eps) * len(alphas):
        raise InvalidInput(f"{path}: value count does not match the grid")
    return CrockerStack(times, eps, alphas, values.reshape(len(times), len(eps), len(alphas)),
                        int(obj["dim"]), _from_json_float(obj["max_scale"]))


def write_matrix_csv(path, matrix) -> None:
    m = np.asarray(matrix)
    if np.issubdtype(m.dtype, np.integer):
        rows = [",".join(str(int(v)) for v in row) for row in m]
    else:
        rows = [",".join(_f(v) for v in row) for row in m]
    _write_text(path, "\n".join(rows) + "\n")


def read_matrix_csv(path, dtype=float) -> np.ndarray:
    lines = _lines(path, None)
    if dtype is int:
        return np.array([[int(v) for v in ln.split(",")] for ln in lines], dtype=np.int64)
    return np.array([[float(v) for v in ln.split(",")] for ln in lines], dtype=float)


def write_stack_slices(directory, stack: CrockerStack, prefix: str = "slice") -> list[Path]:
    """One CSV per alpha: rows are times, columns are eps values."""
    paths = []
    for k, a in enumerate(stack.alphas):
        p = Path(directory) / f"{prefix}_alpha{k:02d}.csv"
        write_matrix_csv(p, stack.values[:, :, k])
        paths.append(p)
    return paths


# distance matrices

def write_distance_matrix(path, dm: np.ndarray) -> None:
    write_matrix_csv(path, np.asarray(dm, dtype=float))


def read_distance_matrix(path) -> np.ndarray:
    dm = read_matrix_csv(path, float)
    if dm.ndim != 2 or dm.shape[0] != dm.shape[1]:
        raise InvalidInput(f"{path}: distance matrix is not square")
    return dm


# clustering

def _label(x):
    return float(x) if isinstance(x, (float, np.floating)) else x


def write_cluster(path, result: ClusterResult, labels, acc: Accuracy) -> None:
    labels = np.asarray(labels)
    obj = {
        "medoid_indices": [int(m) for m in result.medoid_indices],
        "medoid_labels": [_label(labels[m]) for m in result.medoid_indices],
        "assignment": [int(a) for a in result.assignment],
        "cost": float(result.cost),
        "accuracy": float(acc.accuracy),
        "confusion": {
            "rows": [_label(v) for v in acc.row_labels],
            "columns": [_label(v) for v in acc.column_labels],
            "counts": np.asarray(acc.confusion, dtype=np.int64).tolist(),
        },
    }
    _dump_json(path, obj)


def read_cluster(path) -> tuple[ClusterResult, np.ndarray, Accuracy]:
    obj = _load_json(path)
    result = ClusterResult(np.array(obj["medoid_indices"], dtype=np.int64),
                           np.array(obj["assignment"], dtype=np.int64), float(obj["cost"]))
    conf = obj["confusion"]
    acc = Accuracy(float(obj["accuracy"]), list(conf["rows"]), list(conf["columns"]),
                   np.array(conf["counts"], dtype=np.int64).reshape(len(conf["rows"]), len(conf["columns"])))
    return result, np.array(obj["medoid_labels"]), acc


# images

def write_pgm(path, grid: np.ndarray, clamp: float | None = None) -> None:
    """Plain (P2) grayscale image of a (time, eps) grid.

    Columns are times left to right, rows are eps with the largest at the
    top.  Values above ``clamp`` render as ``clamp``; gray levels run 0..255
    over [0, clamp] (or [0, max] without a clamp).
    """
    g = np.asarray(grid, dtype=float)
    if clamp is not None:
        g = np.minimum(g, clamp)
    top = clamp if clamp is not None else float(g.max(initial=0.0))
    top = top if top > 0 else 1.0
    pix = np.rint(255.0 * np.clip(g, 0, None) / top).astype(np.int64)
    img = pix.T[::-1]
    h, w = img.shape
    rows = ["P2", f"{w} {h}", "255"] + [" ".join(str(v) for v in row) for row in img]
    _write_text(path, "\n".join(rows) + "\n")


def read_pgm(path) -> np.ndarray:
    tokens = _read_text(path).split()
    if not tokens or tokens[0] != "P2":
        raise InvalidInput(f"{path}: not a plain PGM file")
    w, h = int(tokens[1]), int(tokens[2])
    return np.array([int(v) for v in tokens[4:4 + w * h]], dtype=np.int64).reshape(h, w)


# manifests

def write_manifest(path, manifest: dict) -> None:
    _dump_json(path, manifest)


def read_manifest(path) -> dict:
    if not os.path.exists(path):
        raise IoError(f"manifest {path} not found")
    return _load_json(path)
