"""Readers and writers for the on-disk artifacts.

All machine-readable numbers are written with 17 significant digits so a
write/read round trip reproduces every float64 bit-exactly; human-facing
tables elsewhere use 7.  Documented in docs/formats.md.
"""

from __future__ import annotations

import json
import math
import os
from typing import Any

import numpy as np

from .errors import CsvParse, ModelParse
from .model import ClusterModel, DistributionEstimate

MODEL_FORMAT = "rnml-model"
MODEL_VERSION = 1


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any float64 exactly."""
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# JSON with controlled float formatting
# ---------------------------------------------------------------------------

def dumps_json(obj: Any, indent: int = 0) -> str:
    """Serialize to JSON, floats via fmt().  Supports the plain data types."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  {json.dumps(str(k))}: {dumps_json(v, indent + 1)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        body = ", ".join(dumps_json(v, indent + 1) for v in seq)
        if len(body) <= 100:
            return "[" + body + "]"
        items = [f"{pad}  {dumps_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            raise ValueError(f"cannot serialize non-finite value {v!r}")
        return fmt(v)
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path: str | os.PathLike, obj: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(obj) + "\n")


# ---------------------------------------------------------------------------
# Model document
# ---------------------------------------------------------------------------

def model_to_document(model: ClusterModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "d_x": model.d_x,
        "m": model.m,
        "lambda_used": model.lambda_used,
        "eigenvalues": model.eigenvalues,
        "eigenvectors": [row for row in model.eigenvectors],
        "g_inv": [row for row in model.g_inv],
        "y_vec": model.y_vec,
        "coverage": model.coverage,
        "localization": model.localization,
    }


def write_model_json(path: str | os.PathLike, model: ClusterModel) -> None:
    write_json(path, model_to_document(model))


def model_from_document(doc: dict) -> ClusterModel:
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelParse(f"not a {MODEL_FORMAT} document")
    try:
        d_x = int(doc["d_x"])
        model = ClusterModel(
            eigenvalues=np.asarray(doc["eigenvalues"], dtype=float),
            eigenvectors=np.asarray(doc["eigenvectors"], dtype=float),
            g_inv=np.asarray(doc["g_inv"], dtype=float),
            y_vec=np.asarray(doc["y_vec"], dtype=float),
            coverage=np.asarray(doc["coverage"], dtype=float),
            localization=np.asarray(doc["localization"], dtype=float),
            m=int(doc["m"]),
            lambda_used=float(doc["lambda_used"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelParse(f"malformed model document: {exc}") from exc
    if (
        model.eigenvalues.shape != (d_x,)
        or model.eigenvectors.shape != (d_x, d_x)
        or model.g_inv.shape != (d_x, d_x)
        or model.y_vec.shape != (d_x,)
        or model.coverage.shape != (d_x,)
        or model.localization.shape != (d_x,)
    ):
        raise ModelParse("model document has inconsistent array shapes")
    return model


def read_model_json(path: str | os.PathLike) -> ClusterModel:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelParse(f"invalid JSON: {exc}") from exc
    return model_from_document(doc)


# ---------------------------------------------------------------------------
# CSV: datasets, queries, sweeps, distributions, transforms
# ---------------------------------------------------------------------------

def _dataset_header(d_x: int) -> str:
    return ",".join([f"x{i}" for i in range(d_x)] + ["y"])


def write_dataset_csv(path, x: np.ndarray, y: np.ndarray,
                      metadata: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if metadata:
            pairs = " ".join(f"{k}={v}" for k, v in metadata.items())
            fh.write(f"# {pairs}\n")
        fh.write(_dataset_header(x.shape[1]) + "\n")
        for row, label in zip(x, y):
            fh.write(",".join(fmt(v) for v in row) + "," + fmt(label) + "\n")


def _content_lines(path):
    """Yield (1-based line number, stripped text), skipping blanks and comments."""
    with open(path, encoding="utf-8") as fh:
        for number, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            yield number, text


def _parse_float(cell: str, line: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise CsvParse(line, f"not a number: {cell!r}") from None


def _read_table(path, *, label_column: str | None) -> tuple[np.ndarray, np.ndarray | None]:
    """Parse a feature table with header x0..x{d-1}[,label_column]."""
    lines = _content_lines(path)
    try:
        header_line, header = next(lines)
    except StopIteration:
        raise CsvParse(0, "file has no header line") from None
    names = [c.strip() for c in header.split(",")]
    has_label = bool(names) and names[-1] == label_column
    feature_names = names[:-1] if has_label else names
    expected = [f"x{i}" for i in range(len(feature_names))]
    if not feature_names or feature_names != expected:
        raise CsvParse(header_line, f"bad header {header!r}; expected x0,..,x{{d-1}}"
                       + (f",{label_column}" if label_column else ""))
    width = len(names)
    rows, labels = [], []
    for number, text in lines:
        cells = text.split(",")
        if len(cells) != width:
            raise CsvParse(number, f"expected {width} fields, found {len(cells)}")
        values = [_parse_float(c, number) for c in cells]
        if has_label:
            rows.append(values[:-1])
            labels.append(values[-1])
        else:
            rows.append(values)
    if not rows:
        raise CsvParse(header_line, "no data rows")
    x = np.array(rows, dtype=float)
    return x, (np.array(labels, dtype=float) if has_label else None)


def read_dataset_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read features and labels; the y column is mandatory."""
    x, y = _read_table(path, label_column="y")
    if y is None:
        raise CsvParse(0, "dataset file is missing the y column")
    return x, y


def read_queries_csv(path) -> np.ndarray:
    """Read query features; a trailing y column, if present, is ignored."""
    x, _ = _read_table(path, label_column="y")
    return x


def write_sweep_csv(path, label: str, axis: np.ndarray, a_ls: np.ndarray,
                    a_rn: np.ndarray, probabilities: np.ndarray,
                    metadata: dict | None = None) -> None:
    d_x = probabilities.shape[1]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if metadata:
            pairs = " ".join(f"{k}={v}" for k, v in metadata.items())
            fh.write(f"# {pairs}\n")
        header = [label, "a_ls", "a_rn"] + [f"p{i}" for i in range(d_x)]
        fh.write(",".join(header) + "\n")
        for t, ls, rn, probs in zip(axis, a_ls, a_rn, probabilities):
            cells = [fmt(t), fmt(ls), fmt(rn)] + [fmt(p) for p in probs]
            fh.write(",".join(cells) + "\n")


def read_sweep_csv(path) -> tuple[list[str], np.ndarray]:
    """Header names and the numeric body of a sweep file."""
    lines = _content_lines(path)
    try:
        _, header = next(lines)
    except StopIteration:
        raise CsvParse(0, "file has no header line") from None
    names = [c.strip() for c in header.split(",")]
    rows = []
    for number, text in lines:
        cells = text.split(",")
        if len(cells) != len(names):
            raise CsvParse(number, f"expected {len(names)} fields, found {len(cells)}")
        rows.append([_parse_float(c, number) for c in cells])
    return names, np.array(rows, dtype=float)


def write_distribution_csv(path, estimate: DistributionEstimate, m: int) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("node,weight\n")
        for node, weight in zip(estimate.nodes, estimate.weights):
            fh.write(fmt(node) + "," + fmt(weight) + "\n")
        fh.write(f"# sum_weight={fmt(float(np.sum(estimate.weights)))} m={m}\n")


def write_transform_csv(path, coverages: np.ndarray, states: np.ndarray) -> None:
    """Selected states as rows (descending coverage), usable to re-project
    feature vectors via x_new = T @ x."""
    d_x = states.shape[0]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# rows are selected states, descending coverage\n")
        fh.write("# coverage=" + ",".join(fmt(c) for c in coverages) + "\n")
        fh.write(",".join(f"c{i}" for i in range(d_x)) + "\n")
        for j in range(states.shape[1]):
            fh.write(",".join(fmt(v) for v in states[:, j]) + "\n")
