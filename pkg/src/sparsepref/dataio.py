"""Reading and writing comparison datasets.

Two formats, selected by extension or an explicit format argument:

* csv: header ``y,x0_1,...,x0_d,x1_1,...,x1_d``, one comparison per row.
* jsonl: one JSON object per line with fields ``y``, ``x0``, ``x1``.

Floats are written with 17 significant digits, so a write/read round trip
reproduces the arrays bit for bit.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .data import PreferenceDataset
from .errors import DataFormatError


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def detect_format(path, explicit=None) -> str:
    if explicit:
        if explicit not in ("csv", "jsonl"):
            raise ValueError(f"unknown dataset format {explicit!r}")
        return explicit
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".csv":
        return "csv"
    if ext in (".jsonl", ".ndjson", ".json"):
        return "jsonl"
    raise ValueError(f"cannot infer dataset format from {path!r}; pass format=")


def _parse_label(tok, lineno: int):
    s = str(tok).strip()
    if s == "0":
        return 0
    if s == "1":
        return 1
    raise DataFormatError(f"line {lineno}: label must be 0 or 1, got {tok!r}")


def _read_csv(path) -> PreferenceDataset:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header:
            raise DataFormatError(f"{path}: empty file, expected a header row")
        cols = header.rstrip("\r\n").split(",")
        if len(cols) < 3 or len(cols) % 2 == 0 or cols[0].strip() != "y":
            raise DataFormatError(
                f"line 1: expected header y,x0_1,...,x0_d,x1_1,...,x1_d, got {len(cols)} columns"
            )
        width = len(cols)
        d = (width - 1) // 2
        x0_rows, x1_rows, labels = [], [], []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\r\n")
            if not line:
                continue
            toks = line.split(",")
            if len(toks) != width:
                raise DataFormatError(
                    f"line {lineno}: expected {width} columns, got {len(toks)}"
                )
            labels.append(_parse_label(toks[0], lineno))
            try:
                vals = [float(t) for t in toks[1:]]
            except ValueError:
                raise DataFormatError(f"line {lineno}: malformed number") from None
            x0_rows.append(vals[:d])
            x1_rows.append(vals[d:])
    if not labels:
        raise DataFormatError(f"{path}: no data rows")
    return PreferenceDataset.from_pairs(
        np.array(x0_rows), np.array(x1_rows), np.array(labels)
    )


def _read_jsonl(path) -> PreferenceDataset:
    x0_rows, x1_rows, labels = [], [], []
    d = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"line {lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict) or not {"y", "x0", "x1"} <= obj.keys():
                raise DataFormatError(f"line {lineno}: expected fields y, x0, x1")
            labels.append(_parse_label(obj["y"], lineno))
            x0, x1 = obj["x0"], obj["x1"]
            if not isinstance(x0, list) or not isinstance(x1, list) or len(x0) != len(x1):
                raise DataFormatError(f"line {lineno}: x0 and x1 must be equal-length arrays")
            if d is None:
                d = len(x0)
            elif len(x0) != d:
                raise DataFormatError(
                    f"line {lineno}: dimension {len(x0)} does not match first row ({d})"
                )
            try:
                x0_rows.append([float(v) for v in x0])
                x1_rows.append([float(v) for v in x1])
            except (TypeError, ValueError):
                raise DataFormatError(f"line {lineno}: malformed number") from None
    if not labels:
        raise DataFormatError(f"{path}: no data rows")
    return PreferenceDataset.from_pairs(
        np.array(x0_rows), np.array(x1_rows), np.array(labels)
    )


def read_dataset(path, format=None) -> PreferenceDataset:
    fmt = detect_format(path, format)
    return _read_csv(path) if fmt == "csv" else _read_jsonl(path)


def write_dataset(path, dataset: PreferenceDataset, format=None):
    if not dataset.has_pairs:
        raise ValueError("dataset was built from differences only; pairs are required to write")
    fmt = detect_format(path, format)
    d = dataset.d
    with open(path, "w", encoding="utf-8") as fh:
        if fmt == "csv":
            head = ["y"]
            head += [f"x0_{j}" for j in range(1, d + 1)]
            head += [f"x1_{j}" for j in range(1, d + 1)]
            fh.write(",".join(head) + "\n")
            for i in range(dataset.n):
                row = [str(int(dataset.labels[i]))]
                row += [_fmt(v) for v in dataset.x0[i]]
                row += [_fmt(v) for v in dataset.x1[i]]
                fh.write(",".join(row) + "\n")
        else:
            for i in range(dataset.n):
                obj = {
                    "y": int(dataset.labels[i]),
                    "x0": [float(v) for v in dataset.x0[i]],
                    "x1": [float(v) for v in dataset.x1[i]],
                }
                fh.write(json.dumps(obj, separators=(",", ":")) + "\n")
