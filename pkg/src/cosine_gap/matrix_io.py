"""Read and write square matrices as JSON or whitespace-separated text.

JSON layout: ``{"dim": n, "real": [[...]], "imag": [[...]]}`` with ``imag``
optional. Plain text holds one row per line and real entries only; blank
lines and ``#`` comments are skipped.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DomainError
from .matrix_calculus import as_square_matrix


def parse_matrix(text):
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid matrix JSON: {exc}") from exc
        return matrix_from_dict(obj)
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                rows.append([float(x) for x in line.split()])
            except ValueError as exc:
                raise DomainError(f"bad matrix entry in line {line!r}") from exc
    if not rows or any(len(r) != len(rows) for r in rows):
        raise DomainError("text matrix must be square with one row per line")
    return as_square_matrix(np.array(rows))


def matrix_from_dict(obj):
    if "real" not in obj:
        raise DomainError('matrix JSON needs a "real" field')
    M = np.array(obj["real"], dtype=float)
    if obj.get("imag") is not None:
        M = M + 1j * np.array(obj["imag"], dtype=float)
    M = as_square_matrix(M)
    if "dim" in obj and int(obj["dim"]) != M.shape[0]:
        raise DomainError(f'"dim" is {obj["dim"]} but the matrix is {M.shape[0]}x{M.shape[0]}')
    return M


def matrix_to_dict(M):
    M = as_square_matrix(M)
    out = {"dim": int(M.shape[0]), "real": np.real(M).tolist()}
    if np.iscomplexobj(M) and np.any(np.imag(M) != 0):
        out["imag"] = np.imag(M).tolist()
    return out


def load_matrix(path):
    return parse_matrix(Path(path).read_text())


def dump_matrix(M, path):
    Path(path).write_text(json.dumps(matrix_to_dict(M)) + "\n")
