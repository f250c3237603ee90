"""Matrix file I/O.

Binary format: a 16-byte header (magic ``SDCT``, u32 rows, u32 cols,
u32 reserved, all little-endian) followed by the entries as little-endian
float64 in column-major order. CSV is provided for small matrices.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"SDCT"
_HEADER = struct.Struct("<4sIII")


def save_matrix(path, mat) -> None:
    mat = np.asarray(mat, dtype=np.float64)
    if mat.ndim == 1:
        mat = mat[:, None]
    if mat.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={mat.ndim}")
    rows, cols = mat.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, rows, cols, 0))
        fh.write(np.asfortranarray(mat).astype("<f8").tobytes(order="F"))


def load_matrix(path) -> np.ndarray:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, rows, cols, _ = _HEADER.unpack(head)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        body = fh.read()
    expected = rows * cols * 8
    if len(body) != expected:
        raise ValueError(f"{path}: expected {expected} data bytes, got {len(body)}")
    flat = np.frombuffer(body, dtype="<f8")
    return flat.reshape((rows, cols), order="F").copy()


def save_matrix_csv(path, mat) -> None:
    np.savetxt(path, np.atleast_2d(np.asarray(mat, dtype=np.float64)), delimiter=",")


def load_matrix_csv(path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=","))
