"""Prediction exchange files.

External forecasters hand their outputs to the evaluator through a small
self-checking container. The binary layout is:

    bytes 0..7    magic "SBPRED01"
    bytes 8..31   little-endian uint64 triple (n_windows, n_variates, horizon)
    bytes 32..63  SHA-256 of the payload
    bytes 64..    payload: float64 little-endian, C order, shape
                  (n_windows, n_variates, horizon)

A CSV alternative carries the same tensor with one row per (window, variate)
pair and a "window,variate,h0,h1,..." header; floats are repr round-trips.
"""

from __future__ import annotations

import hashlib
import struct
from pathlib import Path

import numpy as np

from .errors import ConfigError, IntegrityError

__all__ = [
    "PREDICTION_MAGIC",
    "write_predictions",
    "read_predictions",
    "write_predictions_csv",
    "read_predictions_csv",
]

PREDICTION_MAGIC = b"SBPRED01"
_HEADER = struct.Struct("<QQQ")


def _check_tensor(predictions: np.ndarray) -> np.ndarray:
    predictions = np.asarray(predictions, dtype=np.float64)
    if predictions.ndim != 3:
        raise ConfigError(
            f"predictions must be (windows, variates, horizon), got shape "
            f"{predictions.shape}"
        )
    if predictions.size == 0:
        raise ConfigError("prediction tensor is empty")
    return predictions


def write_predictions(predictions: np.ndarray, path: str | Path) -> Path:
    """Write the binary container; returns the path."""
    predictions = _check_tensor(predictions)
    payload = np.ascontiguousarray(predictions, dtype="<f8").tobytes()
    header = PREDICTION_MAGIC + _HEADER.pack(*predictions.shape)
    path = Path(path)
    path.write_bytes(header + hashlib.sha256(payload).digest() + payload)
    return path


def read_predictions(path: str | Path) -> np.ndarray:
    """Read and verify a binary container; returns (windows, variates, H)."""
    path = Path(path)
    if not path.exists():
        raise IntegrityError(f"prediction file not found: {path}")
    blob = path.read_bytes()
    head_len = len(PREDICTION_MAGIC) + _HEADER.size
    if len(blob) < head_len + 32:
        raise IntegrityError(f"prediction file {path} is truncated")
    if blob[: len(PREDICTION_MAGIC)] != PREDICTION_MAGIC:
        raise IntegrityError(f"{path} is not a prediction exchange file")
    shape = _HEADER.unpack(blob[len(PREDICTION_MAGIC) : head_len])
    digest = blob[head_len : head_len + 32]
    payload = blob[head_len + 32 :]
    expected = shape[0] * shape[1] * shape[2] * 8
    if len(payload) != expected:
        raise IntegrityError(
            f"prediction payload holds {len(payload)} bytes, expected "
            f"{expected} for shape {shape}"
        )
    if hashlib.sha256(payload).digest() != digest:
        raise IntegrityError(f"prediction payload checksum mismatch in {path}")
    return np.frombuffer(payload, dtype="<f8").reshape(shape).copy()


def write_predictions_csv(predictions: np.ndarray, path: str | Path) -> Path:
    """Write the CSV alternative; one row per (window, variate) pair."""
    predictions = _check_tensor(predictions)
    n_windows, n_variates, horizon = predictions.shape
    path = Path(path)
    with path.open("w") as fh:
        fh.write(
            "window,variate," + ",".join(f"h{i}" for i in range(horizon)) + "\n"
        )
        for w in range(n_windows):
            for v in range(n_variates):
                row = ",".join(repr(float(x)) for x in predictions[w, v])
                fh.write(f"{w},{v},{row}\n")
    return path


def read_predictions_csv(path: str | Path) -> np.ndarray:
    """Read the CSV alternative back into a (windows, variates, H) tensor."""
    path = Path(path)
    if not path.exists():
        raise IntegrityError(f"prediction file not found: {path}")
    with path.open() as fh:
        header = fh.readline().strip().split(",")
        if header[:2] != ["window", "variate"] or len(header) < 3:
            raise IntegrityError(f"{path} does not start with a prediction header")
        horizon = len(header) - 2
        cells: dict[tuple[int, int], list[float]] = {}
        for line_no, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != horizon + 2:
                raise IntegrityError(
                    f"{path}:{line_no} holds {len(parts)} fields, expected "
                    f"{horizon + 2}"
                )
            try:
                key = (int(parts[0]), int(parts[1]))
                cells[key] = [float(x) for x in parts[2:]]
            except ValueError as exc:
                raise IntegrityError(f"{path}:{line_no}: {exc}") from exc
    if not cells:
        raise IntegrityError(f"{path} holds no prediction rows")
    n_windows = max(w for w, _ in cells) + 1
    n_variates = max(v for _, v in cells) + 1
    if len(cells) != n_windows * n_variates:
        raise IntegrityError(
            f"{path} holds {len(cells)} rows, expected "
            f"{n_windows * n_variates} for a full (window, variate) grid"
        )
    out = np.empty((n_windows, n_variates, horizon), dtype=np.float64)
    for (w, v), values in cells.items():
        out[w, v] = values
    return out
