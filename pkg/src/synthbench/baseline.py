"""Channel-independent linear forecaster with instance normalization.

One affine map from T past samples to H future samples, fit in closed form
by ridge-regularized least squares and shared across all variates. Each
window is normalized by its own mean and standard deviation before the map
and denormalized after, so the model is shift- and scale-equivariant and
only has to learn shape. Deterministic by construction: the fit is a linear
solve, so identical windows and lambda give bitwise identical weights.
"""

from __future__ import annotations

import hashlib
import struct
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import ConfigError, IntegrityError, NotFittedError

__all__ = ["LinearForecaster", "NORM_EPS"]

# Std floor so constant windows normalize to zeros instead of dividing by 0.
NORM_EPS = 1e-8

MODEL_MAGIC = b"SBMODEL1"


class LinearForecaster:
    """Closed-form ridge map from length-T windows to length-H forecasts."""

    def __init__(
        self,
        lookback: int,
        horizon: int,
        ridge_lambda: float = 1e-3,
        normalize: bool = True,
    ) -> None:
        if lookback < 1 or horizon < 1:
            raise ConfigError(
                f"lookback and horizon must be positive, got "
                f"{lookback} and {horizon}"
            )
        if ridge_lambda < 0:
            raise ConfigError(f"ridge lambda must be non-negative, got {ridge_lambda}")
        self.lookback = lookback
        self.horizon = horizon
        self.ridge_lambda = ridge_lambda
        self.normalize = normalize
        self.weights: np.ndarray | None = None  # (H, T)
        self.bias: np.ndarray | None = None  # (H,)

    @property
    def fitted(self) -> bool:
        return self.weights is not None

    # -- training -----------------------------------------------------------

    def fit(
        self,
        windows: tuple[np.ndarray, np.ndarray] | Iterable[tuple[np.ndarray, np.ndarray]],
    ) -> "LinearForecaster":
        """Solve the pooled regularized least-squares problem.

        ``windows`` is one (inputs, targets) pair with shapes (n, T)/(n, H),
        or an iterable of such chunks; chunks are accumulated into Gram
        matrices so the pooled set never has to be materialized. The bias
        row is not regularized.
        """
        t, h = self.lookback, self.horizon
        gram = np.zeros((t + 1, t + 1), dtype=np.float64)
        cross = np.zeros((t + 1, h), dtype=np.float64)
        n_rows = 0
        for inputs, targets in _as_chunks(windows):
            inputs = np.asarray(inputs, dtype=np.float64)
            targets = np.asarray(targets, dtype=np.float64)
            if inputs.ndim != 2 or inputs.shape[1] != t:
                raise ConfigError(
                    f"input chunk shape {inputs.shape} does not match lookback {t}"
                )
            if targets.shape != (inputs.shape[0], h):
                raise ConfigError(
                    f"target chunk shape {targets.shape} does not match "
                    f"({inputs.shape[0]}, {h})"
                )
            if self.normalize:
                mean, std = _window_stats(inputs)
                inputs = (inputs - mean) / std
                targets = (targets - mean) / std
            augmented = np.hstack([inputs, np.ones((inputs.shape[0], 1))])
            gram += augmented.T @ augmented
            cross += augmented.T @ targets
            n_rows += inputs.shape[0]
        if n_rows < t + h:
            raise ConfigError(
                f"fit needs at least lookback+horizon = {t + h} pooled "
                f"windows, got {n_rows}"
            )
        penalty = np.eye(t + 1) * self.ridge_lambda
        penalty[t, t] = 0.0
        try:
            theta = np.linalg.solve(gram + penalty, cross)
        except np.linalg.LinAlgError as exc:
            raise ConfigError(
                "normal equations are singular; fit with a positive ridge lambda"
            ) from exc
        if not np.all(np.isfinite(theta)):
            raise ConfigError("fit produced non-finite weights")
        self.weights = np.ascontiguousarray(theta[:t].T)
        self.bias = np.ascontiguousarray(theta[t])
        return self

    # -- inference ------------------------------------------------------------

    def predict(self, window: np.ndarray) -> np.ndarray:
        """Forecast H steps from one (T,) window or a batch of (n, T) windows."""
        if not self.fitted:
            raise NotFittedError("predict called before fit")
        window = np.asarray(window, dtype=np.float64)
        single = window.ndim == 1
        batch = window[None, :] if single else window
        if batch.ndim != 2 or batch.shape[1] != self.lookback:
            raise ConfigError(
                f"window shape {window.shape} does not match lookback "
                f"{self.lookback}"
            )
        if self.normalize:
            mean, std = _window_stats(batch)
            out = ((batch - mean) / std) @ self.weights.T + self.bias
            out = out * std + mean
        else:
            out = batch @ self.weights.T + self.bias
        return out[0] if single else out

    # -- persistence ----------------------------------------------------------

    def save(self, path: str | Path) -> None:
        """Write the model blob: header, payload checksum, weights, bias."""
        if not self.fitted:
            raise NotFittedError("save called before fit")
        payload = (
            np.ascontiguousarray(self.weights, dtype="<f8").tobytes()
            + np.ascontiguousarray(self.bias, dtype="<f8").tobytes()
        )
        header = MODEL_MAGIC + struct.pack(
            "<QQdB",
            self.lookback,
            self.horizon,
            self.ridge_lambda,
            1 if self.normalize else 0,
        )
        Path(path).write_bytes(header + hashlib.sha256(payload).digest() + payload)

    @classmethod
    def load(cls, path: str | Path) -> "LinearForecaster":
        blob = Path(path).read_bytes()
        head_len = len(MODEL_MAGIC) + struct.calcsize("<QQdB")
        if len(blob) < head_len + 32:
            raise IntegrityError(f"model file {path} is truncated")
        if blob[: len(MODEL_MAGIC)] != MODEL_MAGIC:
            raise IntegrityError(f"{path} is not a forecaster model file")
        lookback, horizon, ridge_lambda, norm_flag = struct.unpack(
            "<QQdB", blob[len(MODEL_MAGIC) : head_len]
        )
        digest = blob[head_len : head_len + 32]
        payload = blob[head_len + 32 :]
        if hashlib.sha256(payload).digest() != digest:
            raise IntegrityError(f"model payload checksum mismatch in {path}")
        expected = (lookback * horizon + horizon) * 8
        if len(payload) != expected:
            raise IntegrityError(
                f"model payload holds {len(payload)} bytes, expected {expected}"
            )
        model = cls(
            lookback=int(lookback),
            horizon=int(horizon),
            ridge_lambda=float(ridge_lambda),
            normalize=bool(norm_flag),
        )
        flat = np.frombuffer(payload, dtype="<f8")
        model.weights = flat[: lookback * horizon].reshape(horizon, lookback).copy()
        model.bias = flat[lookback * horizon :].copy()
        return model


def _window_stats(batch: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = batch.mean(axis=1, keepdims=True)
    std = batch.std(axis=1, keepdims=True) + NORM_EPS
    return mean, std


def _as_chunks(
    windows: tuple[np.ndarray, np.ndarray] | Iterable[tuple[np.ndarray, np.ndarray]],
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    if isinstance(windows, tuple) and len(windows) == 2 and not isinstance(windows[0], tuple):
        yield windows
        return
    yielded = False
    for chunk in windows:
        yielded = True
        yield chunk
    if not yielded:
        raise ConfigError("fit received no window chunks")
