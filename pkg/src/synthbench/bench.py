"""Benchmark orchestration: fit, predict, and score against an instance.

The protocol mirrors the generation contract: models see only the mixed
observation (training inputs and targets), while scoring compares their
forecasts to the noise-free signal. The default evaluation stride equals
the horizon, so test windows tile the split without overlap and their
predictions can be stitched into one contiguous series for spectral
comparison.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .baseline import LinearForecaster
from .dataset import DatasetInstance, split_ranges, windows
from .errors import ConfigError
from .metrics import (
    EvalReport,
    horizon_profile,
    mse_clean,
    spectral_error,
    stitch_windows,
)

__all__ = [
    "SPLIT_NAMES",
    "window_span",
    "pooled_training_chunks",
    "window_tensors",
    "fit_baseline",
    "predict_windows",
    "evaluate_predictions",
    "run_benchmark",
]

SPLIT_NAMES = ("train", "val", "test")


def window_span(instance: DatasetInstance, split: str) -> tuple[int, int]:
    """Index range of one chronological split of the instance."""
    if split not in SPLIT_NAMES:
        raise ConfigError(f"unknown split {split!r}; expected one of {SPLIT_NAMES}")
    config = instance.config
    ranges = split_ranges(
        config.n_samples, config.split,
        min_length=config.lookback + config.horizon,
    )
    return ranges[SPLIT_NAMES.index(split)]


def pooled_training_chunks(
    instance: DatasetInstance,
    lookback: int,
    horizon: int,
    stride: int = 1,
    split: str = "train",
):
    """Yield per-variate (inputs, targets) chunks of mixed data for fitting.

    Variates are pooled by concatenation order, one chunk each, built from
    zero-copy sliding views.
    """
    lo, hi = window_span(instance, split)
    pairs = windows((lo, hi), lookback, horizon, stride)
    if not pairs:
        raise ConfigError(
            f"{split} split holds no ({lookback}, {horizon}) windows"
        )
    starts = np.array([in_lo for (in_lo, _), _ in pairs])
    for v in range(instance.config.n_variates):
        column = instance.mixed[:, v]
        views = sliding_window_view(column, lookback + horizon)[starts]
        yield views[:, :lookback], views[:, lookback:]


def window_tensors(
    matrix: np.ndarray,
    span: tuple[int, int],
    lookback: int,
    horizon: int,
    stride: int,
) -> tuple[np.ndarray, np.ndarray]:
    """All (inputs, targets) windows of a matrix over a span.

    Returns tensors shaped (n_windows, n_variates, T) and
    (n_windows, n_variates, H).
    """
    pairs = windows(span, lookback, horizon, stride)
    if not pairs:
        raise ConfigError(f"span {span} holds no ({lookback}, {horizon}) windows")
    starts = np.array([in_lo for (in_lo, _), _ in pairs])
    # (n_t, V, T+H) view over time-major data, then split off the horizon.
    views = sliding_window_view(matrix, lookback + horizon, axis=0)[starts]
    return views[:, :, :lookback], views[:, :, lookback:]


def fit_baseline(
    instance: DatasetInstance,
    lookback: int | None = None,
    horizon: int | None = None,
    ridge_lambda: float = 1e-3,
    stride: int = 1,
) -> LinearForecaster:
    """Fit the linear baseline on the train split of the mixed observation."""
    lookback = lookback or instance.config.lookback
    horizon = horizon or instance.config.horizon
    model = LinearForecaster(lookback, horizon, ridge_lambda=ridge_lambda)
    return model.fit(
        pooled_training_chunks(instance, lookback, horizon, stride=stride)
    )


def predict_windows(
    model: LinearForecaster,
    instance: DatasetInstance,
    split: str = "test",
    stride: int | None = None,
) -> np.ndarray:
    """Forecast every window of a split; returns (n_windows, V, H)."""
    stride = stride or model.horizon
    span = window_span(instance, split)
    inputs, _ = window_tensors(
        instance.mixed, span, model.lookback, model.horizon, stride
    )
    n_windows, n_variates, _ = inputs.shape
    flat = inputs.reshape(n_windows * n_variates, model.lookback)
    return model.predict(flat).reshape(n_windows, n_variates, model.horizon)


def evaluate_predictions(
    instance: DatasetInstance,
    predictions: np.ndarray,
    split: str = "test",
    lookback: int | None = None,
    stride: int | None = None,
    metadata: dict | None = None,
) -> EvalReport:
    """Score a prediction tensor against the clean and mixed targets.

    Spectral error is computed only when the windows tile the split without
    overlap (stride equal to the horizon): per variate, predictions and
    clean targets are stitched into contiguous series, transformed, and the
    per-bin absolute gaps are averaged across variates.
    """
    predictions = np.asarray(predictions, dtype=np.float64)
    if predictions.ndim != 3:
        raise ConfigError(
            f"predictions must be (windows, variates, horizon), got "
            f"{predictions.shape}"
        )
    horizon = predictions.shape[2]
    lookback = lookback or instance.config.lookback
    stride = stride or horizon
    span = window_span(instance, split)
    _, clean_targets = window_tensors(instance.clean, span, lookback, horizon, stride)
    _, mixed_targets = window_tensors(instance.mixed, span, lookback, horizon, stride)
    if predictions.shape != clean_targets.shape:
        raise ConfigError(
            f"prediction shape {predictions.shape} does not match the "
            f"{clean_targets.shape} windows of the {split} split "
            f"(lookback {lookback}, stride {stride})"
        )
    spectral = None
    if stride == horizon:
        per_variate = []
        for v in range(predictions.shape[1]):
            per_variate.append(
                spectral_error(
                    stitch_windows(predictions[:, v, :]),
                    stitch_windows(clean_targets[:, v, :]),
                )
            )
        spectral = np.mean(per_variate, axis=0)
    meta = {
        "cell_id": instance.config.cell_id,
        "seasonal_kind": instance.config.seasonal_kind,
        "band": f"{instance.config.band[0]:g}-{instance.config.band[1]:g}",
        "noise_kind": instance.config.noise_kind or "nonoise",
        "snr": "inf" if np.isinf(instance.config.snr) else f"{instance.config.snr:g}",
        "seed": instance.config.seed,
        "split": split,
        "lookback": lookback,
        "horizon": horizon,
        "stride": stride,
        "n_windows": int(predictions.shape[0]),
    }
    if metadata:
        meta.update(metadata)
    return EvalReport(
        mse_clean=mse_clean(predictions, clean_targets),
        mse_noisy=mse_clean(predictions, mixed_targets),
        per_step_mse=horizon_profile(predictions, clean_targets),
        spectral_error=spectral,
        metadata=meta,
    )


def run_benchmark(
    instance: DatasetInstance,
    lookback: int | None = None,
    horizon: int | None = None,
    ridge_lambda: float = 1e-3,
    split: str = "test",
    stride: int | None = None,
) -> tuple[EvalReport, LinearForecaster, np.ndarray]:
    """Fit the baseline, forecast a split, and score it in one call."""
    lookback = lookback or instance.config.lookback
    horizon = horizon or instance.config.horizon
    model = fit_baseline(instance, lookback, horizon, ridge_lambda=ridge_lambda)
    predictions = predict_windows(model, instance, split=split, stride=stride)
    report = evaluate_predictions(
        instance,
        predictions,
        split=split,
        lookback=lookback,
        stride=stride or horizon,
        metadata={"model": "linear-baseline", "ridge_lambda": ridge_lambda},
    )
    return report, model, predictions
