"""Time-domain and frequency-domain forecast evaluation.

Errors are always measured against the noise-free latent signal (plus a
noisy-target variant for comparison): models train on the mixed observation
but are scored on how much of the underlying structure they recover.
Spectral error compares one-sided DFT magnitude spectra of stitched
prediction and target series, bin by bin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .config import decode_number, encode_number
from .errors import ConfigError

__all__ = [
    "EvalReport",
    "mse_clean",
    "horizon_profile",
    "spectrum",
    "spectral_error",
    "capture_threshold",
    "stitch_windows",
    "aggregate_runs",
    "radar_rows",
]

# Grid-cell key shared by report metadata, aggregation, and CSV output.
CELL_KEYS = ("model", "seasonal_kind", "band", "noise_kind", "snr")


@dataclass(frozen=True)
class EvalReport:
    """Evaluation result for one model run on one dataset instance."""

    mse_clean: float
    mse_noisy: float
    per_step_mse: np.ndarray
    spectral_error: np.ndarray | None
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "mse_clean": encode_number(self.mse_clean),
            "mse_noisy": encode_number(self.mse_noisy),
            "per_step_mse": [encode_number(float(x)) for x in self.per_step_mse],
            "spectral_error": None
            if self.spectral_error is None
            else [encode_number(float(x)) for x in self.spectral_error],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EvalReport":
        spectral = data.get("spectral_error")
        return cls(
            mse_clean=decode_number(str(data["mse_clean"])),
            mse_noisy=decode_number(str(data["mse_noisy"])),
            per_step_mse=np.array(
                [decode_number(str(x)) for x in data["per_step_mse"]]
            ),
            spectral_error=None
            if spectral is None
            else np.array([decode_number(str(x)) for x in spectral]),
            metadata=dict(data.get("metadata", {})),
        )


def _check_shapes(predictions: np.ndarray, targets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    predictions = np.asarray(predictions, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if predictions.shape != targets.shape:
        raise ConfigError(
            f"prediction shape {predictions.shape} does not match target "
            f"shape {targets.shape}"
        )
    if predictions.size == 0:
        raise ConfigError("cannot evaluate zero windows")
    return predictions, targets


def mse_clean(predictions: np.ndarray, targets: np.ndarray) -> float:
    """Mean squared error over all windows, variates, and horizon steps.

    Targets are whatever the caller passes; use noise-free targets to score
    signal recovery and mixed targets for the conventional noisy metric.
    """
    predictions, targets = _check_shapes(predictions, targets)
    diff = predictions - targets
    return float(np.mean(diff * diff))


def horizon_profile(predictions: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Per-horizon-step MSE, averaged over every other axis.

    The last axis is the horizon; the profile's mean equals the overall MSE.
    """
    predictions, targets = _check_shapes(predictions, targets)
    diff = predictions - targets
    axes = tuple(range(diff.ndim - 1))
    return np.mean(diff * diff, axis=axes)


def spectrum(series: np.ndarray) -> np.ndarray:
    """One-sided DFT magnitude over frequency indices 0..floor(N/2)."""
    series = np.asarray(series, dtype=np.float64)
    if series.ndim != 1 or len(series) < 2:
        raise ConfigError("spectrum needs a 1-d series of length >= 2")
    return np.abs(np.fft.rfft(series))


def spectral_error(pred_stitched: np.ndarray, clean_stitched: np.ndarray) -> np.ndarray:
    """Per-bin absolute difference between prediction and target spectra."""
    pred_stitched = np.asarray(pred_stitched, dtype=np.float64)
    clean_stitched = np.asarray(clean_stitched, dtype=np.float64)
    if pred_stitched.shape != clean_stitched.shape:
        raise ConfigError(
            f"stitched lengths differ: {pred_stitched.shape} vs "
            f"{clean_stitched.shape}"
        )
    return np.abs(spectrum(pred_stitched) - spectrum(clean_stitched))


def capture_threshold(n_samples: int, lookback: int) -> int:
    """Smallest frequency index whose full period fits in the lookback window.

    A component at index l completes l cycles over N samples, so one period
    spans N/l samples; it fits into T samples iff l >= N/T, i.e. ceil(N/T)
    for integer indices. Components below the threshold look locally like
    trends and a window-bound forecaster cannot pin their period down.
    """
    if n_samples < 1 or lookback < 1:
        raise ConfigError("n_samples and lookback must be positive")
    return -(-n_samples // lookback)


def stitch_windows(windows: np.ndarray) -> np.ndarray:
    """Concatenate (n_windows, H) rows into one series.

    Meaningful for non-overlapping windows (stride = horizon), where the
    result reconstructs a contiguous span at full spectral resolution.
    """
    windows = np.asarray(windows, dtype=np.float64)
    if windows.ndim != 2:
        raise ConfigError(f"expected (windows, horizon) shape, got {windows.shape}")
    return windows.reshape(-1)


def aggregate_runs(reports: list[EvalReport]) -> list[dict[str, Any]]:
    """Per-cell mean and sample standard deviation of repeated runs.

    Reports are grouped by the cell key (model, seasonal kind, band, noise
    kind, snr); seeds vary within a group. Values are sorted before
    reduction so the output is exactly permutation-invariant. A single run
    reports std 0.
    """
    if not reports:
        raise ConfigError("cannot aggregate zero reports")
    groups: dict[tuple, list[EvalReport]] = {}
    for report in reports:
        key = tuple(str(report.metadata.get(k)) for k in CELL_KEYS)
        groups.setdefault(key, []).append(report)
    rows = []
    for key in sorted(groups):
        members = groups[key]
        row: dict[str, Any] = dict(zip(CELL_KEYS, key))
        row["n_runs"] = len(members)
        for metric in ("mse_clean", "mse_noisy"):
            values = sorted(getattr(r, metric) for r in members)
            row[f"{metric}_mean"] = float(np.mean(values))
            row[f"{metric}_std"] = (
                0.0 if len(values) < 2 else float(np.std(values, ddof=1))
            )
        # Reserved for external harnesses; the native baseline has no
        # training throughput or parameter count worth reporting.
        row["iterations_per_s"] = ""
        row["parameter_count"] = ""
        rows.append(row)
    return rows


def radar_rows(rows: list[dict[str, Any]]) -> list[dict[str, Any]]:
    """Per-axis summary: inverse of the best mean MSE along each grid axis."""
    if not rows:
        raise ConfigError("cannot summarize zero rows")
    out = []
    for axis in ("seasonal_kind", "band", "noise_kind", "snr"):
        by_value: dict[tuple[str, str], float] = {}
        for row in rows:
            key = (str(row["model"]), str(row[axis]))
            value = float(row["mse_clean_mean"])
            if key not in by_value or value < by_value[key]:
                by_value[key] = value
        for (model, value), best in sorted(by_value.items()):
            out.append(
                {
                    "model": model,
                    "axis": axis,
                    "value": value,
                    "best_mse_clean": best,
                    "inverse_best_mse": math.inf if best == 0 else 1.0 / best,
                }
            )
    return out
