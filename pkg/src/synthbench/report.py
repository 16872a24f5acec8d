"""Report persistence, aggregation tables, and rendered figures.

Each benchmark run produces one JSON report inside the instance directory.
This module collects them across a grid root, reduces repeated seeds into
per-cell mean/std tables (heatmap.csv, radar.csv), and renders matplotlib
figures next to the tables: per-cell MSE heatmaps, spectral-error overlays
across SNR levels, and horizon profiles.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import ConfigError, IntegrityError
from .metrics import EvalReport, aggregate_runs, radar_rows

__all__ = [
    "REPORTS_DIRNAME",
    "report_filename",
    "write_report",
    "read_report",
    "collect_reports",
    "write_table",
    "write_report_tables",
    "render_figures",
]

REPORTS_DIRNAME = "reports"


def report_filename(report: EvalReport) -> str:
    meta = report.metadata
    model = str(meta.get("model", "model")).replace("/", "-")
    return (
        f"{model}-{meta.get('split', 'test')}"
        f"-t{meta.get('lookback', 0)}-h{meta.get('horizon', 0)}"
        f"-s{meta.get('stride', 0)}.json"
    )


def write_report(report: EvalReport, instance_dir: str | Path) -> Path:
    """Store a run report under <instance>/reports/; returns the path."""
    directory = Path(instance_dir) / REPORTS_DIRNAME
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / report_filename(report)
    path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    return path


def read_report(path: str | Path) -> EvalReport:
    path = Path(path)
    try:
        return EvalReport.from_dict(json.loads(path.read_text()))
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise IntegrityError(f"malformed report {path}: {exc}") from exc


def collect_reports(root: str | Path) -> list[EvalReport]:
    """All run reports under a grid root (or a single instance directory)."""
    root = Path(root)
    paths = sorted(root.glob(f"*/{REPORTS_DIRNAME}/*.json"))
    if not paths:
        paths = sorted(root.glob(f"{REPORTS_DIRNAME}/*.json"))
    return [read_report(p) for p in paths]


def write_table(rows: list[dict[str, Any]], path: str | Path) -> Path:
    """Write dict rows as CSV with the union of keys as header."""
    if not rows:
        raise ConfigError("cannot write an empty table")
    fields: list[str] = []
    for row in rows:
        for key in row:
            if key not in fields:
                fields.append(key)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    return path


def write_report_tables(
    reports: list[EvalReport], out_dir: str | Path
) -> tuple[Path, Path]:
    """Emit heatmap.csv (per-cell mean/std) and radar.csv (per-axis best)."""
    rows = aggregate_runs(reports)
    out_dir = Path(out_dir)
    heatmap = write_table(rows, out_dir / "heatmap.csv")
    radar = write_table(radar_rows(rows), out_dir / "radar.csv")
    return heatmap, radar


# -- figures -----------------------------------------------------------------


def render_figures(reports: list[EvalReport], out_dir: str | Path) -> list[Path]:
    """Render every figure family; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    paths.extend(_render_heatmaps(aggregate_runs(reports), out_dir))
    paths.extend(_render_spectral_overlays(reports, out_dir))
    paths.extend(_render_horizon_profiles(reports, out_dir))
    return paths


def _snr_sort_key(snr: str) -> float:
    return math.inf if snr == "inf" else float(snr)


def _band_sort_key(band: str) -> float:
    return float(band.split("-")[0])


def _render_heatmaps(rows: list[dict[str, Any]], out_dir: Path) -> list[Path]:
    """One band-by-SNR heatmap of mean clean-target MSE per (kind, noise)."""
    paths = []
    pairs = sorted({(r["seasonal_kind"], r["noise_kind"]) for r in rows})
    for kind, noise in pairs:
        cells = [
            r for r in rows
            if r["seasonal_kind"] == kind and r["noise_kind"] == noise
        ]
        bands = sorted({r["band"] for r in cells}, key=_band_sort_key)
        snrs = sorted({r["snr"] for r in cells}, key=_snr_sort_key)
        grid = np.full((len(bands), len(snrs)), np.nan)
        for r in cells:
            grid[bands.index(r["band"]), snrs.index(r["snr"])] = r["mse_clean_mean"]
        fig, ax = plt.subplots(figsize=(1.2 * len(snrs) + 2, 0.6 * len(bands) + 2))
        image = ax.imshow(grid, aspect="auto", cmap="viridis")
        ax.set_xticks(range(len(snrs)), snrs)
        ax.set_yticks(range(len(bands)), bands)
        ax.set_xlabel("SNR")
        ax.set_ylabel("frequency-index band")
        ax.set_title(f"clean-target MSE, {kind} signal, {noise} noise")
        for i in range(len(bands)):
            for j in range(len(snrs)):
                if not np.isnan(grid[i, j]):
                    ax.text(
                        j, i, f"{grid[i, j]:.3f}",
                        ha="center", va="center", fontsize=8, color="white",
                    )
        fig.colorbar(image, ax=ax, label="MSE")
        path = out_dir / f"heatmap-{kind}-{noise}.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        paths.append(path)
    return paths


def _group_key(report: EvalReport) -> tuple[str, str, str]:
    meta = report.metadata
    return (
        str(meta.get("seasonal_kind")),
        str(meta.get("band")),
        str(meta.get("noise_kind")),
    )


def _render_spectral_overlays(reports: list[EvalReport], out_dir: Path) -> list[Path]:
    """Mean spectral-error curve per SNR, overlaid per (kind, band, noise)."""
    paths = []
    groups: dict[tuple, dict[str, list[np.ndarray]]] = {}
    for report in reports:
        if report.spectral_error is None:
            continue
        snr = str(report.metadata.get("snr"))
        groups.setdefault(_group_key(report), {}).setdefault(snr, []).append(
            report.spectral_error
        )
    for (kind, band, noise), by_snr in sorted(groups.items()):
        fig, ax = plt.subplots(figsize=(8, 4))
        for snr in sorted(by_snr, key=_snr_sort_key):
            curves = by_snr[snr]
            mean_curve = np.mean(curves, axis=0)
            ax.plot(mean_curve, label=f"SNR {snr}", linewidth=0.9)
        ax.set_xlabel("frequency index (stitched test windows)")
        ax.set_ylabel("spectral error")
        ax.set_title(f"{kind} signal, band {band}, {noise} noise")
        ax.legend()
        path = out_dir / f"spectral-{kind}-{band}-{noise}.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        paths.append(path)
    return paths


def _render_horizon_profiles(reports: list[EvalReport], out_dir: Path) -> list[Path]:
    """Mean per-step MSE per SNR, overlaid per (kind, band, noise)."""
    paths = []
    groups: dict[tuple, dict[str, list[np.ndarray]]] = {}
    for report in reports:
        snr = str(report.metadata.get("snr"))
        groups.setdefault(_group_key(report), {}).setdefault(snr, []).append(
            report.per_step_mse
        )
    for (kind, band, noise), by_snr in sorted(groups.items()):
        fig, ax = plt.subplots(figsize=(8, 4))
        for snr in sorted(by_snr, key=_snr_sort_key):
            mean_profile = np.mean(by_snr[snr], axis=0)
            ax.plot(mean_profile, label=f"SNR {snr}", linewidth=0.9)
        ax.set_xlabel("horizon step")
        ax.set_ylabel("MSE against clean signal")
        ax.set_title(f"{kind} signal, band {band}, {noise} noise")
        ax.legend()
        path = out_dir / f"horizon-{kind}-{band}-{noise}.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        paths.append(path)
    return paths
