"""Operator commands for the benchmark pipeline.

Exit codes: 0 on success, 1 on runtime failure, 2 on validation failure
(bad configs, malformed or corrupted files). Every command is idempotent on
unchanged inputs; generation is checksum-gated so reruns skip complete
cells. SYNTHBENCH_SEED and SYNTHBENCH_OUT override the data seed and the
output root without editing config files.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path

import click

from . import __version__
from .config import GridSpec, InstanceConfig, load_config, load_grid
from .dataset import (
    MANIFEST_NAME,
    expand_grid,
    generate_instance,
    instance_checksums,
    instance_is_valid,
    read_instance,
    write_instance,
)
from .errors import SynthBenchError
from .predictions import read_predictions, read_predictions_csv
from .bench import evaluate_predictions, run_benchmark
from .report import (
    collect_reports,
    render_figures,
    write_report,
    write_report_tables,
    write_table,
)

__all__ = ["main"]


def _fail(exc: BaseException) -> None:
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(2 if isinstance(exc, SynthBenchError) else 1)


def _guarded(fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except click.exceptions.Exit:
        raise
    except KeyboardInterrupt:
        raise
    except BaseException as exc:
        _fail(exc)


@click.group()
@click.version_option(version=__version__, prog_name="synthbench")
def main() -> None:
    """Deterministic synthetic benchmark for long-term forecasting."""


# -- validate -----------------------------------------------------------------


@main.command()
@click.option("--config", "config_path", type=click.Path(), help="Instance config JSON.")
@click.option("--grid", "grid_path", type=click.Path(), help="Grid spec JSON.")
def validate(config_path: str | None, grid_path: str | None) -> None:
    """Check a config or grid file without generating anything."""
    _guarded(_validate, config_path, grid_path)


def _validate(config_path: str | None, grid_path: str | None) -> None:
    if bool(config_path) == bool(grid_path):
        raise SynthBenchError("pass exactly one of --config or --grid")
    if config_path:
        config = load_config(config_path)
        click.echo(f"ok: instance config {config.cell_id}")
    else:
        configs = expand_grid(load_grid(grid_path))
        click.echo(f"ok: grid expands to {len(configs)} instance configs")


# -- generate -----------------------------------------------------------------


def _materialize(config: InstanceConfig, out_root: Path, workers: int, csv: bool) -> tuple[Path, bool]:
    """Generate one instance under out_root unless it is already complete."""
    directory = out_root / config.cell_id
    if instance_is_valid(directory):
        manifest = json.loads((directory / MANIFEST_NAME).read_text())
        if manifest.get("config") == config.to_dict():
            return directory, False
    instance = generate_instance(config, workers=workers)
    write_instance(instance, directory, csv=csv)
    return directory, True


@main.command()
@click.option("--config", "config_path", type=click.Path(), required=True,
              help="Instance config JSON.")
@click.option("--out", envvar="SYNTHBENCH_OUT", default=".", show_default=True,
              type=click.Path(), help="Output root; the instance directory is created inside.")
@click.option("--seed", envvar="SYNTHBENCH_SEED", type=int, default=None,
              help="Override the config's data seed.")
@click.option("--csv", is_flag=True, help="Also export the mixed matrix as CSV.")
@click.option("--workers", type=int, default=1, show_default=True,
              help="Parallel synthesis workers.")
def generate(config_path: str, out: str, seed: int | None, csv: bool, workers: int) -> None:
    """Generate one dataset instance from a config file."""
    _guarded(_generate, config_path, out, seed, csv, workers)


def _generate(config_path: str, out: str, seed: int | None, csv: bool, workers: int) -> None:
    config = load_config(config_path)
    if seed is not None:
        config = dataclasses.replace(config, seed=seed)
        config.validate()
    directory, created = _materialize(config, Path(out), workers, csv)
    status = "generated" if created else "already complete"
    click.echo(f"{status}: {directory / MANIFEST_NAME}")
    for name, digest in sorted(instance_checksums(directory).items()):
        click.echo(f"  {name} sha256 {digest}")


# -- grid ---------------------------------------------------------------------


@main.command()
@click.option("--grid", "grid_path", type=click.Path(), required=True,
              help="Grid spec JSON.")
@click.option("--out", envvar="SYNTHBENCH_OUT", default=".", show_default=True,
              type=click.Path(), help="Output root holding one directory per cell.")
@click.option("--workers", type=int, default=1, show_default=True,
              help="Parallel synthesis workers per instance.")
def grid(grid_path: str, out: str, workers: int) -> None:
    """Generate every instance of a grid; resumes where it left off."""
    _guarded(_grid, grid_path, out, workers)


def _grid(grid_path: str, out: str, workers: int) -> None:
    configs = expand_grid(load_grid(grid_path))
    out_root = Path(out)
    rows = []
    for i, config in enumerate(configs, start=1):
        directory, created = _materialize(config, out_root, workers, csv=False)
        status = "generated" if created else "cached"
        click.echo(f"[{i}/{len(configs)}] {status} {config.cell_id}")
        l_lo, l_hi = config.band
        rows.append(
            {
                "seasonal_kind": config.seasonal_kind,
                "band": f"{l_lo:g}-{l_hi:g}",
                "noise_kind": config.noise_kind or "nonoise",
                "snr": "inf" if config.snr == float("inf") else f"{config.snr:g}",
                "seed": config.seed,
                "cell_id": config.cell_id,
                "status": status,
            }
        )
    summary = write_table(rows, out_root / "grid-summary.csv")
    click.echo(f"summary: {summary}")


# -- bench --------------------------------------------------------------------


def _instance_dirs(data_root: Path) -> list[Path]:
    if (data_root / MANIFEST_NAME).exists():
        return [data_root]
    found = sorted(
        p.parent for p in data_root.glob(f"*/{MANIFEST_NAME}")
    )
    if not found:
        raise SynthBenchError(f"no instance manifest under {data_root}")
    return found


@main.command()
@click.option("--data", "data_root", type=click.Path(), required=True,
              help="Instance directory or grid root.")
@click.option("--split", default="test", show_default=True,
              type=click.Choice(["train", "val", "test"]))
@click.option("--lookback", type=int, default=None, help="Defaults to the instance config.")
@click.option("--horizon", type=int, default=None, help="Defaults to the instance config.")
@click.option("--stride", type=int, default=None,
              help="Evaluation window stride; defaults to the horizon (non-overlapping).")
@click.option("--lambda", "ridge_lambda", type=float, default=1e-3, show_default=True,
              help="Ridge penalty for the linear baseline.")
def bench(data_root: str, split: str, lookback: int | None, horizon: int | None,
          stride: int | None, ridge_lambda: float) -> None:
    """Fit the native linear baseline and score it against the clean signal."""
    _guarded(_bench, data_root, split, lookback, horizon, stride, ridge_lambda)


def _bench(data_root: str, split: str, lookback: int | None, horizon: int | None,
           stride: int | None, ridge_lambda: float) -> None:
    for directory in _instance_dirs(Path(data_root)):
        instance = read_instance(directory)
        report, _, _ = run_benchmark(
            instance,
            lookback=lookback,
            horizon=horizon,
            ridge_lambda=ridge_lambda,
            split=split,
            stride=stride,
        )
        path = write_report(report, directory)
        click.echo(
            f"{instance.config.cell_id}: mse_clean={report.mse_clean:.6f} "
            f"mse_noisy={report.mse_noisy:.6f} -> {path}"
        )


# -- eval ---------------------------------------------------------------------


@main.command()
@click.option("--predictions", "predictions_path", type=click.Path(), required=True,
              help="Prediction exchange file written by an external model.")
@click.option("--data", "instance_dir", type=click.Path(), required=True,
              help="Instance directory the predictions refer to.")
@click.option("--split", default="test", show_default=True,
              type=click.Choice(["train", "val", "test"]))
@click.option("--format", "fmt", default="bin", show_default=True,
              type=click.Choice(["bin", "csv"]))
@click.option("--lookback", type=int, default=None, help="Defaults to the instance config.")
@click.option("--stride", type=int, default=None,
              help="Window stride used by the predictor; defaults to the horizon.")
@click.option("--model", default="external", show_default=True,
              help="Model name recorded in the report.")
@click.option("--out", type=click.Path(), default=None,
              help="Report output directory; defaults to the instance's reports/.")
def eval(predictions_path: str, instance_dir: str, split: str, fmt: str,
         lookback: int | None, stride: int | None, model: str, out: str | None) -> None:
    """Score an external prediction file against an instance."""
    _guarded(_eval, predictions_path, instance_dir, split, fmt, lookback, stride, model, out)


def _eval(predictions_path: str, instance_dir: str, split: str, fmt: str,
          lookback: int | None, stride: int | None, model: str, out: str | None) -> None:
    reader = read_predictions if fmt == "bin" else read_predictions_csv
    predictions = reader(predictions_path)
    instance = read_instance(instance_dir)
    report = evaluate_predictions(
        instance, predictions, split=split, lookback=lookback, stride=stride,
        metadata={"model": model},
    )
    out_dir = Path(out) if out else Path(instance_dir)
    path = write_report(report, out_dir)
    profile_rows = [
        {"step": i, "mse_clean": float(x)} for i, x in enumerate(report.per_step_mse)
    ]
    write_table(profile_rows, path.parent / (path.stem + "-horizon.csv"))
    if report.spectral_error is not None:
        spectral = [
            {"frequency_index": i, "epsilon": float(x)}
            for i, x in enumerate(report.spectral_error)
        ]
        write_table(spectral, path.parent / (path.stem + "-spectral.csv"))
    click.echo(
        f"mse_clean={report.mse_clean:.6f} mse_noisy={report.mse_noisy:.6f} "
        f"-> {path}"
    )


# -- report -------------------------------------------------------------------


@main.command()
@click.option("--root", "grid_root", type=click.Path(), required=True,
              help="Grid root holding instance directories with reports.")
@click.option("--out", type=click.Path(), default=None,
              help="Table/figure output directory; defaults to <root>/report.")
def report(grid_root: str, out: str | None) -> None:
    """Aggregate run reports into tables and figures."""
    _guarded(_report, grid_root, out)


def _report(grid_root: str, out: str | None) -> None:
    root = Path(grid_root)
    reports = collect_reports(root)
    if not reports:
        raise SynthBenchError(f"no run reports under {root}")
    reported_cells = {r.metadata.get("cell_id") for r in reports}
    missing = [
        d.name for d in _instance_dirs(root)
        if d.name not in reported_cells and d.name != "report"
    ]
    out_dir = Path(out) if out else root / "report"
    heatmap, radar = write_report_tables(reports, out_dir)
    figures = render_figures(reports, out_dir / "figures")
    click.echo(f"tables: {heatmap}, {radar}")
    click.echo(f"figures: {len(figures)} file(s) under {out_dir / 'figures'}")
    for name in missing:
        click.echo(f"missing reports for cell: {name}")


if __name__ == "__main__":
    main()
