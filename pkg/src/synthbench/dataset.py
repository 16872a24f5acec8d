"""Dataset instances: grid expansion, generation, persistence, windowing.

An instance directory holds a deterministic, self-describing dataset:

    manifest.json   configuration, recipes, per-variate mixing, checksums
    clean.f64       N x V float64, little-endian, column-major
    mixed.f64       N x V float64, little-endian, column-major
    instance.csv    optional export with header "time,v0,v1,..."

Floats inside the manifest are decimal strings (repr round-trip) so the
manifest is stable across JSON implementations; array bytes are checksummed
with SHA-256 so corruption and format drift are detected on read.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .assignment import VariateRecipe, build_recipes
from .config import (
    GridSpec,
    InstanceConfig,
    SplitSpec,
    decode_number,
    encode_number,
)
from .errors import ConfigError, FormatVersionError, IntegrityError
from .synthesis import VariateTriple, synthesize_variate

__all__ = [
    "FORMAT_VERSION",
    "MixingInfo",
    "DatasetInstance",
    "expand_grid",
    "generate_instance",
    "split_ranges",
    "windows",
    "write_instance",
    "read_instance",
    "instance_checksums",
    "instance_is_valid",
]

FORMAT_VERSION = 1

MANIFEST_NAME = "manifest.json"
CLEAN_NAME = "clean.f64"
MIXED_NAME = "mixed.f64"
CSV_NAME = "instance.csv"


@dataclass(frozen=True)
class MixingInfo:
    """Realized mixing parameters for one finite-SNR variate."""

    snr: float
    correlation: float
    w_signal: float
    w_noise: float

    def to_dict(self) -> dict[str, str]:
        return {
            "snr": encode_number(self.snr),
            "correlation": encode_number(self.correlation),
            "w_signal": encode_number(self.w_signal),
            "w_noise": encode_number(self.w_noise),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MixingInfo":
        return cls(
            snr=decode_number(str(data["snr"])),
            correlation=decode_number(str(data["correlation"])),
            w_signal=decode_number(str(data["w_signal"])),
            w_noise=decode_number(str(data["w_noise"])),
        )


@dataclass(frozen=True)
class DatasetInstance:
    """Generated matrices plus the full configuration that produced them."""

    config: InstanceConfig
    recipes: tuple[VariateRecipe, ...]
    clean: np.ndarray
    mixed: np.ndarray
    mixing: tuple[MixingInfo | None, ...]

    def validate(self) -> None:
        n, v = self.config.n_samples, self.config.n_variates
        if self.clean.shape != (n, v) or self.mixed.shape != (n, v):
            raise IntegrityError(
                f"matrix shapes {self.clean.shape}/{self.mixed.shape} do not "
                f"match config ({n}, {v})"
            )
        if len(self.recipes) != v or len(self.mixing) != v:
            raise IntegrityError("recipe or mixing count does not match variates")
        for variate in range(v):
            self.triple(variate).validate()

    def triple(self, variate: int) -> VariateTriple:
        """Rebuild the variate's synthesis triple, recovering the noise series."""
        clean = self.clean[:, variate]
        mixed = self.mixed[:, variate]
        info = self.mixing[variate]
        if info is None:
            return VariateTriple(
                clean=clean, noise=None, mixed=mixed,
                snr=self.recipes[variate].snr,
                correlation=None, w_signal=None, w_noise=None,
            )
        noise = (mixed - info.w_signal * clean) / info.w_noise
        return VariateTriple(
            clean=clean, noise=noise, mixed=mixed, snr=info.snr,
            correlation=info.correlation,
            w_signal=info.w_signal, w_noise=info.w_noise,
        )


def expand_grid(grid: GridSpec) -> list[InstanceConfig]:
    """Cartesian product of the grid axes, in stable nested-loop order.

    The loop nests kind, band, noise kind, snr, seed with the first axis
    outermost, so enumeration order never depends on anything but the grid
    itself.
    """
    for name, axis in (
        ("kinds", grid.kinds), ("bands", grid.bands),
        ("noise_kinds", grid.noise_kinds), ("snrs", grid.snrs),
        ("seeds", grid.seeds),
    ):
        if not axis:
            raise ConfigError(f"grid axis {name!r} is empty")
    configs = []
    for kind in grid.kinds:
        for band in grid.bands:
            for noise_kind in grid.noise_kinds:
                for snr in grid.snrs:
                    for seed in grid.seeds:
                        config = InstanceConfig(
                            n_samples=grid.n_samples,
                            n_variates=grid.n_variates,
                            seasonal_kind=kind,
                            band=band,
                            trend_enabled=grid.trend_enabled,
                            exponent_range=grid.exponent_range,
                            noise_kind=noise_kind,
                            snr=snr,
                            sigma_snr=grid.sigma_snr,
                            penalty=grid.penalty,
                            lookback=grid.lookback,
                            horizon=grid.horizon,
                            seed=seed,
                            split=grid.split,
                        )
                        config.validate()
                        configs.append(config)
    return configs


def generate_instance(config: InstanceConfig, workers: int = 1) -> DatasetInstance:
    """Build recipes and synthesize all variates, optionally in parallel.

    The result is a pure function of the config; worker count only changes
    wall time. Each triple is validated before assembly.
    """
    if workers < 1:
        raise ConfigError(f"workers must be positive, got {workers}")
    recipes = build_recipes(config)
    n = config.n_samples
    if workers == 1:
        triples = [synthesize_variate(r, n) for r in recipes]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            triples = list(pool.map(lambda r: synthesize_variate(r, n), recipes))
    clean = np.empty((n, config.n_variates), dtype=np.float64)
    mixed = np.empty((n, config.n_variates), dtype=np.float64)
    mixing: list[MixingInfo | None] = []
    for v, triple in enumerate(triples):
        triple.validate()
        clean[:, v] = triple.clean
        mixed[:, v] = triple.mixed
        if triple.w_signal is None:
            mixing.append(None)
        else:
            mixing.append(
                MixingInfo(
                    snr=triple.snr,
                    correlation=triple.correlation,
                    w_signal=triple.w_signal,
                    w_noise=triple.w_noise,
                )
            )
    return DatasetInstance(
        config=config,
        recipes=tuple(recipes),
        clean=clean,
        mixed=mixed,
        mixing=tuple(mixing),
    )


def split_ranges(
    n_samples: int, split: SplitSpec, min_length: int = 1
) -> tuple[tuple[int, int], tuple[int, int], tuple[int, int]]:
    """Chronological (train, val, test) index ranges covering [0, n_samples).

    Train and val lengths are floored; test takes the remainder. Each range
    must hold at least min_length samples (pass lookback+horizon to ensure a
    split can produce forecast windows).
    """
    split.validate()
    if n_samples < 1:
        raise ConfigError(f"n_samples must be positive, got {n_samples}")
    train_end = int(n_samples * split.train)
    val_end = train_end + int(n_samples * split.val)
    ranges = ((0, train_end), (train_end, val_end), (val_end, n_samples))
    for name, (lo, hi) in zip(("train", "val", "test"), ranges):
        if hi - lo < min_length:
            raise ConfigError(
                f"{name} split holds {hi - lo} samples, fewer than the "
                f"required {min_length}"
            )
    return ranges


def windows(
    span: tuple[int, int], lookback: int, horizon: int, stride: int = 1
) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Sliding ([t, t+T), [t+T, t+T+H)) index pairs inside the span.

    Returns an empty list when the span is too short; for stride 1 the count
    is span_length - lookback - horizon + 1.
    """
    lo, hi = span
    if lookback < 1 or horizon < 1:
        raise ConfigError(
            f"lookback and horizon must be positive, got {lookback} and {horizon}"
        )
    if stride < 1:
        raise ConfigError(f"stride must be positive, got {stride}")
    pairs = []
    for t in range(lo, hi - lookback - horizon + 1, stride):
        pairs.append(((t, t + lookback), (t + lookback, t + lookback + horizon)))
    return pairs


# -- persistence -------------------------------------------------------------


def write_instance(
    instance: DatasetInstance, directory: str | Path, csv: bool = False
) -> Path:
    """Persist an instance; returns the manifest path.

    Writing is deterministic: regenerating the same config produces byte-
    identical files, so checksums double as an idempotence check.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    clean_bytes = _matrix_bytes(instance.clean)
    mixed_bytes = _matrix_bytes(instance.mixed)
    (directory / CLEAN_NAME).write_bytes(clean_bytes)
    (directory / MIXED_NAME).write_bytes(mixed_bytes)
    manifest = {
        "format_version": FORMAT_VERSION,
        "generator": {"name": "synthbench", "version": __version__},
        "config": instance.config.to_dict(),
        "recipes": [r.to_dict() for r in instance.recipes],
        "mixing": [None if m is None else m.to_dict() for m in instance.mixing],
        "arrays": {
            "clean": _array_entry(CLEAN_NAME, instance.clean, clean_bytes),
            "mixed": _array_entry(MIXED_NAME, instance.mixed, mixed_bytes),
        },
    }
    manifest_path = directory / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    if csv:
        _write_csv(directory / CSV_NAME, instance.mixed)
    return manifest_path


def read_instance(directory: str | Path, validate: bool = True) -> DatasetInstance:
    """Load a persisted instance, verifying checksums and column invariants."""
    directory = Path(directory)
    manifest = _read_manifest(directory)
    config = InstanceConfig.from_dict(manifest["config"])
    recipes = tuple(VariateRecipe.from_dict(r) for r in manifest["recipes"])
    mixing = tuple(
        None if m is None else MixingInfo.from_dict(m) for m in manifest["mixing"]
    )
    clean = _load_matrix(directory, manifest["arrays"]["clean"])
    mixed = _load_matrix(directory, manifest["arrays"]["mixed"])
    instance = DatasetInstance(
        config=config, recipes=recipes, clean=clean, mixed=mixed, mixing=mixing
    )
    if validate:
        instance.validate()
    return instance


def instance_checksums(directory: str | Path) -> dict[str, str]:
    """Array checksums recorded in the manifest (clean and mixed)."""
    manifest = _read_manifest(Path(directory))
    return {
        name: entry["sha256"] for name, entry in manifest["arrays"].items()
    }


def instance_is_valid(directory: str | Path) -> bool:
    """Whether the directory holds a complete instance with intact checksums."""
    directory = Path(directory)
    try:
        manifest = _read_manifest(directory)
        for entry in manifest["arrays"].values():
            _verify_bytes(directory, entry)
    except (OSError, KeyError, ValueError, IntegrityError, ConfigError):
        return False
    return True


def _matrix_bytes(matrix: np.ndarray) -> bytes:
    return np.ascontiguousarray(matrix, dtype="<f8").tobytes(order="F")


def _array_entry(name: str, matrix: np.ndarray, payload: bytes) -> dict[str, Any]:
    return {
        "file": name,
        "shape": list(matrix.shape),
        "dtype": "float64-le",
        "order": "F",
        "sha256": hashlib.sha256(payload).hexdigest(),
    }


def _write_csv(path: Path, matrix: np.ndarray) -> None:
    n, v = matrix.shape
    with path.open("w") as fh:
        fh.write("time," + ",".join(f"v{j}" for j in range(v)) + "\n")
        for k in range(n):
            fh.write(str(k) + "," + ",".join(repr(float(x)) for x in matrix[k]) + "\n")


def _read_manifest(directory: Path) -> dict[str, Any]:
    path = directory / MANIFEST_NAME
    if not path.exists():
        raise IntegrityError(f"no manifest at {path}")
    try:
        manifest = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise IntegrityError(f"malformed manifest {path}: {exc}") from exc
    version = int(manifest.get("format_version", -1))
    if version != FORMAT_VERSION:
        raise FormatVersionError(
            f"manifest format version {version} is not the supported "
            f"{FORMAT_VERSION}"
        )
    return manifest


def _verify_bytes(directory: Path, entry: dict[str, Any]) -> bytes:
    path = directory / str(entry["file"])
    if not path.exists():
        raise IntegrityError(f"missing array file {path}")
    payload = path.read_bytes()
    digest = hashlib.sha256(payload).hexdigest()
    if digest != entry["sha256"]:
        raise IntegrityError(
            f"checksum mismatch for {path}: manifest says {entry['sha256']}, "
            f"file hashes to {digest}"
        )
    return payload


def _load_matrix(directory: Path, entry: dict[str, Any]) -> np.ndarray:
    payload = _verify_bytes(directory, entry)
    shape = tuple(int(s) for s in entry["shape"])
    if entry.get("dtype") != "float64-le" or entry.get("order") != "F":
        raise FormatVersionError(
            f"unsupported array encoding {entry.get('dtype')}/{entry.get('order')}"
        )
    expected = shape[0] * shape[1] * 8
    if len(payload) != expected:
        raise IntegrityError(
            f"array file {entry['file']} holds {len(payload)} bytes, "
            f"expected {expected}"
        )
    flat = np.frombuffer(payload, dtype="<f8")
    return flat.reshape(shape, order="F").copy()
