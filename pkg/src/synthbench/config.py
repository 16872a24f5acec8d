"""Instance and grid configuration.

An InstanceConfig pins down one synthetic dataset completely: shape, the
seasonal waveform kind, its frequency band, the noise family, the target
signal-to-noise ratio, the component census, the assignment penalty, the
forecasting window sizes, and the data seed. A GridSpec holds axis lists
whose cartesian product expands into concrete configs.

All floats cross the JSON boundary as decimal strings produced by repr() so
that serialization round-trips bit-exactly; see encode_number/decode_number.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .components import NOISE_KINDS, WAVEFORMS as WAVEFORM_KINDS
from .errors import CensusError, ConfigError

__all__ = [
    "DEFAULT_N_SAMPLES",
    "DEFAULT_N_VARIATES",
    "DEFAULT_BANDS",
    "DEFAULT_SNRS",
    "WAVEFORM_KINDS",
    "NOISE_KINDS",
    "ComponentCensus",
    "SplitSpec",
    "InstanceConfig",
    "GridSpec",
    "default_census",
    "encode_number",
    "decode_number",
    "load_config",
    "load_grid",
]

# Desk-scale defaults: one year of hourly samples across 16 variates.
DEFAULT_N_SAMPLES = 8760
DEFAULT_N_VARIATES = 16

# Frequency-index bands for the seasonal axis, scaled to the desk Nyquist
# limit N/2 = 4380 (factor 0.25 from the reference bands used at N = 35040).
DEFAULT_BANDS: tuple[tuple[float, float], ...] = (
    (1, 125),
    (125, 250),
    (250, 375),
    (1500, 1625),
    (2000, 2125),
    (3000, 3125),
    (4000, 4125),
)

DEFAULT_SNRS: tuple[float, ...] = (math.inf, 1000.0, 100.0, 10.0, 1.0)


def encode_number(value: float | int) -> str:
    """Render a number as its repr so float round-trips are bit-exact."""
    if isinstance(value, bool):
        raise ConfigError("booleans are not numeric config values")
    if isinstance(value, int):
        return str(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        raise ConfigError("NaN is not a valid config value")
    return repr(float(value))


def decode_number(text: str) -> float:
    """Inverse of encode_number for floats (accepts 'inf' and '-inf')."""
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"not a decimal number: {text!r}") from exc


@dataclass(frozen=True)
class ComponentCensus:
    """How many components of each family an instance holds.

    Each component instance attaches to a number of distinct variates drawn
    uniformly from ``share_range``. ``noise`` counts components of whatever
    family the instance's noise_kind selects.
    """

    trend: int
    seasonal: int
    noise: int
    share_range: tuple[int, int] = (1, 3)

    def validate(self, n_variates: int, noise_kind: str | None, snr: float) -> None:
        if self.trend < 0 or self.seasonal < 0 or self.noise < 0:
            raise CensusError("component counts must be non-negative")
        lo, hi = self.share_range
        if lo < 1 or lo > hi:
            raise CensusError(f"invalid share range {self.share_range}")
        if hi > n_variates:
            raise CensusError(
                f"share range {self.share_range} exceeds {n_variates} variates"
            )
        # Every variate needs at least one seasonal component.
        if self.seasonal * hi < n_variates:
            raise CensusError(
                f"{self.seasonal} seasonal components sharing at most {hi} "
                f"variates each cannot cover {n_variates} variates"
            )
        if math.isfinite(snr):
            if noise_kind is None:
                raise CensusError("finite SNR requires a noise kind")
            # Finite SNR holds per variate, so noise must cover every variate.
            if self.noise * hi < n_variates:
                raise CensusError(
                    f"{self.noise} noise components sharing at most {hi} "
                    f"variates each cannot cover {n_variates} variates"
                )
            # Trend-modulated noise needs a trend component wherever it lands.
            if noise_kind == "trend" and self.trend * hi < n_variates:
                raise CensusError(
                    f"trend-modulated noise needs trend components on every "
                    f"variate; census holds {self.trend} for {n_variates}"
                )

    def to_dict(self) -> dict[str, Any]:
        return {
            "trend": self.trend,
            "seasonal": self.seasonal,
            "noise": self.noise,
            "share_range": list(self.share_range),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ComponentCensus":
        return cls(
            trend=int(data["trend"]),
            seasonal=int(data["seasonal"]),
            noise=int(data["noise"]),
            share_range=tuple(int(s) for s in data.get("share_range", (1, 3))),
        )


def default_census(
    n_variates: int,
    noise_kind: str | None,
    snr: float,
    trend_enabled: bool,
) -> ComponentCensus:
    """Family counts sized to the variate pool.

    Seasonal components number V (each shared by 1 to 3 variates) so full
    coverage is always feasible; likewise noise when the SNR is finite.
    Trend components number V/4 when enabled, except that trend-modulated
    noise raises the count to V so a modulator can exist on every variate.
    """
    noise_needed = noise_kind is not None and math.isfinite(snr)
    if noise_kind == "trend" and noise_needed:
        trend = n_variates
    elif trend_enabled:
        trend = max(1, n_variates // 4)
    else:
        trend = 0
    return ComponentCensus(
        trend=trend,
        seasonal=n_variates,
        noise=n_variates if noise_needed else 0,
    )


@dataclass(frozen=True)
class SplitSpec:
    """Chronological train/val/test fractions; must sum to 1."""

    train: float = 0.7
    val: float = 0.1
    test: float = 0.2

    def validate(self) -> None:
        for name, frac in (("train", self.train), ("val", self.val), ("test", self.test)):
            if not 0.0 < frac < 1.0:
                raise ConfigError(f"{name} fraction must lie in (0, 1), got {frac}")
        if abs(self.train + self.val + self.test - 1.0) > 1e-9:
            raise ConfigError(
                f"split fractions must sum to 1, got "
                f"{self.train} + {self.val} + {self.test}"
            )

    def to_dict(self) -> dict[str, str]:
        return {
            "train": encode_number(self.train),
            "val": encode_number(self.val),
            "test": encode_number(self.test),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SplitSpec":
        return cls(
            train=decode_number(str(data["train"])),
            val=decode_number(str(data["val"])),
            test=decode_number(str(data["test"])),
        )


@dataclass(frozen=True)
class InstanceConfig:
    """Complete description of one synthetic dataset instance."""

    n_samples: int = DEFAULT_N_SAMPLES
    n_variates: int = DEFAULT_N_VARIATES
    seasonal_kind: str = "sine"
    band: tuple[float, float] = DEFAULT_BANDS[0]
    trend_enabled: bool = False
    exponent_range: tuple[float, float] = (0.5, 2.0)
    noise_kind: str | None = "white"
    snr: float = math.inf
    sigma_snr: float = 0.0
    penalty: float = 2.0
    lookback: int = 96
    horizon: int = 96
    seed: int = 0
    census: ComponentCensus | None = None
    split: SplitSpec = field(default_factory=SplitSpec)

    def resolved_census(self) -> ComponentCensus:
        if self.census is not None:
            return self.census
        return default_census(
            self.n_variates, self.noise_kind, self.snr, self.trend_enabled
        )

    def validate(self) -> None:
        if self.n_samples < 16:
            raise ConfigError(f"n_samples must be at least 16, got {self.n_samples}")
        if self.n_variates < 1:
            raise ConfigError(f"n_variates must be positive, got {self.n_variates}")
        if self.seasonal_kind not in WAVEFORM_KINDS:
            raise ConfigError(
                f"unknown waveform {self.seasonal_kind!r}; "
                f"expected one of {WAVEFORM_KINDS}"
            )
        l_lo, l_hi = self.band
        if l_lo <= 0 or l_lo > l_hi:
            raise ConfigError(f"invalid frequency-index band {self.band}")
        if l_hi > self.n_samples / 2:
            raise ConfigError(
                f"band {self.band} exceeds Nyquist index {self.n_samples / 2:g}"
            )
        b_lo, b_hi = self.exponent_range
        if b_lo <= 0 or b_lo > b_hi:
            raise ConfigError(f"invalid exponent range {self.exponent_range}")
        if self.noise_kind is not None and self.noise_kind not in NOISE_KINDS:
            raise ConfigError(
                f"unknown noise kind {self.noise_kind!r}; "
                f"expected one of {NOISE_KINDS} or null"
            )
        if not (self.snr > 0):
            raise ConfigError(f"snr must be positive or inf, got {self.snr}")
        if self.noise_kind is None and math.isfinite(self.snr):
            raise ConfigError("finite snr requires a noise kind")
        if self.sigma_snr < 0:
            raise ConfigError(f"sigma_snr must be non-negative, got {self.sigma_snr}")
        if self.penalty < 0:
            raise ConfigError(f"penalty must be non-negative, got {self.penalty}")
        if self.lookback < 1 or self.horizon < 1:
            raise ConfigError(
                f"lookback and horizon must be positive, got "
                f"{self.lookback} and {self.horizon}"
            )
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        self.split.validate()
        self.resolved_census().validate(self.n_variates, self.noise_kind, self.snr)

    @property
    def cell_id(self) -> str:
        """Stable identifier for the grid cell plus seed, usable as a path stem."""
        l_lo, l_hi = self.band
        noise = self.noise_kind or "nonoise"
        snr = "snrinf" if math.isinf(self.snr) else f"snr{self.snr:g}"
        trend = "-trend" if self.trend_enabled else ""
        return (
            f"{self.seasonal_kind}-b{l_lo:g}-{l_hi:g}-{noise}-{snr}{trend}"
            f"-s{self.seed}"
        )

    def to_dict(self) -> dict[str, Any]:
        # Float fields are coerced so that a config built with int literals
        # (band=(250, 375)) serializes identically to its decoded round-trip.
        return {
            "n_samples": self.n_samples,
            "n_variates": self.n_variates,
            "seasonal_kind": self.seasonal_kind,
            "band": [encode_number(float(self.band[0])), encode_number(float(self.band[1]))],
            "trend_enabled": self.trend_enabled,
            "exponent_range": [
                encode_number(float(self.exponent_range[0])),
                encode_number(float(self.exponent_range[1])),
            ],
            "noise_kind": self.noise_kind,
            "snr": encode_number(float(self.snr)),
            "sigma_snr": encode_number(float(self.sigma_snr)),
            "penalty": encode_number(float(self.penalty)),
            "lookback": self.lookback,
            "horizon": self.horizon,
            "seed": self.seed,
            "census": None if self.census is None else self.census.to_dict(),
            "split": self.split.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "InstanceConfig":
        known = {
            "n_samples", "n_variates", "seasonal_kind", "band", "trend_enabled",
            "exponent_range", "noise_kind", "snr", "sigma_snr", "penalty",
            "lookback", "horizon", "seed", "census", "split",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        kwargs: dict[str, Any] = {}
        for name in ("n_samples", "n_variates", "lookback", "horizon", "seed"):
            if name in data:
                kwargs[name] = int(data[name])
        if "seasonal_kind" in data:
            kwargs["seasonal_kind"] = str(data["seasonal_kind"])
        if "band" in data:
            lo, hi = data["band"]
            kwargs["band"] = (decode_number(str(lo)), decode_number(str(hi)))
        if "trend_enabled" in data:
            kwargs["trend_enabled"] = bool(data["trend_enabled"])
        if "exponent_range" in data:
            lo, hi = data["exponent_range"]
            kwargs["exponent_range"] = (decode_number(str(lo)), decode_number(str(hi)))
        if "noise_kind" in data:
            kwargs["noise_kind"] = None if data["noise_kind"] is None else str(data["noise_kind"])
        if "snr" in data:
            kwargs["snr"] = decode_number(str(data["snr"]))
        if "sigma_snr" in data:
            kwargs["sigma_snr"] = decode_number(str(data["sigma_snr"]))
        if "penalty" in data:
            kwargs["penalty"] = decode_number(str(data["penalty"]))
        if data.get("census") is not None:
            kwargs["census"] = ComponentCensus.from_dict(data["census"])
        if "split" in data:
            kwargs["split"] = SplitSpec.from_dict(data["split"])
        return cls(**kwargs)


@dataclass(frozen=True)
class GridSpec:
    """Axis lists whose cartesian product defines an experiment grid.

    Expansion order is the nested loop kind, band, noise kind, snr, seed
    (first axis outermost), so grid enumeration is stable across runs.
    """

    n_samples: int = DEFAULT_N_SAMPLES
    n_variates: int = DEFAULT_N_VARIATES
    kinds: tuple[str, ...] = WAVEFORM_KINDS
    bands: tuple[tuple[float, float], ...] = DEFAULT_BANDS
    noise_kinds: tuple[str | None, ...] = NOISE_KINDS
    snrs: tuple[float, ...] = DEFAULT_SNRS
    seeds: tuple[int, ...] = (0, 1, 2)
    trend_enabled: bool = False
    exponent_range: tuple[float, float] = (0.5, 2.0)
    sigma_snr: float = 0.0
    penalty: float = 2.0
    lookback: int = 96
    horizon: int = 96
    split: SplitSpec = field(default_factory=SplitSpec)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_samples": self.n_samples,
            "n_variates": self.n_variates,
            "kinds": list(self.kinds),
            "bands": [
                [encode_number(float(lo)), encode_number(float(hi))]
                for lo, hi in self.bands
            ],
            "noise_kinds": list(self.noise_kinds),
            "snrs": [encode_number(float(s)) for s in self.snrs],
            "seeds": list(self.seeds),
            "trend_enabled": self.trend_enabled,
            "exponent_range": [
                encode_number(float(self.exponent_range[0])),
                encode_number(float(self.exponent_range[1])),
            ],
            "sigma_snr": encode_number(float(self.sigma_snr)),
            "penalty": encode_number(float(self.penalty)),
            "lookback": self.lookback,
            "horizon": self.horizon,
            "split": self.split.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GridSpec":
        known = {
            "n_samples", "n_variates", "kinds", "bands", "noise_kinds", "snrs",
            "seeds", "trend_enabled", "exponent_range", "sigma_snr", "penalty",
            "lookback", "horizon", "split",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown grid fields: {sorted(unknown)}")
        kwargs: dict[str, Any] = {}
        for name in ("n_samples", "n_variates", "lookback", "horizon"):
            if name in data:
                kwargs[name] = int(data[name])
        if "kinds" in data:
            kwargs["kinds"] = tuple(str(k) for k in data["kinds"])
        if "bands" in data:
            kwargs["bands"] = tuple(
                (decode_number(str(lo)), decode_number(str(hi)))
                for lo, hi in data["bands"]
            )
        if "noise_kinds" in data:
            kwargs["noise_kinds"] = tuple(
                None if k is None else str(k) for k in data["noise_kinds"]
            )
        if "snrs" in data:
            kwargs["snrs"] = tuple(decode_number(str(s)) for s in data["snrs"])
        if "seeds" in data:
            kwargs["seeds"] = tuple(int(s) for s in data["seeds"])
        if "trend_enabled" in data:
            kwargs["trend_enabled"] = bool(data["trend_enabled"])
        if "exponent_range" in data:
            lo, hi = data["exponent_range"]
            kwargs["exponent_range"] = (decode_number(str(lo)), decode_number(str(hi)))
        if "sigma_snr" in data:
            kwargs["sigma_snr"] = decode_number(str(data["sigma_snr"]))
        if "penalty" in data:
            kwargs["penalty"] = decode_number(str(data["penalty"]))
        if "split" in data:
            kwargs["split"] = SplitSpec.from_dict(data["split"])
        return cls(**kwargs)


def load_config(path: str | Path) -> InstanceConfig:
    """Read one InstanceConfig from a JSON file and validate it."""
    config = InstanceConfig.from_dict(_read_json(path))
    config.validate()
    return config


def load_grid(path: str | Path) -> GridSpec:
    """Read a GridSpec from a JSON file."""
    return GridSpec.from_dict(_read_json(path))


def _read_json(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"expected a JSON object in {path}")
    return data
