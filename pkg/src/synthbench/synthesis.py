"""Per-variate series synthesis.

A variate recipe turns into three length-N series in two aggregation stages:
signal components are z-normalized, combined with positive weights summing
to one, and the combination is z-normalized again to give the clean series;
noise components get the same treatment to give the noise aggregate. The
observation mixes the two at the recipe's signal-to-noise ratio:

    w_noise  = 1 / sqrt(1 + snr + 2*r*sqrt(snr))
    w_signal = sqrt(snr) * w_noise
    mixed    = w_signal*clean + w_noise*noise

where r is the empirical correlation between the aggregates. This mix has
unit variance (the denominator is exactly var(w_s*clean + w_n*noise)) and
signal-to-noise power ratio w_signal^2/w_noise^2 = snr to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .components import (
    BrownianNoiseSpec,
    DependentNoiseSpec,
    ImpulseSpec,
    SeasonalSpec,
    TrendSpec,
    WhiteNoiseSpec,
    eval_impulse,
    eval_seasonal,
    eval_trend,
    gen_brownian,
    gen_dependent_noise,
    gen_white,
    znormalize,
)
from .errors import ConfigError, DegenerateSeriesError
from .prng import StreamPath, derive

if TYPE_CHECKING:
    from .assignment import VariateRecipe

__all__ = [
    "VariateTriple",
    "sample_weights",
    "aggregate",
    "pearson",
    "sample_snr",
    "mixing_weights",
    "synthesize_variate",
]

MAX_WEIGHT_RETRIES = 100

# Draws below this fraction of the global SNR are clamped so an unbounded
# Gaussian never produces a non-positive ratio.
SNR_FLOOR_FRACTION = 0.01


@dataclass(frozen=True)
class VariateTriple:
    """Clean signal, noise aggregate, and mixed observation for one variate.

    ``noise`` and the mixing fields are None when the SNR is infinite; the
    observation is then the clean series itself.
    """

    clean: np.ndarray
    noise: np.ndarray | None
    mixed: np.ndarray
    snr: float
    correlation: float | None
    w_signal: float | None
    w_noise: float | None

    def validate(self) -> None:
        if abs(float(self.clean.mean())) > 1e-9:
            raise DegenerateSeriesError(
                f"clean mean {float(self.clean.mean()):.3e} exceeds tolerance"
            )
        if abs(float(self.clean.var()) - 1.0) > 1e-8:
            raise DegenerateSeriesError(
                f"clean variance {float(self.clean.var()):.12f} is not 1"
            )
        if abs(float(self.mixed.var()) - 1.0) > 1e-8:
            raise DegenerateSeriesError(
                f"mixed variance {float(self.mixed.var()):.12f} is not 1"
            )
        if math.isfinite(self.snr):
            if self.noise is None or self.w_signal is None or self.w_noise is None:
                raise DegenerateSeriesError("finite SNR requires a noise aggregate")
            ratio = (self.w_signal**2 * float(self.clean.var())) / (
                self.w_noise**2 * float(self.noise.var())
            )
            if abs(ratio - self.snr) > 1e-8 * self.snr:
                raise DegenerateSeriesError(
                    f"empirical SNR {ratio:.12g} differs from target {self.snr:g}"
                )

    @property
    def empirical_snr(self) -> float:
        if self.noise is None or self.w_signal is None or self.w_noise is None:
            return math.inf
        return (self.w_signal**2 * float(self.clean.var())) / (
            self.w_noise**2 * float(self.noise.var())
        )


def sample_weights(n: int, stream: np.random.Generator) -> np.ndarray:
    """n positive weights summing to 1: w_i = |g_i| / sum |g_j|, g ~ N(0,1).

    Absolute values keep the normalization stable; sign inversion is already
    expressible through component parameters.
    """
    if n < 1:
        raise ConfigError(f"weight count must be positive, got {n}")
    for _ in range(MAX_WEIGHT_RETRIES):
        g = np.abs(stream.standard_normal(n))
        total = g.sum()
        if total >= 1e-9 and np.all(g > 0):
            return g / total
    raise DegenerateSeriesError(
        f"could not draw {n} positive weights in {MAX_WEIGHT_RETRIES} tries"
    )


def aggregate(component_series: list[np.ndarray], weights: np.ndarray) -> np.ndarray:
    """Weighted elementwise sum of z-normalized components, z-normalized again."""
    if len(component_series) != len(weights):
        raise ConfigError(
            f"{len(weights)} weights for {len(component_series)} series"
        )
    if not component_series:
        raise ConfigError("cannot aggregate zero components")
    lengths = {len(s) for s in component_series}
    if len(lengths) != 1:
        raise ConfigError(f"component series lengths differ: {sorted(lengths)}")
    stacked = np.stack([np.asarray(s, dtype=np.float64) for s in component_series])
    combined = np.asarray(weights, dtype=np.float64) @ stacked
    return znormalize(combined)


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    """Sample Pearson correlation coefficient of two equal-length series."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ConfigError(f"shape mismatch: {a.shape} vs {b.shape}")
    da = a - a.mean()
    db = b - b.mean()
    denom = float(np.sqrt((da * da).sum() * (db * db).sum()))
    if denom < 1e-12:
        raise DegenerateSeriesError("correlation of a constant series is undefined")
    return float(np.clip((da * db).sum() / denom, -1.0, 1.0))


def sample_snr(snr_global: float, sigma_snr: float, stream: np.random.Generator) -> float:
    """Per-variate SNR ~ N(snr_global, sigma_snr^2), floored at 1% of the target."""
    if not (snr_global > 0):
        raise ConfigError(f"snr must be positive or inf, got {snr_global}")
    if sigma_snr < 0:
        raise ConfigError(f"sigma_snr must be non-negative, got {sigma_snr}")
    if math.isinf(snr_global) or sigma_snr == 0:
        return snr_global
    draw = snr_global + sigma_snr * float(stream.standard_normal())
    return max(draw, SNR_FLOOR_FRACTION * snr_global)


def mixing_weights(snr: float, r: float) -> tuple[float, float]:
    """Scaling weights (w_signal, w_noise) for a unit-variance mix at ratio snr."""
    if not (snr > 0) or math.isinf(snr):
        raise ConfigError(f"mixing needs a positive finite snr, got {snr}")
    if not -1.0 <= r <= 1.0:
        raise ConfigError(f"correlation must lie in [-1, 1], got {r}")
    denom = 1.0 + snr + 2.0 * r * math.sqrt(snr)
    if denom <= 1e-9:
        raise DegenerateSeriesError(
            f"mixing denominator {denom:.3e} is not positive (snr={snr}, r={r})"
        )
    w_noise = 1.0 / math.sqrt(denom)
    return math.sqrt(snr) * w_noise, w_noise


def synthesize_variate(recipe: "VariateRecipe", n_samples: int) -> VariateTriple:
    """Evaluate and aggregate one recipe into its clean/noise/mixed triple."""
    try:
        return _synthesize(recipe, n_samples)
    except (ConfigError, DegenerateSeriesError) as exc:
        raise type(exc)(f"variate {recipe.variate_id}: {exc}") from exc


def _synthesize(recipe: "VariateRecipe", n_samples: int) -> VariateTriple:
    root = StreamPath(master_seed=recipe.stream_path.master_seed)
    signal_series: dict[str, np.ndarray] = {}
    for spec in recipe.signal_components:
        if isinstance(spec, TrendSpec):
            raw = eval_trend(spec, n_samples)
        elif isinstance(spec, SeasonalSpec):
            raw = eval_seasonal(spec, n_samples)
        else:
            raise ConfigError(f"{spec.component_id} is not a signal component")
        signal_series[spec.component_id] = znormalize(raw)

    clean = aggregate(
        [signal_series[c.component_id] for c in recipe.signal_components],
        np.asarray(recipe.signal_weights),
    )

    if math.isinf(recipe.snr) or not recipe.noise_components:
        return VariateTriple(
            clean=clean,
            noise=None,
            mixed=clean.copy(),
            snr=recipe.snr,
            correlation=None,
            w_signal=None,
            w_noise=None,
        )

    noise_series = []
    for spec in recipe.noise_components:
        series_stream = derive(root.child("noise", spec.index).child("series", 0))
        if isinstance(spec, WhiteNoiseSpec):
            raw = gen_white(n_samples, series_stream)
        elif isinstance(spec, BrownianNoiseSpec):
            raw = gen_brownian(n_samples, series_stream)
        elif isinstance(spec, ImpulseSpec):
            raw = eval_impulse(spec, n_samples)
        elif isinstance(spec, DependentNoiseSpec):
            if spec.modulator_ref not in signal_series:
                raise ConfigError(
                    f"{spec.component_id} references {spec.modulator_ref!r}, "
                    f"which this variate does not hold"
                )
            raw = gen_dependent_noise(
                spec, signal_series[spec.modulator_ref], series_stream
            )
        else:
            raise ConfigError(f"unknown noise component {spec!r}")
        noise_series.append(znormalize(raw))

    noise = aggregate(noise_series, np.asarray(recipe.noise_weights))
    r = pearson(clean, noise)
    w_signal, w_noise = mixing_weights(recipe.snr, r)
    return VariateTriple(
        clean=clean,
        noise=noise,
        mixed=w_signal * clean + w_noise * noise,
        snr=recipe.snr,
        correlation=r,
        w_signal=w_signal,
        w_noise=w_noise,
    )
