"""Signal and noise component families.

Each component evaluates to one length-N real series. Signal components are
deterministic given their sampled parameters (monomial trends and three
periodic waveforms); noise components are either independent (white,
Brownian, impulse) or modulated by a signal component on the same variate
(trend noise, seasonal noise).

Waveforms, with x_k = 2*pi*f*k + phi:

    sine            sin(x_k)
    smooth sawtooth arcsin(tanh(10*cos(x_k)) * sin(x_k))
    smooth square   sin(x_k) / sqrt(0.005 + sin(x_k)^2)

Trend components evaluate a*t^b on the rescaled time axis t = k/(N-1) in
[0, 1]; raw sample indices would explode for large exponents and the scale
is removed by z-normalization anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, DegenerateSeriesError
from .prng import truncated_gauss

__all__ = [
    "WAVEFORMS",
    "NOISE_KINDS",
    "DEPENDENT_NOISE_KINDS",
    "TrendSpec",
    "SeasonalSpec",
    "WhiteNoiseSpec",
    "BrownianNoiseSpec",
    "ImpulseSpec",
    "DependentNoiseSpec",
    "SignalSpec",
    "NoiseSpec",
    "ComponentSpec",
    "sample_trend",
    "eval_trend",
    "sample_seasonal",
    "eval_seasonal",
    "sample_impulse",
    "eval_impulse",
    "gen_white",
    "gen_brownian",
    "gen_impulse",
    "gen_dependent_noise",
    "sample_dependent_sign",
    "znormalize",
]

WAVEFORMS = ("sine", "sawtooth", "square")
NOISE_KINDS = ("white", "brownian", "impulse", "trend", "seasonal")
DEPENDENT_NOISE_KINDS = ("trend", "seasonal")

STD_EPS = 1e-9
MAX_COMPONENT_RETRIES = 100


@dataclass(frozen=True)
class TrendSpec:
    """Monomial trend a*t^b with amplitude a in [-1, 1] and exponent b > 0."""

    index: int
    amplitude: float
    exponent: float

    @property
    def component_id(self) -> str:
        return f"trend-{self.index}"


@dataclass(frozen=True)
class SeasonalSpec:
    """Periodic waveform with frequency in cycles per sample and phase in radians."""

    index: int
    kind: str
    frequency: float
    phase: float

    @property
    def component_id(self) -> str:
        return f"seasonal-{self.index}"


@dataclass(frozen=True)
class WhiteNoiseSpec:
    """I.i.d. standard normal draws; the series comes from the component stream."""

    index: int

    @property
    def component_id(self) -> str:
        return f"white-{self.index}"


@dataclass(frozen=True)
class BrownianNoiseSpec:
    """Cumulative sum of a white series drawn from the component stream."""

    index: int

    @property
    def component_id(self) -> str:
        return f"brownian-{self.index}"


@dataclass(frozen=True)
class ImpulseSpec:
    """Sparse Gaussian bumps: amplitude a, centers mu_i, shared width sigma^2."""

    index: int
    centers: tuple[float, ...]
    width: float
    amplitude: float

    @property
    def n_impulses(self) -> int:
        return len(self.centers)

    @property
    def component_id(self) -> str:
        return f"impulse-{self.index}"


@dataclass(frozen=True)
class DependentNoiseSpec:
    """White noise scaled elementwise by a signal component on the same variate.

    ``modulator_ref`` names the bound signal component; shared instances keep
    one gamma stream (same ``index``) but may bind a different modulator on
    each variate they are attached to.
    """

    index: int
    kind: str
    sign: int
    modulator_ref: str | None = None

    @property
    def component_id(self) -> str:
        return f"dependent-{self.index}"

    def bind(self, modulator_ref: str) -> "DependentNoiseSpec":
        return replace(self, modulator_ref=modulator_ref)


SignalSpec = TrendSpec | SeasonalSpec
NoiseSpec = WhiteNoiseSpec | BrownianNoiseSpec | ImpulseSpec | DependentNoiseSpec
ComponentSpec = SignalSpec | NoiseSpec


# -- samplers ---------------------------------------------------------------


def sample_trend(
    stream: np.random.Generator,
    n_samples: int,
    exponent_range: tuple[float, float] = (0.5, 2.0),
    index: int = 0,
) -> TrendSpec:
    """Draw a ~ U(-1, 1) and b ~ U(b_lo, b_hi), rejecting degenerate series.

    A spec whose evaluated series is constant to tolerance (sample std below
    STD_EPS) is resampled; after MAX_COMPONENT_RETRIES the configuration is
    reported as degenerate.
    """
    b_lo, b_hi = exponent_range
    if b_lo <= 0:
        raise ConfigError(f"trend exponent range must be positive, got {exponent_range}")
    if b_lo > b_hi:
        raise ConfigError(f"invalid exponent range {exponent_range}")
    for _ in range(MAX_COMPONENT_RETRIES):
        amplitude = float(stream.uniform(-1.0, 1.0))
        exponent = b_lo if b_lo == b_hi else float(stream.uniform(b_lo, b_hi))
        spec = TrendSpec(index=index, amplitude=amplitude, exponent=exponent)
        if eval_trend(spec, n_samples).std() >= STD_EPS:
            return spec
    raise DegenerateSeriesError(
        f"could not sample a non-constant trend in {MAX_COMPONENT_RETRIES} tries"
    )


def eval_trend(spec: TrendSpec, n_samples: int) -> np.ndarray:
    """g(k) = a * t_k^b on the unit grid t_k = k/(N-1)."""
    if n_samples < 2:
        raise ConfigError("trend evaluation needs at least 2 samples")
    t = np.arange(n_samples, dtype=np.float64) / (n_samples - 1)
    return spec.amplitude * t**spec.exponent


def sample_seasonal(
    stream: np.random.Generator,
    kind: str,
    n_samples: int,
    band: tuple[float, float],
    index: int = 0,
) -> SeasonalSpec:
    """Draw phase ~ U(0, 2*pi) then frequency from a band-truncated Gaussian.

    ``band`` is a frequency-index interval [l_lo, l_hi]; the sampled frequency
    is f = l/N in cycles per sample. The truncated Gaussian is centered on the
    band midpoint with sigma = band width / 4; a zero-width band returns the
    band frequency exactly.
    """
    if kind not in WAVEFORMS:
        raise ConfigError(f"unknown waveform {kind!r}; expected one of {WAVEFORMS}")
    l_lo, l_hi = band
    if l_lo <= 0 or l_lo > l_hi:
        raise ConfigError(f"invalid frequency-index band {band}")
    if l_hi > n_samples / 2:
        raise ConfigError(
            f"band {band} exceeds the Nyquist limit N/2 = {n_samples / 2:g}"
        )
    phase = float(stream.uniform(0.0, 2.0 * np.pi))
    if l_lo == l_hi:
        frequency = l_lo / n_samples
    else:
        f_lo, f_hi = l_lo / n_samples, l_hi / n_samples
        mu = 0.5 * (f_lo + f_hi)
        sigma = (f_hi - f_lo) / 4.0
        frequency = truncated_gauss(stream, mu, sigma, f_lo, f_hi)
    return SeasonalSpec(index=index, kind=kind, frequency=frequency, phase=phase)


def eval_seasonal(spec: SeasonalSpec, n_samples: int) -> np.ndarray:
    """Evaluate the waveform at x_k = 2*pi*f*k + phi for k = 0..N-1."""
    k = np.arange(n_samples, dtype=np.float64)
    x = 2.0 * np.pi * spec.frequency * k + spec.phase
    if spec.kind == "sine":
        return np.sin(x)
    if spec.kind == "sawtooth":
        return np.arcsin(np.tanh(10.0 * np.cos(x)) * np.sin(x))
    if spec.kind == "square":
        s = np.sin(x)
        return s / np.sqrt(0.005 + s * s)
    raise ConfigError(f"unknown waveform {spec.kind!r}")


def sample_impulse(
    stream: np.random.Generator,
    n_samples: int,
    count_range: tuple[int, int] = (5, 20),
    sigma_range: tuple[float, float] = (1.0, 10.0),
    amplitude_range: tuple[float, float] = (5.0, 20.0),
    index: int = 0,
) -> ImpulseSpec:
    """Draw impulse count, centers uniform over [0, N), width, and amplitude."""
    n_lo, n_hi = count_range
    if n_lo < 1 or n_lo > n_hi:
        raise ConfigError(f"invalid impulse count range {count_range}")
    n_imp = int(stream.integers(n_lo, n_hi + 1))
    centers = tuple(float(c) for c in stream.uniform(0.0, n_samples, size=n_imp))
    sigma = float(stream.uniform(*sigma_range))
    amplitude = float(stream.uniform(*amplitude_range))
    return ImpulseSpec(index=index, centers=centers, width=sigma * sigma, amplitude=amplitude)


def eval_impulse(spec: ImpulseSpec, n_samples: int) -> np.ndarray:
    """Sum of Gaussian bumps a/sqrt(2*pi*sigma^2) * exp(-(k-mu_i)^2 / (2*sigma^2))."""
    if spec.n_impulses < 1:
        raise ConfigError("impulse component needs at least one impulse")
    if spec.width <= 0:
        raise ConfigError(f"impulse width must be positive, got {spec.width}")
    k = np.arange(n_samples, dtype=np.float64)
    centers = np.asarray(spec.centers, dtype=np.float64)
    scale = spec.amplitude / np.sqrt(2.0 * np.pi * spec.width)
    bumps = np.exp(-((k[None, :] - centers[:, None]) ** 2) / (2.0 * spec.width))
    return scale * bumps.sum(axis=0)


# -- stochastic series ------------------------------------------------------


def gen_white(n_samples: int, stream: np.random.Generator) -> np.ndarray:
    """I.i.d. N(0, 1) series: zero mean, unit variance, no autocorrelation."""
    if n_samples < 1:
        raise ConfigError("white noise needs at least 1 sample")
    return stream.standard_normal(n_samples)


def gen_brownian(n_samples: int, stream: np.random.Generator) -> np.ndarray:
    """Prefix sum of a white series: W(k) = sum of the first k white draws."""
    return np.cumsum(gen_white(n_samples, stream))


def gen_impulse(
    n_samples: int,
    stream: np.random.Generator,
    count_range: tuple[int, int] = (5, 20),
    sigma_range: tuple[float, float] = (1.0, 10.0),
    amplitude_range: tuple[float, float] = (5.0, 20.0),
) -> np.ndarray:
    """Sample an impulse spec and evaluate it in one call."""
    spec = sample_impulse(stream, n_samples, count_range, sigma_range, amplitude_range)
    return eval_impulse(spec, n_samples)


def sample_dependent_sign(stream: np.random.Generator) -> int:
    """Equal-probability sign a in {-1, +1} for dependent noise."""
    return -1 if stream.uniform(0.0, 1.0) < 0.5 else 1


def gen_dependent_noise(
    spec: DependentNoiseSpec,
    modulator: np.ndarray,
    stream: np.random.Generator,
) -> np.ndarray:
    """W(k) = a * modulator(k) * gamma_k with gamma i.i.d. standard normal."""
    if spec.sign not in (-1, 1):
        raise ConfigError(f"dependent-noise sign must be -1 or +1, got {spec.sign}")
    gamma = stream.standard_normal(len(modulator))
    return spec.sign * np.asarray(modulator, dtype=np.float64) * gamma


# -- normalization ----------------------------------------------------------


def znormalize(series: np.ndarray, eps: float = STD_EPS) -> np.ndarray:
    """Rescale to sample mean 0 and variance 1 (population convention).

    Raises DegenerateSeriesError for near-constant input so callers can
    resample the offending component.
    """
    s = np.asarray(series, dtype=np.float64)
    std = float(s.std())
    if std < eps:
        raise DegenerateSeriesError(
            f"cannot z-normalize a near-constant series (std={std:.3e})"
        )
    return (s - s.mean()) / std
