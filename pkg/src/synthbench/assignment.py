"""Distribution of sampled components across variates.

Components are drawn family by family (trend, then seasonal, then noise) and
each instance is attached to a number of distinct variates drawn from the
census share range. Attachment targets come from a penalty-weighted rule:
variates that already hold many components become less likely to receive
more, with probability proportional to (count + 1)^(-penalty).

Coverage rules make downstream invariants hold by construction: every
variate receives at least one seasonal component; when the SNR is finite,
every variate receives at least one noise component; and when the noise is
trend-modulated, every variate receives a trend component so a modulator is
available. Whenever the remaining attachments of a family exactly match its
uncovered variates, draws are restricted to the uncovered set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .components import (
    BrownianNoiseSpec,
    ComponentSpec,
    DependentNoiseSpec,
    ImpulseSpec,
    NoiseSpec,
    SeasonalSpec,
    SignalSpec,
    TrendSpec,
    WhiteNoiseSpec,
    sample_dependent_sign,
    sample_impulse,
    sample_seasonal,
    sample_trend,
)
from .config import InstanceConfig, encode_number, decode_number
from .errors import CensusError, ConfigError
from .prng import StreamPath, derive
from .synthesis import sample_snr, sample_weights

__all__ = [
    "AssignmentState",
    "VariateRecipe",
    "selection_probabilities",
    "build_recipes",
    "spec_to_dict",
    "spec_from_dict",
]

MAX_ATTACH_RETRIES = 10_000


@dataclass
class AssignmentState:
    """Per-variate attachment counts plus the penalty exponent."""

    counts: np.ndarray
    penalty: float

    @classmethod
    def fresh(cls, n_variates: int, penalty: float) -> "AssignmentState":
        if n_variates < 1:
            raise ConfigError(f"n_variates must be positive, got {n_variates}")
        if penalty < 0:
            raise ConfigError(f"penalty must be non-negative, got {penalty}")
        return cls(counts=np.zeros(n_variates, dtype=np.int64), penalty=penalty)


def selection_probabilities(state: AssignmentState) -> np.ndarray:
    """p(v) = (s_v + 1)^(-penalty), normalized to sum to 1.

    The +1 shift keeps fresh variates (count 0) well defined and maximally
    likely; probabilities are strictly positive and nonincreasing in count.
    """
    counts = np.asarray(state.counts, dtype=np.float64)
    if counts.size < 1:
        raise ConfigError("selection needs at least one variate")
    if np.any(counts < 0):
        raise ConfigError("attachment counts must be non-negative")
    weights = (counts + 1.0) ** (-state.penalty)
    return weights / weights.sum()


@dataclass(frozen=True)
class VariateRecipe:
    """Everything needed to regenerate one variate deterministically."""

    variate_id: int
    signal_components: tuple[SignalSpec, ...]
    noise_components: tuple[NoiseSpec, ...]
    signal_weights: tuple[float, ...]
    noise_weights: tuple[float, ...]
    snr: float
    stream_path: StreamPath

    def validate(self) -> None:
        if len(self.signal_weights) != len(self.signal_components):
            raise ConfigError(
                f"variate {self.variate_id}: {len(self.signal_weights)} signal "
                f"weights for {len(self.signal_components)} components"
            )
        if len(self.noise_weights) != len(self.noise_components):
            raise ConfigError(
                f"variate {self.variate_id}: {len(self.noise_weights)} noise "
                f"weights for {len(self.noise_components)} components"
            )
        if not any(isinstance(c, SeasonalSpec) for c in self.signal_components):
            raise ConfigError(
                f"variate {self.variate_id} holds no seasonal component"
            )
        if abs(sum(self.signal_weights) - 1.0) > 1e-12:
            raise ConfigError(f"variate {self.variate_id}: signal weights do not sum to 1")
        if self.noise_weights and abs(sum(self.noise_weights) - 1.0) > 1e-12:
            raise ConfigError(f"variate {self.variate_id}: noise weights do not sum to 1")
        if any(w <= 0 for w in self.signal_weights + self.noise_weights):
            raise ConfigError(f"variate {self.variate_id}: weights must be positive")
        if not (self.snr > 0):
            raise ConfigError(f"variate {self.variate_id}: snr must be positive")
        signal_ids = {c.component_id for c in self.signal_components}
        for spec in self.noise_components:
            if isinstance(spec, DependentNoiseSpec):
                ref = spec.modulator_ref
                if ref is None or ref not in signal_ids:
                    raise ConfigError(
                        f"variate {self.variate_id}: modulator {ref!r} does not "
                        f"resolve to a signal component"
                    )
                if not ref.startswith(spec.kind):
                    raise ConfigError(
                        f"variate {self.variate_id}: modulator {ref!r} does not "
                        f"match noise family {spec.kind!r}"
                    )

    def to_dict(self) -> dict:
        return {
            "variate_id": self.variate_id,
            "signal_components": [spec_to_dict(c) for c in self.signal_components],
            "noise_components": [spec_to_dict(c) for c in self.noise_components],
            "signal_weights": [encode_number(w) for w in self.signal_weights],
            "noise_weights": [encode_number(w) for w in self.noise_weights],
            "snr": encode_number(self.snr),
            "stream_path": self.stream_path.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VariateRecipe":
        return cls(
            variate_id=int(data["variate_id"]),
            signal_components=tuple(spec_from_dict(d) for d in data["signal_components"]),
            noise_components=tuple(spec_from_dict(d) for d in data["noise_components"]),
            signal_weights=tuple(decode_number(w) for w in data["signal_weights"]),
            noise_weights=tuple(decode_number(w) for w in data["noise_weights"]),
            snr=decode_number(str(data["snr"])),
            stream_path=StreamPath.from_dict(data["stream_path"]),
        )


def spec_to_dict(spec: ComponentSpec) -> dict:
    """Serialize a component spec with all floats as decimal strings."""
    if isinstance(spec, TrendSpec):
        return {
            "type": "trend",
            "index": spec.index,
            "amplitude": encode_number(spec.amplitude),
            "exponent": encode_number(spec.exponent),
        }
    if isinstance(spec, SeasonalSpec):
        return {
            "type": "seasonal",
            "index": spec.index,
            "kind": spec.kind,
            "frequency": encode_number(spec.frequency),
            "phase": encode_number(spec.phase),
        }
    if isinstance(spec, WhiteNoiseSpec):
        return {"type": "white", "index": spec.index}
    if isinstance(spec, BrownianNoiseSpec):
        return {"type": "brownian", "index": spec.index}
    if isinstance(spec, ImpulseSpec):
        return {
            "type": "impulse",
            "index": spec.index,
            "centers": [encode_number(c) for c in spec.centers],
            "width": encode_number(spec.width),
            "amplitude": encode_number(spec.amplitude),
        }
    if isinstance(spec, DependentNoiseSpec):
        return {
            "type": "dependent",
            "index": spec.index,
            "kind": spec.kind,
            "sign": spec.sign,
            "modulator_ref": spec.modulator_ref,
        }
    raise ConfigError(f"cannot serialize component {spec!r}")


def spec_from_dict(data: dict) -> ComponentSpec:
    """Inverse of spec_to_dict."""
    kind = data.get("type")
    index = int(data["index"])
    if kind == "trend":
        return TrendSpec(
            index=index,
            amplitude=decode_number(str(data["amplitude"])),
            exponent=decode_number(str(data["exponent"])),
        )
    if kind == "seasonal":
        return SeasonalSpec(
            index=index,
            kind=str(data["kind"]),
            frequency=decode_number(str(data["frequency"])),
            phase=decode_number(str(data["phase"])),
        )
    if kind == "white":
        return WhiteNoiseSpec(index=index)
    if kind == "brownian":
        return BrownianNoiseSpec(index=index)
    if kind == "impulse":
        return ImpulseSpec(
            index=index,
            centers=tuple(decode_number(str(c)) for c in data["centers"]),
            width=decode_number(str(data["width"])),
            amplitude=decode_number(str(data["amplitude"])),
        )
    if kind == "dependent":
        ref = data.get("modulator_ref")
        return DependentNoiseSpec(
            index=index,
            kind=str(data["kind"]),
            sign=int(data["sign"]),
            modulator_ref=None if ref is None else str(ref),
        )
    raise ConfigError(f"unknown component type {kind!r}")


# -- recipe construction ----------------------------------------------------


def build_recipes(config: InstanceConfig) -> list[VariateRecipe]:
    """Sample the configured component census and distribute it.

    Deterministic in the config: component parameters come from per-component
    streams, attachment draws from one assignment stream, and per-variate
    weights and SNR from per-variate streams, so any part can be regenerated
    independently.
    """
    config.validate()
    census = config.resolved_census()
    root = StreamPath(master_seed=config.seed)
    n = config.n_samples
    v_count = config.n_variates

    trends = [
        sample_trend(
            derive(root.child("trend", i).child("params", 0)),
            n,
            config.exponent_range,
            index=i,
        )
        for i in range(census.trend)
    ]
    seasonals = [
        sample_seasonal(
            derive(root.child("seasonal", i).child("params", 0)),
            config.seasonal_kind,
            n,
            config.band,
            index=i,
        )
        for i in range(census.seasonal)
    ]
    # Noise is only materialized when it will be mixed in.
    noises: list[NoiseSpec] = []
    if math.isfinite(config.snr):
        for i in range(census.noise):
            noises.append(_sample_noise(config, root, i))

    astream = derive(root.child("assignment", 0))
    state = AssignmentState.fresh(v_count, config.penalty)
    signal_members: list[list[SignalSpec]] = [[] for _ in range(v_count)]
    noise_members: list[list[NoiseSpec]] = [[] for _ in range(v_count)]

    trend_cover = bool(noises) and config.noise_kind == "trend"
    _attach_family(
        trends, signal_members, census.share_range, state, astream,
        require_cover=trend_cover,
    )
    _attach_family(
        seasonals, signal_members, census.share_range, state, astream,
        require_cover=True,
    )
    _attach_family(
        noises, noise_members, census.share_range, state, astream,
        require_cover=bool(noises), eligible=_dependent_eligibility(config, signal_members),
    )
    _bind_modulators(noise_members, signal_members, astream)

    recipes = []
    for v in range(v_count):
        vpath = root.child("variate", v)
        vstream = derive(vpath)
        signal = tuple(signal_members[v])
        noise = tuple(noise_members[v])
        signal_weights = tuple(sample_weights(len(signal), vstream))
        noise_weights = tuple(sample_weights(len(noise), vstream)) if noise else ()
        snr = sample_snr(config.snr, config.sigma_snr, vstream)
        recipe = VariateRecipe(
            variate_id=v,
            signal_components=signal,
            noise_components=noise,
            signal_weights=signal_weights,
            noise_weights=noise_weights,
            snr=snr,
            stream_path=vpath,
        )
        recipe.validate()
        recipes.append(recipe)
    return recipes


def _sample_noise(config: InstanceConfig, root: StreamPath, index: int) -> NoiseSpec:
    kind = config.noise_kind
    if kind == "white":
        return WhiteNoiseSpec(index=index)
    if kind == "brownian":
        return BrownianNoiseSpec(index=index)
    params = derive(root.child("noise", index).child("params", 0))
    if kind == "impulse":
        return sample_impulse(params, config.n_samples, index=index)
    if kind in ("trend", "seasonal"):
        return DependentNoiseSpec(
            index=index, kind=kind, sign=sample_dependent_sign(params)
        )
    raise ConfigError(f"unknown noise kind {kind!r}")


def _dependent_eligibility(
    config: InstanceConfig, signal_members: list[list[SignalSpec]]
) -> set[int] | None:
    """Variates that may receive dependent noise, or None for no restriction."""
    if config.noise_kind == "trend":
        return {
            v for v, members in enumerate(signal_members)
            if any(isinstance(c, TrendSpec) for c in members)
        }
    if config.noise_kind == "seasonal":
        return {
            v for v, members in enumerate(signal_members)
            if any(isinstance(c, SeasonalSpec) for c in members)
        }
    return None


def _attach_family(
    specs: list,
    members: list[list],
    share_range: tuple[int, int],
    state: AssignmentState,
    stream: np.random.Generator,
    require_cover: bool,
    eligible: set[int] | None = None,
) -> None:
    """Attach every spec of one family to its share of distinct variates."""
    if not specs:
        return
    v_count = len(members)
    mults = _multiplicities(len(specs), share_range, stream, v_count if require_cover else 0)
    uncovered = set(range(v_count)) if require_cover else set()
    remaining = sum(mults)
    for spec, mult in zip(specs, mults):
        attached: set[int] = set()
        for _ in range(mult):
            force = require_cover and uncovered and remaining == len(uncovered)
            variate = _draw_variate(
                state, stream, attached, eligible, uncovered if force else None
            )
            attached.add(variate)
            members[variate].append(spec)
            state.counts[variate] += 1
            uncovered.discard(variate)
            remaining -= 1


def _multiplicities(
    count: int,
    share_range: tuple[int, int],
    stream: np.random.Generator,
    min_total: int,
) -> list[int]:
    """Per-spec attachment counts, raised as needed so coverage stays feasible."""
    lo, hi = share_range
    mults = [lo if lo == hi else int(stream.integers(lo, hi + 1)) for _ in range(count)]
    total = sum(mults)
    for i in range(count):
        if total >= min_total:
            break
        bump = min(hi - mults[i], min_total - total)
        mults[i] += bump
        total += bump
    if total < min_total:
        raise CensusError(
            f"{count} components sharing at most {hi} variates each cannot "
            f"cover {min_total} variates"
        )
    return mults


def _draw_variate(
    state: AssignmentState,
    stream: np.random.Generator,
    attached: set[int],
    eligible: set[int] | None,
    forced: set[int] | None,
) -> int:
    probs = selection_probabilities(state)
    if forced is not None:
        # Coverage deadline: renormalize over the still-uncovered variates.
        candidates = sorted(forced - attached)
        if eligible is not None:
            candidates = [v for v in candidates if v in eligible]
        if not candidates:
            raise CensusError("no eligible variate left for forced coverage")
        weights = probs[candidates]
        return int(stream.choice(candidates, p=weights / weights.sum()))
    for _ in range(MAX_ATTACH_RETRIES):
        variate = int(stream.choice(len(probs), p=probs))
        if variate in attached:
            continue
        if eligible is not None and variate not in eligible:
            continue
        return variate
    raise CensusError(
        f"could not place a component in {MAX_ATTACH_RETRIES} draws; "
        f"census is too tight for {len(probs)} variates"
    )


def _bind_modulators(
    noise_members: list[list[NoiseSpec]],
    signal_members: list[list[SignalSpec]],
    stream: np.random.Generator,
) -> None:
    """Bind each dependent-noise attachment to one matching signal component."""
    for variate, noise_list in enumerate(noise_members):
        for i, spec in enumerate(noise_list):
            if not isinstance(spec, DependentNoiseSpec):
                continue
            matching = [
                c for c in signal_members[variate]
                if (isinstance(c, TrendSpec) and spec.kind == "trend")
                or (isinstance(c, SeasonalSpec) and spec.kind == "seasonal")
            ]
            if not matching:
                raise CensusError(
                    f"variate {variate} received dependent noise but holds no "
                    f"{spec.kind} component"
                )
            choice = matching[int(stream.integers(len(matching)))]
            noise_list[i] = spec.bind(choice.component_id)
