"""Deterministic, hierarchically derivable random streams.

Every random object in a dataset instance (a component, a variate, the
assignment process) draws from its own stream, derived from the master seed
and a label path such as ``("variate", 17)`` or ``("component", 2)``.
Derivation hashes the path into the 128-bit key of a counter-based Philox
generator, so streams are independent of generation order and can be handed
to any worker. Equal paths always reproduce the same draws.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateSeriesError

__all__ = [
    "StreamPath",
    "derive",
    "gauss",
    "uniform",
    "truncated_gauss",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class StreamPath:
    """Address of one random stream: master seed plus ordered labels."""

    master_seed: int
    labels: tuple[tuple[str, int], ...] = ()

    def child(self, tag: str, index: int) -> "StreamPath":
        """Extend the path by one ``(tag, index)`` label."""
        return StreamPath(self.master_seed, self.labels + ((tag, int(index)),))

    def key(self) -> np.ndarray:
        """128-bit Philox key: SHA-256 over the canonical path encoding."""
        h = hashlib.sha256()
        h.update(struct.pack("<Q", self.master_seed & _MASK64))
        for tag, index in self.labels:
            raw = tag.encode("utf-8")
            h.update(struct.pack("<I", len(raw)))
            h.update(raw)
            h.update(struct.pack("<q", index))
        lo, hi = struct.unpack("<QQ", h.digest()[:16])
        return np.array([lo, hi], dtype=np.uint64)

    def to_dict(self) -> dict:
        return {
            "master_seed": str(self.master_seed),
            "labels": [[tag, str(index)] for tag, index in self.labels],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StreamPath":
        labels = tuple((tag, int(index)) for tag, index in data["labels"])
        return cls(int(data["master_seed"]), labels)


def derive(path: StreamPath) -> np.random.Generator:
    """Return the stream addressed by ``path``.

    Output is a pure function of ``(master_seed, labels)``; sibling paths
    produce statistically independent streams.
    """
    if not path.labels:
        raise ConfigError("stream path needs at least one label")
    return np.random.Generator(np.random.Philox(key=path.key()))


def gauss(stream: np.random.Generator) -> float:
    """One standard normal draw."""
    return float(stream.standard_normal())


def uniform(stream: np.random.Generator, lo: float, hi: float) -> float:
    """One U(lo, hi) draw."""
    if not lo < hi:
        raise ConfigError(f"uniform bounds must satisfy lo < hi, got [{lo}, {hi}]")
    return float(stream.uniform(lo, hi))


def truncated_gauss(
    stream: np.random.Generator,
    mu: float,
    sigma: float,
    lo: float,
    hi: float,
    max_rejects: int = 10_000,
) -> float:
    """N(mu, sigma^2) restricted to [lo, hi] by rejection sampling.

    Raises DegenerateSeriesError after ``max_rejects`` rejected draws, which
    signals a band with effectively no probability mass.
    """
    if sigma <= 0:
        raise ConfigError(f"sigma must be positive, got {sigma}")
    if not lo < hi:
        raise ConfigError(f"truncation bounds must satisfy lo < hi, got [{lo}, {hi}]")
    for _ in range(max_rejects):
        draw = mu + sigma * stream.standard_normal()
        if lo <= draw <= hi:
            return float(draw)
    raise DegenerateSeriesError(
        f"truncated_gauss(mu={mu}, sigma={sigma}) rejected {max_rejects} draws "
        f"for band [{lo}, {hi}]; the band is mis-specified"
    )
