"""Shared fixtures: small instances that generate in milliseconds."""

import math

import pytest

from synthbench.config import ComponentCensus, InstanceConfig
from synthbench.dataset import generate_instance
from synthbench.prng import StreamPath, derive


@pytest.fixture
def stream():
    return derive(StreamPath(master_seed=7).child("test", 0))


@pytest.fixture
def small_config():
    return InstanceConfig(
        n_samples=2000,
        n_variates=4,
        seasonal_kind="sine",
        band=(20, 40),
        noise_kind="white",
        snr=10.0,
        lookback=48,
        horizon=48,
        seed=0,
    )


@pytest.fixture
def small_instance(small_config):
    return generate_instance(small_config)


@pytest.fixture
def noise_free_config():
    return InstanceConfig(
        n_samples=2000,
        n_variates=4,
        seasonal_kind="sine",
        band=(20, 40),
        noise_kind=None,
        snr=math.inf,
        lookback=48,
        horizon=48,
        seed=0,
    )


@pytest.fixture
def noise_free_instance(noise_free_config):
    return generate_instance(noise_free_config)


@pytest.fixture
def single_tone_config():
    return InstanceConfig(
        n_samples=2000,
        n_variates=3,
        seasonal_kind="sine",
        band=(100, 100),
        noise_kind=None,
        snr=math.inf,
        lookback=48,
        horizon=48,
        seed=1,
        census=ComponentCensus(trend=0, seasonal=1, noise=0, share_range=(3, 3)),
    )
