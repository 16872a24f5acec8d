"""Stream derivation: replay, independence, and distribution shape."""

import numpy as np
import pytest

from synthbench.errors import ConfigError, DegenerateSeriesError
from synthbench.prng import StreamPath, derive, gauss, truncated_gauss, uniform


def test_same_path_replays_identically():
    path = StreamPath(master_seed=1).child("variate", 0)
    a = derive(path).standard_normal(1000)
    b = derive(path).standard_normal(1000)
    assert np.array_equal(a, b)


def test_sibling_paths_differ():
    a = derive(StreamPath(master_seed=1).child("variate", 0)).standard_normal(8)
    b = derive(StreamPath(master_seed=1).child("variate", 1)).standard_normal(8)
    assert not np.array_equal(a, b)


def test_different_seeds_differ():
    a = derive(StreamPath(master_seed=1).child("variate", 0)).standard_normal(8)
    b = derive(StreamPath(master_seed=2).child("variate", 0)).standard_normal(8)
    assert not np.array_equal(a, b)


def test_tag_and_index_both_matter():
    base = StreamPath(master_seed=3)
    a = derive(base.child("noise", 1)).standard_normal(8)
    b = derive(base.child("trend", 1)).standard_normal(8)
    c = derive(base.child("noise", 2)).standard_normal(8)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_nested_children_are_order_independent():
    # Deriving a child stream never touches the parent's state.
    parent = StreamPath(master_seed=9).child("variate", 3)
    first = derive(parent.child("params", 0)).standard_normal(4)
    derive(parent).standard_normal(100)
    second = derive(parent.child("params", 0)).standard_normal(4)
    assert np.array_equal(first, second)


def test_empty_labels_rejected():
    with pytest.raises(ConfigError):
        derive(StreamPath(master_seed=1))


def test_path_serialization_round_trip():
    path = StreamPath(master_seed=2**60).child("variate", 11).child("params", 0)
    back = StreamPath.from_dict(path.to_dict())
    assert back == path
    assert np.array_equal(
        derive(back).standard_normal(16), derive(path).standard_normal(16)
    )


def test_gauss_sample_statistics(stream):
    draws = np.array([gauss(stream) for _ in range(10_000)])
    big = stream.standard_normal(1_000_000)
    assert abs(big.mean()) < 0.01
    assert abs(big.var() - 1.0) < 0.01
    assert abs(draws.mean()) < 0.05


def test_uniform_bounds_and_mean(stream):
    draws = np.array([uniform(stream, 2.0, 6.0) for _ in range(20_000)])
    assert draws.min() >= 2.0
    assert draws.max() <= 6.0
    assert abs(draws.mean() - 4.0) < 0.05


def test_uniform_rejects_bad_interval(stream):
    with pytest.raises(ConfigError):
        uniform(stream, 1.0, 1.0)


def test_truncated_gauss_stays_in_bounds(stream):
    draws = [truncated_gauss(stream, 0.0, 1.0, 0.0, 0.5) for _ in range(5000)]
    assert min(draws) >= 0.0
    assert max(draws) <= 0.5


def test_truncated_gauss_nonnegative_half_line(stream):
    draws = [truncated_gauss(stream, 0.0, 1.0, 0.0, 50.0) for _ in range(2000)]
    assert min(draws) >= 0.0


def test_truncated_gauss_exhaustion(stream):
    # Band 40 sigma away from the mean has essentially no mass.
    with pytest.raises(DegenerateSeriesError):
        truncated_gauss(stream, 0.0, 1.0, 40.0, 41.0, max_rejects=50)


def test_truncated_gauss_validates_params(stream):
    with pytest.raises(ConfigError):
        truncated_gauss(stream, 0.0, -1.0, 0.0, 1.0)
    with pytest.raises(ConfigError):
        truncated_gauss(stream, 0.0, 1.0, 2.0, 1.0)
