"""End-to-end benchmark protocol on small instances."""

import numpy as np
import pytest

from synthbench.bench import (
    evaluate_predictions,
    fit_baseline,
    pooled_training_chunks,
    predict_windows,
    run_benchmark,
    window_span,
    window_tensors,
)
from synthbench.dataset import windows
from synthbench.errors import ConfigError


def test_window_span_partitions(small_instance):
    spans = [window_span(small_instance, s) for s in ("train", "val", "test")]
    assert spans[0][0] == 0
    assert spans[2][1] == small_instance.config.n_samples
    assert spans[0][1] == spans[1][0] and spans[1][1] == spans[2][0]


def test_window_span_rejects_unknown(small_instance):
    with pytest.raises(ConfigError):
        window_span(small_instance, "dev")


def test_pooled_chunks_shapes(small_instance):
    chunks = list(pooled_training_chunks(small_instance, 48, 48))
    assert len(chunks) == small_instance.config.n_variates
    lo, hi = window_span(small_instance, "train")
    expected = hi - lo - 48 - 48 + 1
    for inputs, targets in chunks:
        assert inputs.shape == (expected, 48)
        assert targets.shape == (expected, 48)


def test_pooled_chunks_content_matches_matrix(small_instance):
    inputs, targets = next(iter(pooled_training_chunks(small_instance, 48, 48)))
    col = small_instance.mixed[:, 0]
    assert np.array_equal(inputs[0], col[0:48])
    assert np.array_equal(targets[0], col[48:96])
    assert np.array_equal(inputs[7], col[7:55])


def test_window_tensors_match_index_pairs(small_instance):
    span = window_span(small_instance, "test")
    inputs, targets = window_tensors(small_instance.clean, span, 48, 48, 48)
    pairs = windows(span, 48, 48, 48)
    assert inputs.shape == (len(pairs), 4, 48)
    (in_lo, in_hi), (out_lo, out_hi) = pairs[0]
    assert np.array_equal(inputs[0].T, small_instance.clean[in_lo:in_hi])
    assert np.array_equal(targets[0].T, small_instance.clean[out_lo:out_hi])


def test_window_tensors_empty_span_rejected(small_instance):
    with pytest.raises(ConfigError):
        window_tensors(small_instance.clean, (0, 10), 48, 48, 1)


def test_predict_windows_shape(small_instance):
    model = fit_baseline(small_instance)
    preds = predict_windows(model, small_instance)
    span = window_span(small_instance, "test")
    n_expected = len(windows(span, 48, 48, 48))
    assert preds.shape == (n_expected, 4, 48)


def test_evaluate_shape_mismatch_rejected(small_instance):
    model = fit_baseline(small_instance)
    preds = predict_windows(model, small_instance)
    with pytest.raises(ConfigError, match="does not match"):
        evaluate_predictions(small_instance, preds[:-1])


def test_run_benchmark_report_fields(small_instance):
    report, model, preds = run_benchmark(small_instance)
    assert report.mse_clean > 0
    assert report.mse_noisy > 0
    assert report.per_step_mse.shape == (48,)
    assert report.spectral_error is not None
    assert report.metadata["model"] == "linear-baseline"
    assert report.metadata["split"] == "test"
    assert report.metadata["cell_id"] == small_instance.config.cell_id
    assert report.metadata["n_windows"] == preds.shape[0]
    assert model.fitted


def test_run_benchmark_deterministic(small_instance):
    a, _, _ = run_benchmark(small_instance)
    b, _, _ = run_benchmark(small_instance)
    assert a.mse_clean == b.mse_clean
    assert np.array_equal(a.per_step_mse, b.per_step_mse)
    assert np.array_equal(a.spectral_error, b.spectral_error)


def test_overlapping_stride_drops_spectral(small_instance):
    model = fit_baseline(small_instance)
    preds = predict_windows(model, small_instance, stride=1)
    report = evaluate_predictions(small_instance, preds, stride=1)
    assert report.spectral_error is None
    assert report.metadata["stride"] == 1


def test_noise_free_benchmark_recovers_signal(noise_free_instance):
    # Mixed == clean here, so the in-band linear map should be accurate and
    # the two MSE flavors identical.
    report, _, _ = run_benchmark(noise_free_instance)
    assert report.mse_clean == report.mse_noisy
    assert report.mse_clean < 0.05


def test_perfect_predictions_score_zero(small_instance):
    span = window_span(small_instance, "test")
    _, clean_targets = window_tensors(small_instance.clean, span, 48, 48, 48)
    report = evaluate_predictions(small_instance, clean_targets.copy())
    assert report.mse_clean == 0.0
    assert np.all(report.spectral_error == 0.0)
    assert np.all(report.per_step_mse == 0.0)


def test_noisy_targets_score_worse_than_clean(small_instance):
    # Predicting the clean signal exactly still pays the noise floor on the
    # mixed metric.
    span = window_span(small_instance, "test")
    _, clean_targets = window_tensors(small_instance.clean, span, 48, 48, 48)
    report = evaluate_predictions(small_instance, clean_targets.copy())
    assert report.mse_noisy > 0.0
