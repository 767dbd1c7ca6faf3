"""
Tests for offset reduction and peak-to-valley filtering.
"""

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from trace_segmenter.core import ConfigError, DataError, SignalMatrix
from trace_segmenter.preprocess import (
    PreprocessConfig,
    offset_reduce,
    peak_to_valley_filter,
    preprocess,
)

# Peak-to-valley values 10, 7, 5, 1
PTV_FIXTURE = SignalMatrix([[0, 10], [2, 9], [1, 6], [4, 5]], ("a", "b", "c", "d"))

finite_rows = arrays(
    np.float64,
    st.tuples(st.integers(1, 5), st.integers(1, 12)),
    elements=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
)
integer_rows = arrays(
    np.float64,
    st.tuples(st.integers(1, 5), st.integers(2, 12)),
    elements=st.integers(-1000, 1000).map(float),
)


def test_offset_reduce_example():
    reduced, offsets = offset_reduce(SignalMatrix([[3, 5, 4], [-1, -1, 2]]))
    np.testing.assert_array_equal(reduced.values, [[0, 2, 1], [0, 0, 3]])
    np.testing.assert_array_equal(offsets, [3, -1])


@settings(max_examples=100, deadline=None)
@given(finite_rows)
def test_offset_reduce_row_minima_are_zero(values):
    reduced, offsets = offset_reduce(SignalMatrix(values))
    np.testing.assert_allclose(reduced.values.min(axis=1), 0, atol=1e-12)
    np.testing.assert_allclose(reduced.values + offsets[:, None], values, rtol=1e-12, atol=1e-6)


def test_ptv_fixture_keeps_top_rows():
    filtered, report = peak_to_valley_filter(PTV_FIXTURE, PreprocessConfig(ptv_fraction=0.6))
    assert report.kept_rows == (0, 1)
    assert report.ptv == (10, 7, 5, 1)
    assert report.threshold == pytest.approx(6)
    assert filtered.row_labels == ("a", "b")
    # Offsets restored by default
    np.testing.assert_array_equal(filtered.values, [[0, 10], [2, 9]])


def test_ptv_without_restoring_offsets():
    cfg = PreprocessConfig(ptv_fraction=0.6, restore_offsets=False)
    filtered, report = peak_to_valley_filter(PTV_FIXTURE, cfg)
    np.testing.assert_array_equal(filtered.values, [[0, 10], [0, 7]])
    assert report.offsets == (0, 2, 1, 4)


def test_ptv_fraction_one_keeps_maximum():
    """Nothing exceeds 100% of the maximum, but the maximum row stays."""
    filtered, report = peak_to_valley_filter(PTV_FIXTURE, PreprocessConfig(ptv_fraction=1.0))
    assert report.kept_rows == (0,)
    assert filtered.n_rows == 1


def test_ptv_all_constant_rows():
    with pytest.raises(DataError, match="no dynamic rows"):
        peak_to_valley_filter(SignalMatrix(np.ones((3, 5))), PreprocessConfig())


def test_ptv_keeps_row_order():
    M = SignalMatrix([[0, 1], [0, 9], [0, 2], [0, 10]])
    filtered, report = peak_to_valley_filter(M, PreprocessConfig(ptv_fraction=0.5))
    assert report.kept_rows == (1, 3)
    np.testing.assert_array_equal(filtered.values, [[0, 9], [0, 10]])


@settings(max_examples=100, deadline=None)
@given(integer_rows, st.data())
def test_ptv_selection_is_shift_invariant(values, data):
    """Adding per-row constants never changes which rows are kept."""
    assume(np.any(np.ptp(values, axis=1) > 0))
    # Integer data and shifts keep every ptv value exact
    shifts = data.draw(arrays(np.float64, values.shape[0],
                              elements=st.integers(-1000, 1000).map(float)))
    cfg = PreprocessConfig(ptv_fraction=0.6)
    _, report = peak_to_valley_filter(SignalMatrix(values), cfg)
    _, shifted_report = peak_to_valley_filter(SignalMatrix(values + shifts[:, None]), cfg)
    assert report.kept_rows == shifted_report.kept_rows
    assert report.ptv == shifted_report.ptv


def test_ptv_selection_shift_invariance_on_fixture():
    rng = np.random.default_rng(0)
    for _ in range(50):
        shifts = rng.integers(-100, 100, size=4).astype(float)
        shifted = SignalMatrix(PTV_FIXTURE.values + shifts[:, None])
        _, report = peak_to_valley_filter(shifted, PreprocessConfig(ptv_fraction=0.6))
        assert report.kept_rows == (0, 1)


def test_preprocess_config_validation():
    for fraction in (0, -0.1, 1.5):
        with pytest.raises(ConfigError):
            PreprocessConfig(ptv_fraction=fraction)


def test_preprocess_logs_survivors(caplog):
    with caplog.at_level("INFO", logger="trace_segmenter.preprocess"):
        filtered, report = preprocess(PTV_FIXTURE, PreprocessConfig())
    assert filtered.n_rows == 2
    assert "Out of 4 processes 2 are left" in caplog.text
    assert report.to_dict()["kept_rows"] == [0, 1]


@settings(max_examples=100, deadline=None)
@given(integer_rows, st.booleans())
def test_ptv_filter_is_idempotent(values, restore_offsets):
    """Filtering the filtered matrix again keeps every row."""
    assume(np.any(np.ptp(values, axis=1) > 0))
    cfg = PreprocessConfig(ptv_fraction=0.6, restore_offsets=restore_offsets)
    filtered, _ = peak_to_valley_filter(SignalMatrix(values), cfg)
    refiltered, report = peak_to_valley_filter(filtered, cfg)
    assert report.kept_rows == tuple(range(filtered.n_rows))
    np.testing.assert_array_equal(refiltered.values, filtered.values)


@settings(max_examples=100, deadline=None)
@given(integer_rows)
def test_offset_reduction_does_not_change_selection(values):
    assume(np.any(np.ptp(values, axis=1) > 0))
    cfg = PreprocessConfig(ptv_fraction=0.6)
    reduced, _ = offset_reduce(SignalMatrix(values))
    _, report = peak_to_valley_filter(SignalMatrix(values), cfg)
    _, reduced_report = peak_to_valley_filter(reduced, cfg)
    assert reduced_report.kept_rows == report.kept_rows
