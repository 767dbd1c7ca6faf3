"""
Tests for the synthetic signal generator.
"""

import numpy as np
import pytest

from trace_segmenter.core import DataError, Segmentation, SegmentationError
from trace_segmenter.synth import (
    DATASET_ENV_VAR,
    PAPER_LIKE_BOUNDARIES,
    SynthSpec,
    generate,
    load_reference_dataset,
    paper_like_test_signal,
    random_step_spec,
    write_fixture,
)
from trace_segmenter.utils.file_utils import load_csv
from trace_segmenter.variance import segmented_variance


def test_generate_noiseless_levels():
    spec = SynthSpec(
        n=6,
        m_rows=2,
        true_boundaries=Segmentation((2, 5), 6),
        level_matrix=np.array([[1, 2, 3], [4, 5, 6]]),
    )
    M = generate(spec)
    np.testing.assert_array_equal(M.values, [[1, 1, 2, 2, 2, 3], [4, 4, 5, 5, 5, 6]])
    assert segmented_variance(M, spec.true_boundaries) == 0


def test_generate_rejects_bad_specs():
    with pytest.raises(DataError, match="level_matrix shape"):
        generate(SynthSpec(6, 1, Segmentation((3,), 6), np.array([[1, 2, 3]])))
    with pytest.raises(SegmentationError):
        generate(SynthSpec(6, 1, Segmentation((6,), 6), np.array([[1, 2]])))
    with pytest.raises(DataError, match="noise_sigma"):
        generate(SynthSpec(6, 1, Segmentation((3,), 6), np.array([[1, 2]]), noise_sigma=-1))


def test_generate_is_seed_deterministic():
    spec = random_step_spec(seed=3, n=40, m_rows=3, s=4, noise_sigma=0.5)
    first = generate(spec)
    second = generate(spec)
    np.testing.assert_array_equal(first.values, second.values)

    other = generate(random_step_spec(seed=4, n=40, m_rows=3, s=4, noise_sigma=0.5))
    assert not np.array_equal(first.values, other.values)


def test_random_step_spec_shape():
    for seed in range(50):
        spec = random_step_spec(seed, n=30, m_rows=3, s=4)
        spec.true_boundaries.check(30)
        assert spec.true_boundaries.num_segments == 4
        assert spec.level_matrix.shape == (3, 4)
        # Adjacent levels alternate between the two bands
        assert np.all(np.abs(np.diff(spec.level_matrix, axis=1)) >= 9)


def test_noiseless_truth_has_zero_objective():
    for seed in range(20):
        spec = random_step_spec(seed, n=36, m_rows=2, s=3)
        M = generate(spec)
        assert segmented_variance(M, spec.true_boundaries) == pytest.approx(0, abs=1e-24)


def test_paper_like_test_signal():
    M = paper_like_test_signal()
    assert (M.n_rows, M.n_samples) == (1, 100)
    assert M.row_labels == ("test_signal",)

    clean = paper_like_test_signal(noise_sigma=0)
    truth = Segmentation(PAPER_LIKE_BOUNDARIES, 100)
    assert segmented_variance(clean, truth) == pytest.approx(0, abs=1e-24)
    np.testing.assert_array_equal(paper_like_test_signal().values, M.values)


def test_write_fixture_reads_back(tmp_path):
    M = generate(random_step_spec(seed=1, n=20, m_rows=2, s=3, noise_sigma=1.0))
    path = tmp_path / "fixture.csv"
    write_fixture(M, str(path))
    np.testing.assert_array_equal(load_csv(str(path)).values, M.values)


def test_load_reference_dataset_absent(monkeypatch, tmp_path):
    monkeypatch.delenv(DATASET_ENV_VAR, raising=False)
    assert load_reference_dataset() is None

    monkeypatch.setenv(DATASET_ENV_VAR, str(tmp_path / "missing.csv"))
    assert load_reference_dataset() is None


def test_load_reference_dataset_from_env(monkeypatch, tmp_path):
    path = tmp_path / "traces.csv"
    path.write_text("1,2,3\n4,5,6\n")
    monkeypatch.setenv(DATASET_ENV_VAR, str(path))
    M = load_reference_dataset()
    assert (M.n_rows, M.n_samples) == (2, 3)
