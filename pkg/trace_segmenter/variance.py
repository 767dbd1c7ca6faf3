"""
Variance kernels for the segmentation objective.

The objective is the sum, over segments and rows, of the population variance of
each row restricted to the segment. Two paths compute it: a two-pass naive path
(the reference) and a prefix-sum path answering any segment query in O(1).
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Union

import numpy as np

from .core import DataError, SegmentationError, Segmentation, SignalMatrix, validate_segmentation

logger = logging.getLogger("trace_segmenter.variance")

IndexLike = Union[int, np.ndarray]


@dataclass(frozen=True)
class PrefixStats:
    """
    Per-row cumulative sums and sums of squares, each of shape (rows, n + 1).

    ``cum_sum``/``cum_sq`` accumulate the raw values. Range queries use
    ``centered_sum``/``centered_sq``, the same sums taken over each row minus
    its mean (``offsets``), so a large constant level does not cancel away the
    variance.
    """

    cum_sum: np.ndarray
    cum_sq: np.ndarray
    offsets: np.ndarray
    centered_sum: np.ndarray
    centered_sq: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.cum_sum.shape[0]

    @property
    def n_samples(self) -> int:
        return self.cum_sum.shape[1] - 1


def row_variance(row) -> float:
    """Population variance (denominator = length) of a 1-D sequence."""
    row = np.asarray(row, dtype=np.float64)
    if row.size == 0:
        raise DataError("empty input")
    return float(np.mean((row - row.mean()) ** 2))


def matrix_variance(M: SignalMatrix) -> float:
    """Sum over rows of each row's population variance."""
    values = M.values
    means = values.mean(axis=1, keepdims=True)
    return float(np.sum(np.mean((values - means) ** 2, axis=1)))


def segmented_variance(M: SignalMatrix, seg: Segmentation) -> float:
    """
    Total segmented variance of a matrix, computed two-pass per segment.

    Args:
        M: Signal matrix
        seg: Segmentation valid for M's sample count

    Returns:
        Sum over segments and rows of the within-segment population variance

    Raises:
        SegmentationError: If the segmentation is invalid for M
    """
    violation = validate_segmentation(seg, M.n_samples)
    if violation is not None:
        raise SegmentationError(violation)

    total = 0.0
    for lo, hi in seg.segments():
        block = M.values[:, lo:hi]
        means = block.mean(axis=1, keepdims=True)
        total += float(np.sum(np.mean((block - means) ** 2, axis=1)))
    return total


def within_segment_sum_of_squares(M: SignalMatrix, seg: Segmentation) -> float:
    """
    Count-weighted counterpart of :func:`segmented_variance`: the sum of squared
    deviations from each segment's row means.

    Unlike the objective, this never increases when a segment is split.
    """
    seg.check(M.n_samples)
    total = 0.0
    for lo, hi in seg.segments():
        block = M.values[:, lo:hi]
        total += float(np.sum((block - block.mean(axis=1, keepdims=True)) ** 2))
    return total


def segment_profile(M: SignalMatrix, seg: Segmentation) -> List[Dict]:
    """Per-segment row means and variances, for reporting."""
    seg.check(M.n_samples)
    profile = []
    for h, (lo, hi) in enumerate(seg.segments()):
        block = M.values[:, lo:hi]
        means = block.mean(axis=1)
        variances = np.mean((block - means[:, None]) ** 2, axis=1)
        profile.append({
            "index": h,
            "start": lo,
            "stop": hi,
            "length": hi - lo,
            "means": means.tolist(),
            "variances": variances.tolist(),
        })
    return profile


def _prefix(values: np.ndarray) -> np.ndarray:
    zeros = np.zeros((values.shape[0], 1))
    out = np.concatenate([zeros, np.cumsum(values, axis=1)], axis=1)
    out.setflags(write=False)
    return out


def build_prefix_stats(M: SignalMatrix) -> PrefixStats:
    """Accumulate per-row prefix sums, raw and mean-centered, with a leading zero column."""
    values = M.values
    offsets = values.mean(axis=1)
    centered = values - offsets[:, None]
    offsets.setflags(write=False)
    return PrefixStats(
        cum_sum=_prefix(values),
        cum_sq=_prefix(values * values),
        offsets=offsets,
        centered_sum=_prefix(centered),
        centered_sq=_prefix(centered * centered),
    )


def _range_variance(cum_sum: np.ndarray, cum_sq: np.ndarray, lo: IndexLike, hi: IndexLike) -> np.ndarray:
    # Σx² − (Σx)²/n_h can dip below zero through cancellation; clamp it
    lo, hi = np.broadcast_arrays(np.asarray(lo), np.asarray(hi))
    count = hi - lo
    total = cum_sum[..., hi] - cum_sum[..., lo]
    total_sq = cum_sq[..., hi] - cum_sq[..., lo]
    return np.maximum((total_sq - total * total / count) / count, 0.0)


def segment_variance_fast(ps: PrefixStats, row: int, lo: int, hi: int) -> float:
    """
    Population variance of ``values[row][lo:hi]`` from prefix stats.

    Raises:
        SegmentationError: If the range is empty or out of bounds
    """
    if lo >= hi:
        raise SegmentationError(f"empty segment query [{lo}, {hi})")
    if lo < 0 or hi > ps.n_samples:
        raise SegmentationError(f"segment query [{lo}, {hi}) outside [0, {ps.n_samples}]")
    if row < 0 or row >= ps.n_rows:
        raise SegmentationError(f"row {row} outside [0, {ps.n_rows})")
    return float(_range_variance(ps.centered_sum[row], ps.centered_sq[row], lo, hi))


def segment_cost(ps: PrefixStats, lo: IndexLike, hi: IndexLike) -> Union[float, np.ndarray]:
    """
    Sum over rows of the population variance on ``[lo, hi)``.

    ``lo`` and ``hi`` may be integer arrays that broadcast together; the result
    then has their broadcast shape. Bounds are not checked here.
    """
    cost = _range_variance(ps.centered_sum, ps.centered_sq, lo, hi).sum(axis=0)
    if np.ndim(cost) == 0:
        return float(cost)
    return cost


def segment_cost_table(ps: PrefixStats) -> np.ndarray:
    """
    Table ``T[lo, hi]`` of :func:`segment_cost` for every ``0 <= lo < hi <= n``.

    Entries with ``lo >= hi`` are ``inf``. Filled one ``lo`` at a time, so
    memory stays at (n + 1)² floats plus one row of temporaries.
    """
    n = ps.n_samples
    table = np.full((n + 1, n + 1), np.inf)
    for lo in range(n):
        table[lo, lo + 1:] = segment_cost(ps, lo, np.arange(lo + 1, n + 1))
    logger.debug(f"Built {n + 1}x{n + 1} segment cost table over {ps.n_rows} rows")
    return table
