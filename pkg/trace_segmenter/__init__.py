"""
Variance-based segmentation of multivariate time-series traces.
"""

from .core import (
    ConfigError,
    CostGuardError,
    DataError,
    Segmentation,
    SegmentationError,
    SegmentationResult,
    SignalMatrix,
    TraceSegmenterError,
    uniform_presegmentation,
    validate_segmentation,
)
from .preprocess import PreprocessConfig, PreprocessReport, offset_reduce, peak_to_valley_filter, preprocess
from .segmenter import GreedyConfig, brute_force_segment, greedy_segment, local_pair_cost
from .variance import (
    PrefixStats,
    build_prefix_stats,
    matrix_variance,
    row_variance,
    segment_variance_fast,
    segmented_variance,
    within_segment_sum_of_squares,
)

__version__ = "0.1.0"
__all__ = [
    "ConfigError",
    "CostGuardError",
    "DataError",
    "Segmentation",
    "SegmentationError",
    "SegmentationResult",
    "SignalMatrix",
    "TraceSegmenterError",
    "uniform_presegmentation",
    "validate_segmentation",
    "PreprocessConfig",
    "PreprocessReport",
    "offset_reduce",
    "peak_to_valley_filter",
    "preprocess",
    "GreedyConfig",
    "brute_force_segment",
    "greedy_segment",
    "local_pair_cost",
    "PrefixStats",
    "build_prefix_stats",
    "matrix_variance",
    "row_variance",
    "segment_variance_fast",
    "segmented_variance",
    "within_segment_sum_of_squares",
]
