"""
Core domain types for the trace segmentation package.

Indices are 0-based throughout. A segmentation over ``n`` samples is a list of
interior boundaries ``x_1 < ... < x_{s-1}``; segment ``h`` covers the half-open
range ``[x_{h-1}, x_h)`` with ``x_0 = 0`` and ``x_s = n``.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger("trace_segmenter.core")


class TraceSegmenterError(Exception):
    """Base class for all package errors."""
    pass


class SegmentationError(TraceSegmenterError, ValueError):
    """Raised when a segmentation or segment count is invalid."""
    pass


class DataError(TraceSegmenterError, ValueError):
    """Raised when input data is malformed."""
    pass


class ConfigError(TraceSegmenterError, ValueError):
    """Raised when a configuration value is invalid."""
    pass


class CostGuardError(TraceSegmenterError):
    """Raised when a brute-force run would evaluate too many combinations."""

    def __init__(self, combinations: int, limit: int):
        self.combinations = combinations
        self.limit = limit
        super().__init__(
            f"brute force would evaluate {combinations} combinations "
            f"(limit {limit}); pass force to run anyway"
        )


@dataclass(frozen=True)
class SignalMatrix:
    """
    Dense trace matrix: rows are signals (processes), columns are samples.

    Values are stored as a read-only float64 copy.
    """

    values: np.ndarray
    row_labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim == 1:
            values = values.reshape(1, -1)
        if values.ndim != 2:
            raise DataError(f"signal matrix must be 2-D, got {values.ndim} dimensions")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise DataError(f"signal matrix must be non-empty, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise DataError(f"non-finite value at row {bad[0]}, sample {bad[1]}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

        if self.row_labels is not None:
            labels = tuple(str(label) for label in self.row_labels)
            if len(labels) != values.shape[0]:
                raise DataError(
                    f"expected {values.shape[0]} row labels, got {len(labels)}"
                )
            object.__setattr__(self, "row_labels", labels)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]

    def take_rows(self, indices: Sequence[int]) -> "SignalMatrix":
        """Return the sub-matrix of the given rows, in the given order."""
        indices = list(indices)
        labels = None
        if self.row_labels is not None:
            labels = tuple(self.row_labels[i] for i in indices)
        return SignalMatrix(self.values[indices, :], labels)


@dataclass(frozen=True)
class Segmentation:
    """Interior boundaries over ``n`` samples.

    Construction does not validate; use :func:`validate_segmentation` or
    :meth:`check`.
    """

    boundaries: Tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "boundaries", tuple(int(b) for b in self.boundaries))
        object.__setattr__(self, "n", int(self.n))

    @property
    def num_segments(self) -> int:
        return len(self.boundaries) + 1

    def edges(self) -> List[int]:
        """Boundaries padded with 0 and n."""
        return [0, *self.boundaries, self.n]

    def segments(self) -> List[Tuple[int, int]]:
        """Half-open (lo, hi) ranges, left to right."""
        edges = self.edges()
        return list(zip(edges[:-1], edges[1:]))

    def lengths(self) -> List[int]:
        return [hi - lo for lo, hi in self.segments()]

    def check(self, n: Optional[int] = None) -> None:
        """Raise SegmentationError if the segmentation is invalid for ``n``."""
        violation = validate_segmentation(self, self.n if n is None else n)
        if violation is not None:
            raise SegmentationError(violation)

    def to_dict(self) -> Dict:
        return {"boundaries": list(self.boundaries), "n": self.n}

    @classmethod
    def from_dict(cls, data: Dict) -> "Segmentation":
        try:
            return cls(tuple(data["boundaries"]), data["n"])
        except (KeyError, TypeError, ValueError) as e:
            raise SegmentationError(f"cannot parse segmentation: {e}") from e


@dataclass(frozen=True)
class SegmentationResult:
    """Outcome of one optimizer run."""

    segmentation: Segmentation
    objective: float
    iterations: int
    objective_trace: Tuple[float, ...] = ()
    elapsed: float = 0.0
    algorithm: str = ""
    initial_objective: float = field(default=0.0)


def validate_segmentation(seg: Segmentation, n: int) -> Optional[str]:
    """
    Check a segmentation against a sample count.

    Args:
        seg: Segmentation to check
        n: Number of samples the boundaries must refer to

    Returns:
        None if valid, otherwise a description of the first violated rule
    """
    if n < 1:
        return "sample count must be at least 1"
    if seg.n != n:
        return f"sample count mismatch: segmentation has {seg.n}, expected {n}"

    previous = 0
    for boundary in seg.boundaries:
        if boundary < 1 or boundary > n - 1:
            return f"boundary {boundary} out of range [1, n-1] for n={n}"
        if boundary <= previous:
            return "boundaries not strictly increasing"
        previous = boundary
    return None


def uniform_presegmentation(n: int, s: int) -> Segmentation:
    """
    Split ``n`` samples into ``s`` segments whose lengths differ by at most one.

    Boundary ``h`` sits at ``round(h * n / s)``, with halves rounded up.
    """
    if s < 1:
        raise SegmentationError(f"segment count must be at least 1, got {s}")
    if s > n:
        raise SegmentationError(f"more segments than samples ({s} > {n})")

    # Integer form of floor(h*n/s + 1/2) avoids float rounding at exact halves
    boundaries = tuple((2 * h * n + s) // (2 * s) for h in range(1, s))
    return Segmentation(boundaries, n)
