"""
Data preparation: per-row offset reduction and peak-to-valley filtering.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import ConfigError, DataError, SignalMatrix

logger = logging.getLogger("trace_segmenter.preprocess")


@dataclass(frozen=True)
class PreprocessConfig:
    """
    Settings for the filtering step.

    Attributes:
        ptv_fraction: Fraction of the largest peak-to-valley value a row must exceed
        restore_offsets: Return kept rows at their original signal range
    """

    ptv_fraction: float = 0.6
    restore_offsets: bool = True

    def __post_init__(self):
        if not 0 < self.ptv_fraction <= 1:
            raise ConfigError(f"ptv_fraction must be in (0, 1], got {self.ptv_fraction}")


@dataclass(frozen=True)
class PreprocessReport:
    """What the filter removed and kept. Indices refer to the input matrix."""

    offsets: Tuple[float, ...]
    ptv: Tuple[float, ...]
    kept_rows: Tuple[int, ...]
    threshold: float

    def to_dict(self) -> dict:
        return {
            "offsets": list(self.offsets),
            "ptv": list(self.ptv),
            "kept_rows": list(self.kept_rows),
            "threshold": self.threshold,
        }


def offset_reduce(M: SignalMatrix) -> Tuple[SignalMatrix, np.ndarray]:
    """
    Subtract each row's minimum so every row starts at 0.

    Returns:
        Tuple of the reduced matrix and the per-row offsets removed
    """
    offsets = M.values.min(axis=1)
    reduced = SignalMatrix(M.values - offsets[:, None], M.row_labels)
    return reduced, offsets


def peak_to_valley_filter(M: SignalMatrix, cfg: PreprocessConfig) -> Tuple[SignalMatrix, PreprocessReport]:
    """
    Keep rows whose peak-to-valley value exceeds a fraction of the largest one.

    The row(s) with the largest value are always kept, so the result is never
    empty. Row order is preserved.

    Args:
        M: Input matrix
        cfg: Filter settings

    Returns:
        Tuple of the filtered matrix and a report of the selection

    Raises:
        DataError: If every row is constant
    """
    reduced, offsets = offset_reduce(M)
    ptv = reduced.values.max(axis=1)
    max_ptv = float(ptv.max())
    if max_ptv <= 0:
        raise DataError("no dynamic rows to filter: every row is constant")

    threshold = cfg.ptv_fraction * max_ptv
    keep = (ptv > threshold) | (ptv == max_ptv)
    kept_rows = tuple(int(i) for i in np.flatnonzero(keep))

    source = M if cfg.restore_offsets else reduced
    filtered = source.take_rows(kept_rows)

    report = PreprocessReport(
        offsets=tuple(float(c) for c in offsets),
        ptv=tuple(float(p) for p in ptv),
        kept_rows=kept_rows,
        threshold=threshold,
    )
    logger.debug(f"Peak-to-valley threshold {threshold:.6g} (max {max_ptv:.6g})")
    return filtered, report


def preprocess(M: SignalMatrix, cfg: PreprocessConfig) -> Tuple[SignalMatrix, PreprocessReport]:
    """Run the full preparation pipeline and log how many rows survive."""
    filtered, report = peak_to_valley_filter(M, cfg)
    logger.info(
        f"Out of {M.n_rows} processes {filtered.n_rows} are left "
        f"(peak-to-valley > {cfg.ptv_fraction:.0%} of maximum)"
    )
    return filtered, report
