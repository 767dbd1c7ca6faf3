"""
CSV ingestion and writing for signal matrices.
"""

import logging
from typing import List, Optional

import numpy as np
import pandas as pd

from ..core import DataError, SignalMatrix

logger = logging.getLogger("trace_segmenter.utils.file_utils")

ORIENTATIONS = ("rows-are-signals", "rows-are-samples")


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except (TypeError, ValueError):
        return False


def _data_line_numbers(path: str) -> List[int]:
    # 1-based file line of each non-blank line, in the order pandas yields rows
    try:
        with open(path, encoding="utf-8", errors="replace") as f:
            return [i for i, text in enumerate(f, start=1) if text.strip()]
    except OSError:
        return []


def _file_line(line_numbers: List[int], row: int) -> int:
    if row < len(line_numbers):
        return line_numbers[row]
    return row + 1


def load_csv(path: str, orientation: str = "rows-are-signals") -> SignalMatrix:
    """
    Read a rectangular numeric CSV into a SignalMatrix.

    A first line made only of non-numeric cells is treated as a header of column
    labels. With ``rows-are-samples`` the file is transposed and the header
    becomes the row labels; with ``rows-are-signals`` the header is dropped.
    Error coordinates are 1-based (file line, column).

    Args:
        path: Path to the CSV file
        orientation: "rows-are-signals" or "rows-are-samples"

    Returns:
        SignalMatrix with finite values

    Raises:
        DataError: On ragged rows, non-numeric cells, or non-finite values
    """
    if orientation not in ORIENTATIONS:
        raise DataError(f"orientation must be one of {ORIENTATIONS}, got {orientation!r}")

    logger.info(f"Reading CSV: {path}")
    try:
        df = pd.read_csv(
            path,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError as e:
        raise DataError(f"{path} is empty") from e
    except pd.errors.ParserError as e:
        # pandas reports the offending line, e.g. "Expected 3 fields in line 4, saw 5"
        raise DataError(f"ragged rows in {path}: {e}") from e

    line_numbers = _data_line_numbers(path)
    labels: Optional[list] = None
    header_rows = 0
    if len(df) > 0 and not any(_is_number(cell) for cell in df.iloc[0] if isinstance(cell, str)):
        labels = [str(cell).strip() for cell in df.iloc[0]]
        df = df.iloc[1:]
        header_rows = 1
    if df.empty:
        raise DataError(f"{path} contains no data rows")

    values = np.empty(df.shape, dtype=np.float64)
    for r, row in enumerate(df.itertuples(index=False)):
        for c, cell in enumerate(row):
            line, column = _file_line(line_numbers, r + header_rows), c + 1
            if not isinstance(cell, str):
                raise DataError(f"ragged row at line {line}: missing value in column {column}")
            try:
                value = float(cell)
            except ValueError:
                raise DataError(f"non-numeric value {cell!r} at ({line}, {column})") from None
            if not np.isfinite(value):
                raise DataError(f"non-finite value {cell!r} at ({line}, {column})")
            values[r, c] = value

    if orientation == "rows-are-samples":
        return SignalMatrix(values.T, labels)
    if labels is not None:
        logger.debug("Dropping header row of sample labels")
    return SignalMatrix(values)


def write_csv(M: SignalMatrix, path: str, orientation: str = "rows-are-signals") -> None:
    """
    Write a matrix in the format :func:`load_csv` reads.

    Values are written with 17 significant digits so they read back exactly.
    Row labels are written as a header only for ``rows-are-samples``.
    """
    if orientation not in ORIENTATIONS:
        raise DataError(f"orientation must be one of {ORIENTATIONS}, got {orientation!r}")

    if orientation == "rows-are-samples":
        df = pd.DataFrame(M.values.T, columns=M.row_labels)
        df.to_csv(path, index=False, header=M.row_labels is not None, float_format="%.17g")
    else:
        df = pd.DataFrame(M.values)
        df.to_csv(path, index=False, header=False, float_format="%.17g")
    logger.debug(f"Saved {M.n_rows}x{M.n_samples} matrix to {path}")
