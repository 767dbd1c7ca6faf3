"""
Result document: the versioned JSON record of one segmentation run.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from ..core import DataError, Segmentation, SegmentationResult, SignalMatrix, validate_segmentation
from ..variance import matrix_variance, segment_profile

logger = logging.getLogger("trace_segmenter.utils.result_document")

SCHEMA_VERSION = "1.0"

# Excluded when comparing two runs for determinism
TIMING_FIELDS = ("timing",)


def build_result_document(M: SignalMatrix, result: SegmentationResult,
                          config: Dict[str, Any],
                          input_summary: Dict[str, Any],
                          initial: Optional[Segmentation] = None) -> Dict[str, Any]:
    """
    Assemble the result document for an analysed matrix.

    Boundaries are 0-based; ``boundaries_1based`` gives, for each boundary, the
    1-based number of the first sample of the following segment.

    Args:
        M: The matrix the optimizer ran on (after preprocessing)
        result: Optimizer result
        config: Echo of the effective run configuration
        input_summary: Rows, samples and kept rows of the input
        initial: Presegmentation handed to the optimizer, if any
    """
    seg = result.segmentation
    baseline = matrix_variance(M)
    document = {
        "schema_version": SCHEMA_VERSION,
        "input": dict(input_summary, analysed_rows=M.n_rows, samples=M.n_samples,
                      row_labels=list(M.row_labels) if M.row_labels is not None else None),
        "config": config,
        "algorithm": result.algorithm,
        "segments": seg.num_segments,
        "boundaries": list(seg.boundaries),
        "boundaries_1based": [b + 1 for b in seg.boundaries],
        "initial_boundaries": list(initial.boundaries) if initial is not None else None,
        "initial_objective": result.initial_objective,
        "objective": result.objective,
        "baseline_objective": baseline,
        "variance_reduction": baseline - result.objective,
        "iterations": result.iterations,
        "objective_trace": list(result.objective_trace),
        "segment_stats": segment_profile(M, seg),
        "timing": {"elapsed_seconds": result.elapsed},
    }
    return document


def write_result_document(document: Dict[str, Any], path: str) -> None:
    """Write a result document as indented JSON."""
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w") as f:
        json.dump(document, f, indent=2)
        f.write("\n")
    logger.info(f"Saved result document to {path}")


def read_result_document(path: str) -> Dict[str, Any]:
    """
    Read a result document and check its boundaries.

    Raises:
        DataError: If the file is not a valid result document
    """
    try:
        with open(path, "r") as f:
            document = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise DataError(f"Error reading result document {path}: {e}") from e

    if document.get("schema_version") != SCHEMA_VERSION:
        raise DataError(f"Unsupported schema version: {document.get('schema_version')}")
    seg = Segmentation(tuple(document["boundaries"]), document["input"]["samples"])
    violation = validate_segmentation(seg, seg.n)
    if violation is not None:
        raise DataError(f"Result document has invalid boundaries: {violation}")
    return document


def comparable_view(document: Dict[str, Any], exclude: Sequence[str] = TIMING_FIELDS) -> Dict[str, Any]:
    """Copy of a document without its timing fields."""
    return {key: value for key, value in document.items() if key not in exclude}
