"""
Optimizers for the segmented-variance objective.

``brute_force_segment`` enumerates every boundary placement and is the exact
oracle. ``greedy_segment`` repeatedly moves each boundary to the best position
between its neighbours until no move improves the objective.
"""

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeRemainingColumn,
)

from .core import (
    ConfigError,
    CostGuardError,
    Segmentation,
    SegmentationError,
    SegmentationResult,
    SignalMatrix,
    uniform_presegmentation,
    validate_segmentation,
)
from .variance import (
    PrefixStats,
    build_prefix_stats,
    segment_cost,
    segment_cost_table,
    segmented_variance,
)

logger = logging.getLogger("trace_segmenter.segmenter")

DEFAULT_BRUTE_FORCE_LIMIT = 10**9
CANDIDATE_RANGES = ("both", "segment")
# Largest sample count for which brute force precomputes the (n + 1)² cost table
TABLE_MAX_SAMPLES = 2048


@dataclass(frozen=True)
class GreedyConfig:
    """
    Loop control for :func:`greedy_segment`.

    Attributes:
        epsilon: Minimum absolute improvement for a boundary move to be accepted
        max_iterations: Cap on outer passes (None for no cap)
        initial: Starting segmentation (None for the uniform presegmentation)
        candidate_range: "both" scans the open interval between the two
            neighbouring boundaries; "segment" only scans positions inside the
            boundary's own (left) segment
    """

    epsilon: float = 1e-12
    max_iterations: Optional[int] = None
    initial: Optional[Segmentation] = None
    candidate_range: str = "both"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be at least 1, got {self.max_iterations}")
        if self.candidate_range not in CANDIDATE_RANGES:
            raise ConfigError(
                f"candidate_range must be one of {CANDIDATE_RANGES}, got {self.candidate_range!r}"
            )


def _check_segment_count(n: int, s: int) -> None:
    if s < 1:
        raise SegmentationError(f"segment count must be at least 1, got {s}")
    if s > n:
        raise SegmentationError(f"more segments than samples ({s} > {n})")


def estimate_combinations(n: int, s: int) -> int:
    """Number of boundary placements for ``s`` segments over ``n`` samples."""
    _check_segment_count(n, s)
    return math.comb(n - 1, s - 1)


def local_pair_cost(ps: PrefixStats, lo: int, mid: int, hi: int) -> float:
    """
    Cost of the two segments ``[lo, mid)`` and ``[mid, hi)`` summed over rows.

    This is the quantity one greedy step minimizes over ``mid``.
    """
    if not 0 <= lo < mid < hi <= ps.n_samples:
        raise SegmentationError(
            f"need 0 <= lo < mid < hi <= {ps.n_samples}, got lo={lo}, mid={mid}, hi={hi}"
        )
    return segment_cost(ps, lo, mid) + segment_cost(ps, mid, hi)


def greedy_segment(M: SignalMatrix, s: int, cfg: Optional[GreedyConfig] = None) -> SegmentationResult:
    """
    Approximate the optimal segmentation by greedy boundary refinement.

    Each pass visits the interior boundaries left to right and moves each one to
    the position with the lowest local pair cost, if that beats the current
    cost by more than ``epsilon``. Moves take effect immediately. Passes repeat
    until one pass makes no move.

    Args:
        M: Signal matrix
        s: Number of segments
        cfg: Loop control settings

    Returns:
        SegmentationResult with the pass count in ``iterations``

    Raises:
        SegmentationError: If s is out of range or the initial segmentation is invalid
    """
    cfg = cfg or GreedyConfig()
    n = M.n_samples
    _check_segment_count(n, s)

    initial = cfg.initial or uniform_presegmentation(n, s)
    violation = validate_segmentation(initial, n)
    if violation is not None:
        raise SegmentationError(f"invalid initial segmentation: {violation}")
    if initial.num_segments != s:
        raise SegmentationError(
            f"initial segmentation has {initial.num_segments} segments, expected {s}"
        )

    start = time.perf_counter()
    ps = build_prefix_stats(M)
    edges = initial.edges()
    initial_objective = segmented_variance(M, initial)
    objective = initial_objective
    trace: List[float] = []

    passes = 0
    while True:
        passes += 1
        new_optimum = False
        for h in range(1, s):
            lo, current, hi = edges[h - 1], edges[h], edges[h + 1]
            if cfg.candidate_range == "both":
                candidates = np.arange(lo + 1, hi)
            else:
                candidates = np.arange(lo + 1, current + 1)

            costs = segment_cost(ps, lo, candidates) + segment_cost(ps, candidates, hi)
            current_cost = local_pair_cost(ps, lo, current, hi)
            best = int(np.argmin(costs))
            best_cost = float(costs[best])

            if best_cost < current_cost - cfg.epsilon:
                target = int(candidates[best])
                logger.debug(
                    f"Pass {passes}: boundary {h} moved {current} -> {target} "
                    f"(local cost {current_cost:.6g} -> {best_cost:.6g})"
                )
                edges[h] = target
                objective = max(objective - (current_cost - best_cost), 0.0)
                trace.append(objective)
                new_optimum = True

        if not new_optimum:
            break
        if cfg.max_iterations is not None and passes >= cfg.max_iterations:
            logger.info(f"Greedy stopped at the pass cap ({cfg.max_iterations})")
            break

    elapsed = time.perf_counter() - start
    segmentation = Segmentation(tuple(edges[1:-1]), n)
    logger.info(
        f"Greedy finished after {passes} passes and {len(trace)} moves: "
        f"objective {initial_objective:.6g} -> {objective:.6g} in {elapsed:.3f}s"
    )
    return SegmentationResult(
        segmentation=segmentation,
        objective=objective,
        iterations=passes,
        objective_trace=tuple(trace),
        elapsed=elapsed,
        algorithm="greedy",
        initial_objective=initial_objective,
    )


class _SegmentCosts:
    """
    ``cost(lo, hi)`` lookup for the enumeration, picklable for worker processes.

    Reads a precomputed table when one is given, otherwise evaluates
    :func:`segment_cost` on the prefix stats.
    """

    def __init__(self, ps: PrefixStats, table: Optional[np.ndarray] = None):
        self.ps = ps
        self.table = table

    def __call__(self, lo, hi):
        if self.table is not None:
            return self.table[lo, hi]
        return segment_cost(self.ps, lo, hi)


def _enumerate_chunk(cost: _SegmentCosts, n: int, s: int, first: Optional[int]) -> Tuple[float, Tuple[int, ...], int]:
    """
    Best placement among all combinations whose first boundary is ``first``.

    Combinations are visited in lexicographic order and only a strictly better
    cost replaces the incumbent, so exact ties resolve to the smallest vector.
    The last boundary is swept as one vector per prefix.

    Returns:
        Tuple of (best cost, best boundaries, combinations evaluated)
    """
    if s == 1:
        return float(cost(0, n)), (), 1

    best_cost = math.inf
    best: Tuple[int, ...] = ()
    evaluated = 0

    if s == 2:
        lasts = np.arange(1, n)
        costs = cost(0, lasts) + cost(lasts, n)
        i = int(np.argmin(costs))
        return float(costs[i]), (int(lasts[i]),), len(lasts)

    head_cost = cost(0, first)
    # Middle boundaries between `first` and the last one; the last needs room
    for middle in combinations(range(first + 1, n - 1), s - 3):
        prefix_cost = head_cost
        previous = first
        for b in middle:
            prefix_cost += cost(previous, b)
            previous = b
        lasts = np.arange(previous + 1, n)
        costs = prefix_cost + cost(previous, lasts) + cost(lasts, n)
        i = int(np.argmin(costs))
        evaluated += len(lasts)
        if costs[i] < best_cost:
            best_cost = float(costs[i])
            best = (first, *middle, int(lasts[i]))
    return best_cost, best, evaluated


def _first_boundaries(n: int, s: int) -> List[Optional[int]]:
    if s <= 2:
        return [None]
    # Leave room for s - 2 further boundaries after the first
    return list(range(1, n - s + 2))


def brute_force_segment(M: SignalMatrix, s: int, force: bool = False,
                        limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
                        max_workers: Optional[int] = 1,
                        show_progress: bool = False) -> SegmentationResult:
    """
    Find the globally optimal segmentation by exhaustive enumeration.

    The enumeration is split into chunks by first boundary. Chunks run in a
    process pool when ``max_workers`` is greater than one; results are merged
    by (objective, boundaries) so the answer does not depend on scheduling.
    Cost grows as C(n - 1, s - 1).

    Args:
        M: Signal matrix
        s: Number of segments
        force: Run even when the combination count exceeds ``limit``
        limit: Largest combination count allowed without ``force``
        max_workers: Worker processes (None for one per CPU)
        show_progress: Display a progress bar over chunks

    Returns:
        SegmentationResult with the combination count in ``iterations``

    Raises:
        SegmentationError: If s is out of range
        CostGuardError: If the run is refused by the cost guard
    """
    n = M.n_samples
    total = estimate_combinations(n, s)
    if total > limit and not force:
        raise CostGuardError(total, limit)
    logger.info(f"Brute force over {total} combinations ({M.n_rows} rows, {n} samples, {s} segments)")

    start = time.perf_counter()
    ps = build_prefix_stats(M)
    # s <= 2 reads each cost once; no table
    table = segment_cost_table(ps) if s >= 3 and n <= TABLE_MAX_SAMPLES else None
    cost = _SegmentCosts(ps, table)
    chunks = _first_boundaries(n, s)
    workers = max_workers or os.cpu_count() or 1

    outcomes = []
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TaskProgressColumn(),
        TimeRemainingColumn(),
        disable=not show_progress,
    ) as progress:
        task = progress.add_task("Enumerating segmentations", total=len(chunks))
        if workers > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                futures = [
                    executor.submit(_enumerate_chunk, cost, n, s, first)
                    for first in chunks
                ]
                for future in as_completed(futures):
                    outcomes.append(future.result())
                    progress.update(task, advance=1)
        else:
            for first in chunks:
                outcomes.append(_enumerate_chunk(cost, n, s, first))
                progress.update(task, advance=1)

    best_cost, best, _ = min(outcomes, key=lambda outcome: (outcome[0], outcome[1]))
    evaluated = sum(outcome[2] for outcome in outcomes)
    if evaluated != total:
        logger.warning(f"Evaluated {evaluated} combinations, expected {total}")

    segmentation = Segmentation(best, n)
    objective = segmented_variance(M, segmentation)
    elapsed = time.perf_counter() - start
    logger.info(
        f"Brute force optimum {list(best)} with objective {objective:.6g} "
        f"(enumeration cost {best_cost:.6g}) in {elapsed:.3f}s"
    )
    return SegmentationResult(
        segmentation=segmentation,
        objective=objective,
        iterations=evaluated,
        objective_trace=(),
        elapsed=elapsed,
        algorithm="brute-force",
        initial_objective=objective,
    )
